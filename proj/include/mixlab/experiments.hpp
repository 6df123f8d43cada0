#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mixlab/em.hpp"
#include "mixlab/model.hpp"

namespace mixlab {

struct GeneratorSpec {
  ComponentFamily family;
  MixingDistribution g_star;
};

struct ExperimentConfig {
  GeneratorSpec generator;
  std::vector<std::size_t> n_grid;  // strictly increasing
  std::size_t reps = 1;
  FitConfig fit;
  std::uint64_t master_seed = 0;
  std::string output_path;  // CSV; summary goes to <stem>.summary.json; empty = no files
  std::size_t threads = 0;  // 0 = hardware concurrency
};

struct ReplicationResult {
  std::size_t n = 0;
  std::size_t rep = 0;
  double kw_dist = -1.0;  // -1 sentinel on failed replications
  double objective = 0.0;
  bool converged = false;
  std::int64_t wall_time_ms = 0;
};

struct SummaryRow {
  std::size_t n = 0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  std::size_t failures = 0;
};

// One (n, rep) cell per replication, seeded by mix(master_seed, n, rep) so
// the sweep is order-independent and parallelizable. Individual fit
// failures are recorded (sentinel kw_dist, converged=false), never abort
// the sweep. Rows are written to the CSV in deterministic (n, rep) order
// as soon as their predecessors are complete.
std::vector<ReplicationResult> run_consistency(const ExperimentConfig& cfg);

std::vector<SummaryRow> summarize(const std::vector<ReplicationResult>& rows,
                                  const std::vector<std::size_t>& n_grid);

struct DegeneracyRow {
  std::size_t n = 0;
  std::size_t rep = 0;
  double plain_objective = 0.0;     // l_n(G_k) at the largest k
  double degenerate_bound = 0.0;    // the log k - ... lower bound at the largest k
  bool bound_ok = false;            // bound held at every k
  double penalized_objective = 0.0; // best penalized l~_n
  double kw_dist = -1.0;
  double min_sigma_over_sn = 0.0;   // smallest fitted sigma / s_n
  bool converged = false;
  std::int64_t wall_time_ms = 0;
};

// Juxtaposes the diverging plain likelihood along the paper's G_k sequence
// with the stable penalized estimate, per replication. Requires the
// free-variance normal family.
std::vector<DegeneracyRow> run_degeneracy_comparison(const ExperimentConfig& cfg,
                                                     const std::vector<double>& k_list);

}  // namespace mixlab
