#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixlab/model.hpp"
#include "mixlab/penalty.hpp"

namespace mixlab {

enum class FitMode { Plain, Penalized, Constrained, EqualVariance };

struct FitConfig {
  ComponentFamily family;
  std::size_t m = 1;
  FitMode mode = FitMode::Plain;
  // Penalized mode: absent means "anchor at the sample variance s_n^2".
  std::optional<PenaltyConfig> penalty;
  double sigma_floor = 0.0;  // Constrained mode
  std::size_t max_iter = 2000;
  double tol = 1e-8;
  std::size_t restarts = 1;
  std::uint64_t seed = 0;
};

struct FitReport {
  MixingDistribution estimate;  // canonicalized
  std::optional<double> structural_sigma2;  // EqualVariance mode
  std::vector<double> objective_trace;      // winning restart; l_n or penalized l_n
  bool converged = false;
  std::size_t iterations = 0;
  std::size_t best_of_restarts = 0;
  std::string warning;  // set for plain free-variance fits (optimum does not exist)
};

// Row-major n x m responsibility matrix; rows sum to 1.
struct Responsibilities {
  std::vector<double> w;
  std::size_t n = 0;
  std::size_t m = 0;

  double operator()(std::size_t i, std::size_t j) const { return w[i * m + j]; }
};

// w_ij = weight_j f_j(x_i) / f(x_i; G). Throws domain_error naming the
// observation if the mixture density vanishes at some x_i.
Responsibilities e_step(const ComponentFamily& family, const MixingDistribution& g,
                        const Sample& sample);

struct MStepResult {
  MixingDistribution g;
  double structural_sigma2 = 0.0;  // EqualVariance mode
};

// Weighted-mean / weighted-variance updates. Variance treatment by mode:
//   Plain:        sigma_j^2 = SS_j / S_j (floored at 1e-300)
//   Penalized:    sigma_j^2 = (SS_j + 2 a_n/n) / (S_j + 2/n), a_n = anchor
//   Constrained:  plain update, then sigma_j >= sigma_floor
//   EqualVariance: shared sigma^2 = sum_j SS_j / n
// Throws component_death_error when some S_j collapses to zero.
MStepResult m_step(const ComponentFamily& family, FitMode mode, const Responsibilities& resp,
                   const Sample& sample, double penalty_anchor, double sigma_floor);

// Alternates e_step/m_step with `restarts` quantile-spread + jitter
// initializations and returns the best run. Deterministic given
// (cfg.seed, sample).
FitReport em_fit(const FitConfig& cfg, const Sample& sample);

// Objective used by em_fit for the given mode (log-likelihood, plus the
// penalty in Penalized mode).
double fit_objective(const FitConfig& cfg, const ComponentFamily& family,
                     const MixingDistribution& g, const Sample& sample, double penalty_anchor);

}  // namespace mixlab
