#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mixlab/model.hpp"

namespace mixlab {

enum class PenaltyForm {
  // -(1/n) * (anchor/sigma^2 + log(sigma^2/anchor)); the scale-invariant
  // form of the additive variance penalty. Diverges to -infinity as
  // sigma -> 0 or sigma -> infinity, maximized at sigma^2 = anchor.
  InversePlusLog,
  // -(1/n) * log(sigma^2 / anchor). Deliberately too weak near 0; kept as
  // a negative control for the property validator.
  LogOnly,
};

struct PenaltyConfig {
  double scale_anchor = 1.0;  // s_n^2, or 1.0 for the raw form
  PenaltyForm form = PenaltyForm::InversePlusLog;
};

// Per-component penalty at standard deviation sigma with coefficient 1/n.
double penalty_component(const PenaltyConfig& cfg, std::size_t n, double sigma);

// Additive total over the atoms' scales (P1). Every atom must carry one.
double penalty_total(const PenaltyConfig& cfg, std::size_t n, const MixingDistribution& g);

struct PenaltyPropertyReport {
  bool passed = false;
  bool p2_upper_ok = false;   // positive part o(n) on the grid (0 for the default form)
  bool p2_lower_ok = false;   // |p_n(sigma)|/n decreasing along n_grid at each sigma
  bool p3_ok = false;         // exists grid n0 with P3 holding for all grid n >= n0
  std::size_t p3_first_n = 0; // smallest such n0 (0 when none)
  double p3_worst_margin = 0.0;  // min over applicable points of RHS - penalty at n >= n0
  std::string details;
};

// Certifies P2/P3 on finite grids; failures are reported, not thrown.
// P3 is checked at grid sigmas below log(n)/n against (log n)^2 log(sigma).
PenaltyPropertyReport validate_penalty_properties(const PenaltyConfig& cfg,
                                                  const std::vector<std::size_t>& n_grid,
                                                  const std::vector<double>& sigma_grid);

}  // namespace mixlab
