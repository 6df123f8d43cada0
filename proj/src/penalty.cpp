#include "mixlab/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mixlab/errors.hpp"

namespace mixlab {

double penalty_component(const PenaltyConfig& cfg, std::size_t n, double sigma) {
  if (!(sigma > 0.0)) throw domain_error("penalty_component: sigma must be > 0");
  if (!(cfg.scale_anchor > 0.0)) throw contract_error("penalty: scale_anchor must be > 0");
  if (n < 1) throw contract_error("penalty: n must be >= 1");
  double v = sigma * sigma;
  double ratio_log = std::log(v / cfg.scale_anchor);
  double inv_n = 1.0 / static_cast<double>(n);
  switch (cfg.form) {
    case PenaltyForm::InversePlusLog:
      return -inv_n * (cfg.scale_anchor / v + ratio_log);
    case PenaltyForm::LogOnly:
      return -inv_n * ratio_log;
  }
  throw contract_error("unknown penalty form");
}

double penalty_total(const PenaltyConfig& cfg, std::size_t n, const MixingDistribution& g) {
  validate(g);
  double acc = 0.0;
  for (const auto& a : g.atoms) {
    if (!a.scale) throw contract_error("penalty_total: every atom must carry a scale");
    acc += penalty_component(cfg, n, *a.scale);
  }
  return acc;
}

PenaltyPropertyReport validate_penalty_properties(const PenaltyConfig& cfg,
                                                  const std::vector<std::size_t>& n_grid,
                                                  const std::vector<double>& sigma_grid) {
  if (n_grid.empty() || sigma_grid.empty())
    throw contract_error("validate_penalty_properties: grids must be nonempty");

  PenaltyPropertyReport rep;
  std::ostringstream details;

  // P2 upper: sup over sigma of the positive part, per n. For the default
  // form the penalty is everywhere negative so the sup is exactly 0;
  // otherwise require sup+/n to shrink along the grid to a small value.
  bool all_zero = true;
  std::vector<double> pos_ratio;
  for (std::size_t n : n_grid) {
    double sup_pos = 0.0;
    for (double s : sigma_grid) sup_pos = std::max(sup_pos, std::max(0.0, penalty_component(cfg, n, s)));
    if (sup_pos > 0.0) all_zero = false;
    pos_ratio.push_back(sup_pos / static_cast<double>(n));
  }
  if (all_zero) {
    rep.p2_upper_ok = true;
    details << "P2 upper: positive part identically 0 on the grid.\n";
  } else {
    bool decreasing = true;
    for (std::size_t i = 1; i < pos_ratio.size(); ++i)
      if (!(pos_ratio[i] < pos_ratio[i - 1])) decreasing = false;
    rep.p2_upper_ok = decreasing && pos_ratio.back() < 1e-3;
    details << "P2 upper: sup+/n from " << pos_ratio.front() << " to " << pos_ratio.back()
            << (rep.p2_upper_ok ? " (shrinks)" : " (violation)") << "\n";
  }

  // P2 lower: |p_n(sigma)|/n must decrease along n_grid at each sigma.
  rep.p2_lower_ok = true;
  for (double s : sigma_grid) {
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t n : n_grid) {
      double ratio = std::abs(penalty_component(cfg, n, s)) / static_cast<double>(n);
      if (!(ratio < prev)) {
        rep.p2_lower_ok = false;
        details << "P2 lower: |p_n|/n not decreasing at sigma=" << s << ", n=" << n << "\n";
      }
      prev = ratio;
    }
  }
  if (rep.p2_lower_ok) details << "P2 lower: |p_n(sigma)|/n decreasing along n grid at every sigma.\n";

  // P3: p_n(sigma) < (log n)^2 log(sigma) for sigma < log(n)/n, for all
  // grid n beyond some n0 (the property is asymptotic; n0 is recorded).
  std::vector<bool> n_ok(n_grid.size(), true);
  std::vector<double> n_margin(n_grid.size(), std::numeric_limits<double>::infinity());
  bool any_applicable = false;
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    std::size_t n = n_grid[i];
    double boundary = std::log(static_cast<double>(n)) / static_cast<double>(n);
    double log_n = std::log(static_cast<double>(n));
    for (double s : sigma_grid) {
      if (!(s < boundary)) continue;
      any_applicable = true;
      double lhs = penalty_component(cfg, n, s);
      double rhs = log_n * log_n * std::log(s);
      n_margin[i] = std::min(n_margin[i], rhs - lhs);
      if (!(lhs < rhs)) n_ok[i] = false;
    }
  }
  rep.p3_ok = false;
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    bool tail_ok = true;
    for (std::size_t j = i; j < n_grid.size(); ++j) tail_ok = tail_ok && n_ok[j];
    if (tail_ok) {
      rep.p3_ok = any_applicable;
      rep.p3_first_n = n_grid[i];
      rep.p3_worst_margin = std::numeric_limits<double>::infinity();
      for (std::size_t j = i; j < n_grid.size(); ++j)
        rep.p3_worst_margin = std::min(rep.p3_worst_margin, n_margin[j]);
      break;
    }
  }
  if (!any_applicable) details << "P3: no grid sigma below log(n)/n; inconclusive.\n";
  if (rep.p3_ok) {
    details << "P3 holds for every grid n >= " << rep.p3_first_n << " (worst margin "
            << rep.p3_worst_margin << ").\n";
  } else {
    details << "P3 violated at the largest grid n; penalty is not severe enough.\n";
  }

  rep.passed = rep.p2_upper_ok && rep.p2_lower_ok && rep.p3_ok;
  rep.details = details.str();
  return rep;
}

}  // namespace mixlab
