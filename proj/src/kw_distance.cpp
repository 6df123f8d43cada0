#include "mixlab/kw_distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mixlab/errors.hpp"

namespace mixlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// E(t) = integral of exp(-|u|) du from 0 to t; odd, E(+inf) = 1.
double weight_antiderivative(double t) {
  if (t == kInf) return 1.0;
  if (t == -kInf) return -1.0;
  double v = 1.0 - std::exp(-std::abs(t));
  return t >= 0.0 ? v : -v;
}

// Integral of exp(-|u|) over [a, b]; handles cells straddling 0 and
// unbounded upper ends exactly.
double weight_integral(double a, double b) { return weight_antiderivative(b) - weight_antiderivative(a); }

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

double cdf1(const MixingDistribution& g, double t) {
  double acc = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j)
    if (g.atoms[j].mean <= t) acc += g.weights[j];
  return acc;
}

double cdf2(const MixingDistribution& g, double t, double s) {
  double acc = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j)
    if (g.atoms[j].mean <= t && *g.atoms[j].scale <= s) acc += g.weights[j];
  return acc;
}

KwDistanceResult kw1(const MixingDistribution& g1, const MixingDistribution& g2) {
  std::vector<double> grid;
  grid.reserve(g1.size() + g2.size());
  for (const auto& a : g1.atoms) grid.push_back(a.mean);
  for (const auto& a : g2.atoms) grid.push_back(a.mean);
  grid = sorted_unique(grid);

  // Below grid[0] both cdfs are 0; on [grid[i], grid[i+1]) they are
  // constant at their values at grid[i]; the last cell extends to +inf
  // where the difference is |mass1 - mass2|.
  KwDistanceResult out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double upper = i + 1 < grid.size() ? grid[i + 1] : kInf;
    double d = std::abs(cdf1(g1, grid[i]) - cdf1(g2, grid[i]));
    out.value += d * weight_integral(grid[i], upper);
    ++out.cells_evaluated;
  }
  return out;
}

KwDistanceResult kw2(const MixingDistribution& g1, const MixingDistribution& g2) {
  for (const auto& a : g1.atoms)
    if (!a.scale) throw contract_error("kw_distance dim=2 requires every atom to carry a scale");
  for (const auto& a : g2.atoms)
    if (!a.scale) throw contract_error("kw_distance dim=2 requires every atom to carry a scale");

  std::vector<double> us, vs;
  for (const auto& a : g1.atoms) { us.push_back(a.mean); vs.push_back(*a.scale); }
  for (const auto& a : g2.atoms) { us.push_back(a.mean); vs.push_back(*a.scale); }
  us = sorted_unique(us);
  vs = sorted_unique(vs);

  // The weight exp(-|t|-|s|) factorizes, so each rectangular cell
  // contributes |dG| times the product of the two axis integrals.
  KwDistanceResult out;
  for (std::size_t p = 0; p < us.size(); ++p) {
    double u_hi = p + 1 < us.size() ? us[p + 1] : kInf;
    double wu = weight_integral(us[p], u_hi);
    for (std::size_t q = 0; q < vs.size(); ++q) {
      double v_hi = q + 1 < vs.size() ? vs[q + 1] : kInf;
      double d = std::abs(cdf2(g1, us[p], vs[q]) - cdf2(g2, us[p], vs[q]));
      out.value += d * wu * weight_integral(vs[q], v_hi);
      ++out.cells_evaluated;
    }
  }
  return out;
}

}  // namespace

KwDistanceResult kw_distance(const MixingDistribution& g1, const MixingDistribution& g2, int dim) {
  validate(g1);
  validate(g2);
  if (dim == 1) return kw1(g1, g2);
  if (dim == 2) return kw2(g1, g2);
  throw contract_error("kw_distance: dim must be 1 or 2");
}

}  // namespace mixlab
