#include "mixlab/npmle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "mixlab/density.hpp"
#include "mixlab/errors.hpp"

namespace mixlab {

namespace {

constexpr double kPruneWeight = 1e-10;

std::vector<double> build_grid(const ComponentFamily& family, const Sample& sample,
                               std::size_t target_atoms) {
  double lo = *std::min_element(sample.values.begin(), sample.values.end());
  double hi = *std::max_element(sample.values.begin(), sample.values.end());
  std::vector<double> grid;
  if (hi <= lo) {
    grid.push_back(lo);
    return grid;
  }
  if (family.kind == FamilyKind::Poisson) {
    // Integer-aligned: spacing 1/q so every integer in range is an atom.
    double range = hi - lo;
    auto q = static_cast<std::size_t>(
        std::max(1.0, std::floor(static_cast<double>(target_atoms - 1) / range)));
    double h = 1.0 / static_cast<double>(q);
    auto count = static_cast<std::size_t>(std::llround(range * static_cast<double>(q)));
    for (std::size_t i = 0; i <= count; ++i) grid.push_back(lo + h * static_cast<double>(i));
  } else {
    double h = (hi - lo) / static_cast<double>(target_atoms - 1);
    for (std::size_t i = 0; i < target_atoms; ++i) grid.push_back(lo + h * static_cast<double>(i));
  }
  return grid;
}

}  // namespace

double npmle_gradient(const ComponentFamily& family, const MixingDistribution& g,
                      const Sample& sample, double theta) {
  ParamPoint atom{theta, std::nullopt};
  double acc = 0.0;
  for (double x : sample.values) {
    double fx = mixture_density(family, g, x);
    acc += component_density(family, atom, x) / fx;
  }
  return acc - static_cast<double>(sample.size());
}

NpmleResult npmle_fit(const ComponentFamily& family, const Sample& sample,
                      const NpmleConfig& cfg) {
  validate(sample);
  if (family.kind == FamilyKind::NormalFreeVariance)
    throw contract_error("npmle_fit: free-variance normal NPMLE is unbounded; use Poisson or "
                         "equal-variance normal");
  if (cfg.grid_atoms < 2) throw contract_error("npmle_fit: grid needs at least 2 atoms");
  if (!(cfg.tol_grad > 0.0)) throw contract_error("npmle_fit: tol_grad must be > 0");

  const std::size_t n = sample.size();
  const double dn = static_cast<double>(n);
  std::vector<double> grid = build_grid(family, sample, cfg.grid_atoms);
  const std::size_t gsz = grid.size();

  // Component density matrix, n x grid, computed once.
  std::vector<double> dens(n * gsz);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t g2 = 0; g2 < gsz; ++g2)
      dens[i * gsz + g2] =
          component_density(family, ParamPoint{grid[g2], std::nullopt}, sample.values[i]);

  // Active-set support insertion: weight-EM on the active atoms, then add
  // the grid atom with the largest gradient until the certificate holds.
  std::vector<std::size_t> active;
  std::vector<double> weights;
  {
    // Start from the atom closest to the sample mean.
    double mean = 0.0;
    for (double v : sample.values) mean += v;
    mean /= dn;
    std::size_t best = 0;
    for (std::size_t g2 = 1; g2 < gsz; ++g2)
      if (std::abs(grid[g2] - mean) < std::abs(grid[best] - mean)) best = g2;
    active.push_back(best);
    weights.push_back(1.0);
  }

  std::vector<double> fx(n);
  std::vector<double> gradient(gsz);
  double grad_sup = std::numeric_limits<double>::infinity();
  std::size_t rounds = 0;
  const double target = 0.5 * cfg.tol_grad * dn;  // aim below the certificate

  for (; rounds < cfg.max_rounds; ++rounds) {
    // Multiplicative fixed-point updates w_a <- w_a (1/n) sum_i f_ia / f_i;
    // at the fixed point the gradient vanishes on the active support.
    for (std::size_t it = 0; it < cfg.max_inner; ++it) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t a = 0; a < active.size(); ++a)
          acc += weights[a] * dens[i * gsz + active[a]];
        fx[i] = acc;
      }
      double worst = 0.0;
      for (std::size_t a = 0; a < active.size(); ++a) {
        double mult = 0.0;
        for (std::size_t i = 0; i < n; ++i) mult += dens[i * gsz + active[a]] / fx[i];
        mult /= dn;
        weights[a] *= mult;
        worst = std::max(worst, std::abs(mult - 1.0));
      }
      if (worst < 1e-12) break;
    }

    // Prune and renormalize.
    {
      std::vector<std::size_t> na;
      std::vector<double> nw;
      double sum = 0.0;
      for (std::size_t a = 0; a < active.size(); ++a)
        if (weights[a] >= kPruneWeight) {
          na.push_back(active[a]);
          nw.push_back(weights[a]);
          sum += weights[a];
        }
      for (double& w : nw) w /= sum;
      active = std::move(na);
      weights = std::move(nw);
    }

    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t a = 0; a < active.size(); ++a)
        acc += weights[a] * dens[i * gsz + active[a]];
      fx[i] = acc;
    }
    for (std::size_t g2 = 0; g2 < gsz; ++g2) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += dens[i * gsz + g2] / fx[i];
      gradient[g2] = acc - dn;
    }
    std::size_t arg = 0;
    grad_sup = gradient[0];
    for (std::size_t g2 = 1; g2 < gsz; ++g2)
      if (gradient[g2] > grad_sup) {
        grad_sup = gradient[g2];
        arg = g2;
      }
    if (grad_sup <= target) break;
    if (std::find(active.begin(), active.end(), arg) != active.end()) break;  // stalled
    // Insert with a small weight taken proportionally from the others.
    for (double& w : weights) w *= 0.9;
    active.push_back(arg);
    weights.push_back(0.1);
  }

  NpmleResult out;
  MixingDistribution g;
  for (std::size_t a = 0; a < active.size(); ++a) {
    g.atoms.push_back({grid[active[a]], std::nullopt});
    g.weights.push_back(weights[a]);
  }
  double sum = 0.0;
  for (double w : g.weights) sum += w;
  g.mass = sum;
  out.estimate = canonicalize(g);
  out.gradient_sup = grad_sup;
  out.support_size = out.estimate.size();
  std::set<double> distinct(sample.values.begin(), sample.values.end());
  out.distinct_obs = distinct.size();
  out.certified = grad_sup <= cfg.tol_grad * dn;
  out.rounds = rounds;
  return out;
}

}  // namespace mixlab
