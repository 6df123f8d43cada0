#include "mixlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mixlab/errors.hpp"

namespace mixlab {

MixingDistribution dirac(double mean) { return {{{mean, std::nullopt}}, {1.0}, 1.0}; }

MixingDistribution dirac(double mean, double scale) { return {{{mean, scale}}, {1.0}, 1.0}; }

MixingDistribution make_mixing(std::vector<double> means, std::vector<double> weights) {
  MixingDistribution g;
  g.atoms.reserve(means.size());
  for (double m : means) g.atoms.push_back({m, std::nullopt});
  g.weights = std::move(weights);
  g.mass = std::accumulate(g.weights.begin(), g.weights.end(), 0.0);
  return g;
}

MixingDistribution make_mixing2(std::vector<double> means, std::vector<double> scales,
                                std::vector<double> weights) {
  if (means.size() != scales.size()) throw contract_error("make_mixing2: means/scales size mismatch");
  MixingDistribution g;
  g.atoms.reserve(means.size());
  for (std::size_t i = 0; i < means.size(); ++i) g.atoms.push_back({means[i], scales[i]});
  g.weights = std::move(weights);
  g.mass = std::accumulate(g.weights.begin(), g.weights.end(), 0.0);
  return g;
}

MixingDistribution scale_mass(const MixingDistribution& g, double rho) {
  if (!(rho > 0.0) || rho > 1.0) throw contract_error("scale_mass: rho must be in (0, 1]");
  MixingDistribution out = g;
  for (double& w : out.weights) w *= rho;
  out.mass *= rho;
  return out;
}

void validate(const MixingDistribution& g) {
  if (g.atoms.empty()) throw contract_error("mixing distribution has no atoms");
  if (g.atoms.size() != g.weights.size())
    throw contract_error("mixing distribution: atoms/weights size mismatch");
  if (!(g.mass > 0.0) || g.mass > 1.0 + 1e-12)
    throw contract_error("mixing distribution: mass must be in (0, 1]");
  double sum = 0.0;
  for (double w : g.weights) {
    if (!(w > 0.0) || !std::isfinite(w))
      throw contract_error("mixing distribution: weights must be positive and finite");
    sum += w;
  }
  if (std::abs(sum - g.mass) > 1e-12)
    throw contract_error("mixing distribution: weights must sum to mass within 1e-12");
  for (const auto& a : g.atoms) {
    if (!std::isfinite(a.mean)) throw contract_error("mixing distribution: non-finite atom mean");
    if (a.scale && (!(*a.scale > 0.0) || !std::isfinite(*a.scale)))
      throw contract_error("mixing distribution: atom scale must be positive and finite");
  }
}

void validate_pairing(const ComponentFamily& family, const ParamPoint& atom) {
  switch (family.kind) {
    case FamilyKind::Poisson:
      if (atom.scale) throw contract_error("Poisson atoms must not carry a scale");
      if (atom.mean < 0.0) throw contract_error("Poisson rate must be >= 0");
      break;
    case FamilyKind::NormalEqualVariance:
      if (atom.scale) throw contract_error("equal-variance normal atoms must not carry a scale");
      if (!(family.structural_sigma2 > 0.0))
        throw contract_error("equal-variance family needs structural sigma^2 > 0");
      break;
    case FamilyKind::NormalFreeVariance:
      if (!atom.scale) throw contract_error("free-variance normal atoms must carry a scale");
      break;
  }
}

void validate_pairing(const ComponentFamily& family, const MixingDistribution& g) {
  for (const auto& a : g.atoms) validate_pairing(family, a);
}

bool atom_less(const ParamPoint& a, const ParamPoint& b) {
  if (a.mean != b.mean) return a.mean < b.mean;
  double sa = a.scale.value_or(-std::numeric_limits<double>::infinity());
  double sb = b.scale.value_or(-std::numeric_limits<double>::infinity());
  return sa < sb;
}

MixingDistribution canonicalize(const MixingDistribution& g) {
  std::vector<std::size_t> order(g.atoms.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return atom_less(g.atoms[i], g.atoms[j]); });

  MixingDistribution out;
  out.mass = g.mass;
  for (std::size_t idx : order) {
    const ParamPoint& a = g.atoms[idx];
    double w = g.weights[idx];
    if (w == 0.0) continue;
    // Merge only bitwise-equal atoms; near-duplicates are the user's model.
    if (!out.atoms.empty() && out.atoms.back() == a) {
      out.weights.back() += w;
    } else {
      out.atoms.push_back(a);
      out.weights.push_back(w);
    }
  }
  return out;
}

int compare_canonical(const MixingDistribution& a, const MixingDistribution& b) {
  MixingDistribution ca = canonicalize(a);
  MixingDistribution cb = canonicalize(b);
  for (std::size_t i = 0; i < std::min(ca.size(), cb.size()); ++i) {
    if (atom_less(ca.atoms[i], cb.atoms[i])) return -1;
    if (atom_less(cb.atoms[i], ca.atoms[i])) return 1;
    if (ca.weights[i] != cb.weights[i]) return ca.weights[i] < cb.weights[i] ? -1 : 1;
  }
  if (ca.size() != cb.size()) return ca.size() < cb.size() ? -1 : 1;
  if (ca.mass != cb.mass) return ca.mass < cb.mass ? -1 : 1;
  return 0;
}

void validate(const Sample& s) {
  if (s.values.empty()) throw contract_error("sample is empty");
  for (double v : s.values)
    if (!std::isfinite(v)) throw contract_error("sample contains a non-finite value");
}

double sample_mean(const Sample& s) {
  validate(s);
  double acc = 0.0;
  for (double v : s.values) acc += v;
  return acc / static_cast<double>(s.values.size());
}

double sample_variance(const Sample& s) {
  double mean = sample_mean(s);
  double acc = 0.0;
  for (double v : s.values) acc += (v - mean) * (v - mean);
  return acc / static_cast<double>(s.values.size());
}

}  // namespace mixlab
