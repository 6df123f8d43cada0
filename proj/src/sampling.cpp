#include "mixlab/sampling.hpp"

#include <cmath>
#include <sstream>

#include "mixlab/errors.hpp"
#include "mixlab/rng.hpp"

namespace mixlab {

Sample sample_mixture(const ComponentFamily& family, const MixingDistribution& g, std::size_t n,
                      std::uint64_t seed) {
  validate(g);
  validate_pairing(family, g);
  if (std::abs(g.mass - 1.0) > 1e-9)
    throw contract_error("sample_mixture: cannot sample a sub-distribution (mass != 1)");
  if (n == 0) throw contract_error("sample_mixture: n must be >= 1");

  std::vector<double> cumulative(g.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    acc += g.weights[j];
    cumulative[j] = acc;
  }

  Rng rng(seed);
  Sample out;
  out.values.reserve(n);
  out.seed = seed;
  for (std::size_t i = 0; i < n; ++i) {
    double u = rng.uniform01() * acc;
    std::size_t j = 0;
    while (j + 1 < g.size() && u > cumulative[j]) ++j;
    const ParamPoint& atom = g.atoms[j];
    switch (family.kind) {
      case FamilyKind::Poisson:
        out.values.push_back(static_cast<double>(rng.poisson(atom.mean)));
        break;
      case FamilyKind::NormalEqualVariance:
        out.values.push_back(rng.normal(atom.mean, std::sqrt(family.structural_sigma2)));
        break;
      case FamilyKind::NormalFreeVariance:
        out.values.push_back(rng.normal(atom.mean, *atom.scale));
        break;
    }
  }

  std::ostringstream prov;
  prov << "family=";
  switch (family.kind) {
    case FamilyKind::Poisson: prov << "poisson"; break;
    case FamilyKind::NormalEqualVariance:
      prov << "normal_equal_variance(sigma2=" << family.structural_sigma2 << ")";
      break;
    case FamilyKind::NormalFreeVariance: prov << "normal_free_variance"; break;
  }
  prov << "; atoms=" << g.size() << "; n=" << n << "; seed=" << seed;
  out.provenance = prov.str();
  return out;
}

}  // namespace mixlab
