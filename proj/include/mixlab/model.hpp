#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mixlab {

enum class FamilyKind { Poisson, NormalEqualVariance, NormalFreeVariance };

// The parametric kernel being mixed. For the equal-variance normal family
// the shared variance is structural (not part of the mixing distribution).
struct ComponentFamily {
  FamilyKind kind = FamilyKind::NormalFreeVariance;
  double structural_sigma2 = 1.0;  // NormalEqualVariance only

  static ComponentFamily poisson() { return {FamilyKind::Poisson, 1.0}; }
  static ComponentFamily normal_equal_variance(double sigma2) {
    return {FamilyKind::NormalEqualVariance, sigma2};
  }
  static ComponentFamily normal_free_variance() {
    return {FamilyKind::NormalFreeVariance, 1.0};
  }
};

// One support point of a mixing distribution. `scale` (a standard
// deviation) is present only for the free-variance normal family; for
// Poisson the rate lives in `mean`.
struct ParamPoint {
  double mean = 0.0;
  std::optional<double> scale;

  friend bool operator==(const ParamPoint&, const ParamPoint&) = default;
};

// Finitely supported mixing law. `mass` may be < 1 (sub-distribution);
// weights are positive and sum to `mass`.
struct MixingDistribution {
  std::vector<ParamPoint> atoms;
  std::vector<double> weights;
  double mass = 1.0;

  std::size_t size() const { return atoms.size(); }
};

// Convenience constructors.
MixingDistribution dirac(double mean);
MixingDistribution dirac(double mean, double scale);
MixingDistribution make_mixing(std::vector<double> means, std::vector<double> weights);
MixingDistribution make_mixing2(std::vector<double> means, std::vector<double> scales,
                                std::vector<double> weights);

// Scale all weights (and the mass) by rho in (0, 1].
MixingDistribution scale_mass(const MixingDistribution& g, double rho);

// Throws contract_error when invariants fail (positivity, weight/mass
// consistency within 1e-12, finite values).
void validate(const MixingDistribution& g);

// Throws contract_error when the atoms are incompatible with the family
// (Poisson/equal-variance atoms must not carry a scale, free-variance
// atoms must carry a positive one; Poisson means must be >= 0).
void validate_pairing(const ComponentFamily& family, const MixingDistribution& g);
void validate_pairing(const ComponentFamily& family, const ParamPoint& atom);

// Canonical form: atoms ascending by (mean, scale); exact duplicates
// merged by summing weights; zero-weight atoms dropped. Mixture density
// is preserved pointwise.
MixingDistribution canonicalize(const MixingDistribution& g);

// Total order used by canonicalize and for deterministic tie-breaks.
bool atom_less(const ParamPoint& a, const ParamPoint& b);

// -1 / 0 / +1 lexicographic comparison of canonicalized estimates.
int compare_canonical(const MixingDistribution& a, const MixingDistribution& b);

struct Sample {
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::string provenance;

  std::size_t size() const { return values.size(); }
};

void validate(const Sample& s);

// Mean of squared deviations with denominator n.
double sample_mean(const Sample& s);
double sample_variance(const Sample& s);

}  // namespace mixlab
