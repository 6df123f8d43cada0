#pragma once

#include <cstddef>
#include <string>

#include "mixlab/model.hpp"

namespace mixlab {

struct NpmleConfig {
  std::size_t grid_atoms = 200;  // target; Poisson grids are integer-aligned
  double tol_grad = 1e-3;        // certificate: sup D(theta; G) <= tol_grad * n
  std::size_t max_rounds = 200;  // support-insertion rounds
  std::size_t max_inner = 20000; // weight-EM iterations per round
};

struct NpmleResult {
  MixingDistribution estimate;  // canonicalized, weights summing to 1
  double gradient_sup = 0.0;    // max over grid of D(theta; G-hat)
  std::size_t support_size = 0;
  std::size_t distinct_obs = 0;
  bool certified = false;  // gradient_sup <= tol_grad * n; a flag, not an error
  std::size_t rounds = 0;
};

// Grid-based nonparametric MLE of the mixing distribution for the Poisson
// and equal-variance normal families (the free-variance normal NPMLE is
// unbounded and rejected). Weights over grid atoms are maximized by
// multiplicative EM updates on a growing active set: the atom with the
// largest gradient D(theta; G) = sum_i f(x_i; theta)/f(x_i; G) - n is
// inserted, weights re-fitted, atoms below 1e-10 pruned, until the
// certificate sup_grid D <= tol_grad * n holds.
NpmleResult npmle_fit(const ComponentFamily& family, const Sample& sample,
                      const NpmleConfig& cfg = {});

// The gradient function itself (exposed for tests and the CLI).
double npmle_gradient(const ComponentFamily& family, const MixingDistribution& g,
                      const Sample& sample, double theta);

}  // namespace mixlab
