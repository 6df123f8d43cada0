#pragma once

#include <cstdint>

#include "mixlab/model.hpp"

namespace mixlab {

struct KwDistanceResult {
  double value = 0.0;
  std::uint64_t cells_evaluated = 0;
};

// Exponential-weighted L1 distance between mixing c.d.f.s,
//
//   D(G1, G2) = integral over Theta of |G1(t) - G2(t)| exp(-|t|) dt,
//
// evaluated exactly. Both c.d.f.s are piecewise constant on the grid
// induced by the union of support coordinates, so the integral is a sum
// of cell contributions |dG| * closed-form axis integrals (differences of
// exponentials, split at 0). Unbounded outer cells use the full tail
// integral; no truncation or quadrature is involved.
//
// dim == 1 compares the atom means only; dim == 2 uses the product-order
// bivariate c.d.f. in (mean, scale) with weight exp(-|mean|-|scale|) and
// requires every atom of both inputs to carry a scale.
//
// Sub-distributions are compared as-is: G(inf) = mass may differ and the
// difference shows up in the outermost cells.
KwDistanceResult kw_distance(const MixingDistribution& g1, const MixingDistribution& g2,
                             int dim = 1);

}  // namespace mixlab
