#pragma once

#include <cstdint>

#include "mixlab/model.hpp"

namespace mixlab {

// Two-stage draw: atom by weights, then a component draw. Deterministic
// given the seed. Requires mass == 1 (sub-distributions cannot be
// sampled) and n >= 1; provenance is recorded on the sample.
Sample sample_mixture(const ComponentFamily& family, const MixingDistribution& g,
                      std::size_t n, std::uint64_t seed);

}  // namespace mixlab
