#include "mixlab/ecdf.hpp"

#include <algorithm>
#include <cmath>

#include "mixlab/errors.hpp"

namespace mixlab {

EmpiricalCdf::EmpiricalCdf(std::vector<double> values) : sorted_(std::move(values)) {
  if (sorted_.empty()) throw contract_error("empirical cdf needs at least one value");
  for (double v : sorted_)
    if (!std::isfinite(v)) throw contract_error("empirical cdf values must be finite");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
  auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::window_sup(double eps) const {
  if (!(eps > 0.0)) throw contract_error("window_sup requires eps > 0");
  const std::size_t n = sorted_.size();
  // Two-pointer scan: j is the first index with sorted_[j] >= sorted_[i] + eps.
  std::size_t best = 0, j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (j < i) j = i;
    while (j < n && sorted_[j] < sorted_[i] + eps) ++j;
    best = std::max(best, j - i);
  }
  return static_cast<double>(best) / static_cast<double>(n);
}

}  // namespace mixlab
