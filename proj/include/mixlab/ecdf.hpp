#pragma once

#include <cstddef>
#include <vector>

namespace mixlab {

// Right-continuous empirical c.d.f. F_n(x) = #{values <= x} / n.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> values);  // throws contract_error if empty/non-finite

  double operator()(double x) const;
  std::size_t size() const { return sorted_.size(); }
  const std::vector<double>& sorted_values() const { return sorted_; }

  // Exact sup over theta of F_n(theta + eps) - F_n(theta). The window
  // (theta, theta+eps] attains the supremum with theta just below a data
  // point, so the answer is max_i #{x in [x_i, x_i + eps)} / n, found by
  // a linear scan over the sorted values.
  double window_sup(double eps) const;  // throws contract_error if eps <= 0

 private:
  std::vector<double> sorted_;
};

}  // namespace mixlab
