#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixlab/model.hpp"

namespace mixlab {

// Outcome of one numerical verifier. `passed` is always recomputable as
// `statistic <comparison> threshold`.
struct CheckReport {
  std::string name;
  bool passed = false;
  double statistic = 0.0;
  double threshold = 0.0;
  std::string comparison;  // "<=" or ">="
  std::optional<double> standard_error;
  std::string details;
};

// Monte Carlo estimate of E*[log f(X; G_alt) / f(X; G_star)] under
// X ~ f(.; G_star); nonpositive in expectation. Passes when the estimate
// is <= +3 standard errors.
CheckReport check_jensen_kl(const ComponentFamily& family, const MixingDistribution& g_star,
                            const MixingDistribution& g_alt, std::size_t mc_n,
                            std::uint64_t seed);

// Monte Carlo estimate of E*[log{1 + u (f*(X)/f(X) - 1)}] with
// f* = f(.; G_star), f = f(.; G_alt); nonnegative in expectation, every
// summand >= log(1-u). Passes when the estimate is >= -3 standard errors.
CheckReport check_pfanzagl(const ComponentFamily& family, const MixingDistribution& g_star,
                           const MixingDistribution& g_alt, double u, std::size_t mc_n,
                           std::uint64_t seed);

// Fraction of replications where the argmax of l_n over a finite candidate
// set equals theta_star, per n. Passes when the fraction is nondecreasing
// in n up to one inversion and reaches >= 0.99 at the largest n.
CheckReport finite_grid_mle_demo(const ComponentFamily& family, double theta_star,
                                 const std::vector<double>& candidates,
                                 const std::vector<std::size_t>& n_grid, std::size_t reps,
                                 std::uint64_t seed);

// Builds G_k = 0.5 N(0,1) + 0.5 N(x_1, (1/2k)^2) and checks, exactly,
// l_n(G_k) >= log k - 0.5 sum_{i>=2} x_i^2 - n log(2 pi) for every k, and
// that l_n at the largest k exceeds the equal-variance MLE value by >= 100.
CheckReport degenerate_sequence_demo(const Sample& sample, const std::vector<double>& k_list);

// Window concentration: sup_theta {F_n(theta+eps) - F_n(theta)} <=
// 2 M eps + 10 log(n)/n at every eps in the list (M = sup of the
// generating density). Statistic is the worst margin.
CheckReport check_concentration(double density_sup, const Sample& sample,
                                const std::vector<double>& eps_list);

// Heavy-tailed Poisson mixing law G*({log n}) = {n (log n) (log log n)^2}^{-1},
// n >= 20: verifies log f(x; G*) <= -log x by series summation plus an
// integral tail bound, and the integral comparison
// int_{log 20}^inf u^{x-1} e^{-u} / (log u)^2 du <= (x-1)! by quadrature.
CheckReport poisson_heavy_tail_check(const std::vector<int>& x_list);

// Pointwise phi(x; 0, sigma1^2) <= phi(x; 0, 2 eps0^2) for
// |x| >= sigma1 log(1/sigma1), checked in log space at
// x = multiplier * sigma1 log(1/sigma1).
CheckReport g_dominance_check(double eps0, const std::vector<double>& sigma1_list,
                              const std::vector<double>& offset_multipliers);

// Numerical witness that E*|log f(X; G*)| is finite for bounded Poisson
// mixing: the running Monte Carlo estimate must move by < 1% over the
// last doubling of the sample.
CheckReport check_kl_finiteness_bounded_poisson(double m_bound, const MixingDistribution& g_star,
                                                std::size_t mc_n, std::uint64_t seed);

}  // namespace mixlab
