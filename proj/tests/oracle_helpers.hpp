// Independent numerical oracles for the test suites. These deliberately
// avoid the closed-form code paths they are used to verify.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "mixlab/model.hpp"

namespace oracle {

// Brute-force Riemann value of the exponential-weighted L1 distance
// between two mixing c.d.f.s (dim 1), step `h` on [lo, hi].
inline double kw1_riemann(const mixlab::MixingDistribution& g1,
                          const mixlab::MixingDistribution& g2, double lo, double hi, double h) {
  auto cdf = [](const mixlab::MixingDistribution& g, double t) {
    double acc = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j)
      if (g.atoms[j].mean <= t) acc += g.weights[j];
    return acc;
  };
  double acc = 0.0;
  for (double t = lo + 0.5 * h; t < hi; t += h)
    acc += std::abs(cdf(g1, t) - cdf(g2, t)) * std::exp(-std::abs(t)) * h;
  return acc;
}

// Same for dim 2 with the product-order c.d.f.
inline double kw2_riemann(const mixlab::MixingDistribution& g1,
                          const mixlab::MixingDistribution& g2, double lo, double hi,
                          double slo, double shi, double h) {
  auto cdf = [](const mixlab::MixingDistribution& g, double t, double s) {
    double acc = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j)
      if (g.atoms[j].mean <= t && *g.atoms[j].scale <= s) acc += g.weights[j];
    return acc;
  };
  double acc = 0.0;
  for (double t = lo + 0.5 * h; t < hi; t += h)
    for (double s = slo + 0.5 * h; s < shi; s += h)
      acc += std::abs(cdf(g1, t, s) - cdf(g2, t, s)) *
             std::exp(-std::abs(t) - std::abs(s)) * h * h;
  return acc;
}

// 1-D maximizer: golden-section in long double followed by one quadratic
// interpolation step, accurate well past 1e-8 even for flat objectives.
inline double maximize_1d(const std::function<long double(long double)>& f, long double lo,
                          long double hi, int iters = 200) {
  const long double phi = 0.6180339887498948482L;
  long double a = lo, b = hi;
  long double c = b - phi * (b - a);
  long double d = a + phi * (b - a);
  long double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && (b - a) > 1e-14L * (std::abs(a) + std::abs(b) + 1e-30L); ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  long double mid = 0.5L * (a + b);
  long double step = std::max((b - a), 1e-9L * (std::abs(mid) + 1e-30L));
  long double fl = f(mid - step), fm = f(mid), fr = f(mid + step);
  long double denom = fl - 2.0L * fm + fr;
  if (denom < 0.0L) {
    long double shift = 0.5L * (fl - fr) / denom;
    if (std::abs(shift) < 1.0L) mid += shift * step;
  }
  return static_cast<double>(mid);
}

// Kullback-Leibler divergence between Poisson(a) and Poisson(b):
// a log(a/b) + b - a.
inline double poisson_kl(double a, double b) { return a * std::log(a / b) + b - a; }

}  // namespace oracle
