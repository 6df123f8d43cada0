#include "mixlab/density.hpp"

#include <cmath>
#include <limits>

#include "mixlab/errors.hpp"

namespace mixlab {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogSqrt2Pi = 0.91893853320467274178032973640562;  // log(sqrt(2*pi))
}  // namespace

namespace detail {

double log_normal_density(double x, double mean, double sd) {
  double z = (x - mean) / sd;
  double q = 0.5 * z * z;
  if (std::isinf(q)) return kNegInf;  // overflowed quadratic term: density underflows to 0
  return -kLogSqrt2Pi - std::log(sd) - q;
}

double log_poisson_pmf(double x, double rate) {
  double rounded = std::round(x);
  if (!(std::abs(x - rounded) <= 1e-9) || rounded < 0.0)
    throw domain_error("Poisson pmf requires a nonnegative integer observation");
  double k = rounded;
  if (rate == 0.0) return k == 0.0 ? 0.0 : kNegInf;  // boundary extension of the family
  return k * std::log(rate) - std::lgamma(k + 1.0) - rate;
}

}  // namespace detail

double log_component_density(const ComponentFamily& family, const ParamPoint& atom, double x) {
  validate_pairing(family, atom);
  switch (family.kind) {
    case FamilyKind::Poisson:
      return detail::log_poisson_pmf(x, atom.mean);
    case FamilyKind::NormalEqualVariance:
      return detail::log_normal_density(x, atom.mean, std::sqrt(family.structural_sigma2));
    case FamilyKind::NormalFreeVariance:
      return detail::log_normal_density(x, atom.mean, *atom.scale);
  }
  throw contract_error("unknown family kind");
}

double component_density(const ComponentFamily& family, const ParamPoint& atom, double x) {
  return std::exp(log_component_density(family, atom, x));
}

double log_sum_exp(const double* vals, std::size_t n) {
  double mx = kNegInf;
  for (std::size_t i = 0; i < n; ++i)
    if (vals[i] > mx) mx = vals[i];
  if (std::isinf(mx) && mx < 0.0) return kNegInf;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::exp(vals[i] - mx);
  return mx + std::log(acc);
}

double log_sum_exp(const std::vector<double>& vals) { return log_sum_exp(vals.data(), vals.size()); }

namespace {

// log of sum_j (w_j / mass) f_j(x). Factoring the mass out keeps the
// sub-distribution identities f(x; rho G) = rho f(x; G) and
// l_n(rho G) = l_n(G) + n log rho exact for exactly-scaled weights.
double log_density_normalized(const ComponentFamily& family, const MixingDistribution& g,
                              double x) {
  double mx = kNegInf;
  std::size_t m = g.size();
  constexpr std::size_t kStack = 16;
  double buf[kStack];
  std::vector<double> heap;
  double* terms = buf;
  if (m > kStack) {
    heap.resize(m);
    terms = heap.data();
  }
  for (std::size_t j = 0; j < m; ++j) {
    double t = std::log(g.weights[j] / g.mass) + log_component_density(family, g.atoms[j], x);
    terms[j] = t;
    if (t > mx) mx = t;
  }
  if (std::isinf(mx) && mx < 0.0) return kNegInf;
  double acc = 0.0;
  for (std::size_t j = 0; j < m; ++j) acc += std::exp(terms[j] - mx);
  return mx + std::log(acc);
}

}  // namespace

double log_mixture_density(const ComponentFamily& family, const MixingDistribution& g, double x) {
  validate(g);
  return std::log(g.mass) + log_density_normalized(family, g, x);
}

double mixture_density(const ComponentFamily& family, const MixingDistribution& g, double x) {
  validate(g);
  return g.mass * std::exp(log_density_normalized(family, g, x));
}

double log_likelihood(const ComponentFamily& family, const MixingDistribution& g,
                      const Sample& sample) {
  validate(g);
  validate(sample);
  double acc = 0.0;
  for (double x : sample.values) {
    double ld = log_density_normalized(family, g, x);
    if (std::isinf(ld) && ld < 0.0) return kNegInf;
    acc += ld;
  }
  return acc + static_cast<double>(sample.size()) * std::log(g.mass);
}

}  // namespace mixlab
