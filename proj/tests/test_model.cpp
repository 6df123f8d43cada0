#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "mixlab/density.hpp"
#include "mixlab/ecdf.hpp"
#include "mixlab/errors.hpp"
#include "mixlab/model.hpp"
#include "mixlab/rng.hpp"
#include "mixlab/sampling.hpp"

using namespace mixlab;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("component density reference values") {
  auto poisson = ComponentFamily::poisson();
  // pmf at zero is exp(-lambda)
  CHECK(component_density(poisson, {1.0, std::nullopt}, 0.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  // standard normal mode 1/sqrt(2 pi)
  auto free_var = ComponentFamily::normal_free_variance();
  CHECK(component_density(free_var, {0.0, 1.0}, 0.0) ==
        doctest::Approx(0.39894228040143267).epsilon(1e-12));
  // direct pmf arithmetic: 9/2 e^{-3}
  CHECK(component_density(poisson, {3.0, std::nullopt}, 2.0) ==
        doctest::Approx(4.5 * std::exp(-3.0)).epsilon(1e-12));
  CHECK(component_density(poisson, {3.0, std::nullopt}, 2.0) ==
        doctest::Approx(0.22404180765538775).epsilon(1e-10));
}

TEST_CASE("component density contract and domain errors") {
  auto poisson = ComponentFamily::poisson();
  CHECK_THROWS_AS(component_density(poisson, {1.0, 2.0}, 0.0), contract_error);
  CHECK_THROWS_AS(component_density(poisson, {1.0, std::nullopt}, 2.5), domain_error);
  CHECK_THROWS_AS(component_density(poisson, {1.0, std::nullopt}, -1.0), domain_error);
  CHECK_THROWS_AS(component_density(poisson, {-0.5, std::nullopt}, 1.0), contract_error);
  auto free_var = ComponentFamily::normal_free_variance();
  CHECK_THROWS_AS(component_density(free_var, {0.0, std::nullopt}, 0.0), contract_error);
  auto equal_var = ComponentFamily::normal_equal_variance(1.0);
  CHECK_THROWS_AS(component_density(equal_var, {0.0, 1.0}, 0.0), contract_error);
  // lambda = 0 boundary: point mass at zero
  CHECK(component_density(poisson, {0.0, std::nullopt}, 0.0) == 1.0);
  CHECK(component_density(poisson, {0.0, std::nullopt}, 3.0) == 0.0);
}

TEST_CASE("mixture density examples") {
  auto fam = ComponentFamily::normal_free_variance();
  auto g = make_mixing2({-1.0, 1.0}, {1.0, 1.0}, {0.5, 0.5});
  // symmetry collapses to one component value phi(1)
  CHECK(mixture_density(fam, g, 0.0) ==
        doctest::Approx(std::exp(-0.5) / std::sqrt(2 * M_PI)).epsilon(1e-12));

  // paper's degenerate construction: f(x1; G_k) >= k/(2 pi) at k = 10
  double x1 = 0.7;
  double k = 10.0;
  auto gk = make_mixing2({0.0, x1}, {1.0, 1.0 / (2.0 * k)}, {0.5, 0.5});
  CHECK(mixture_density(fam, gk, x1) >= k / (2.0 * M_PI));

  // mass rho = 0.5 halves the density exactly
  auto half = scale_mass(g, 0.5);
  double x = 0.3;
  CHECK(mixture_density(fam, half, x) == 0.5 * mixture_density(fam, g, x));
}

TEST_CASE("mixture density is linear in weights") {
  auto fam = ComponentFamily::normal_free_variance();
  auto g1 = make_mixing2({-1.0, 0.5}, {1.0, 0.7}, {0.4, 0.6});
  auto g2 = make_mixing2({2.0, 3.5, -0.2}, {0.5, 1.2, 2.0}, {0.2, 0.3, 0.5});
  double u = 0.37;
  MixingDistribution combo;
  for (std::size_t j = 0; j < g1.size(); ++j) {
    combo.atoms.push_back(g1.atoms[j]);
    combo.weights.push_back(u * g1.weights[j]);
  }
  for (std::size_t j = 0; j < g2.size(); ++j) {
    combo.atoms.push_back(g2.atoms[j]);
    combo.weights.push_back((1.0 - u) * g2.weights[j]);
  }
  combo.mass = 1.0;
  Rng rng(2024);
  for (int i = 0; i < 100; ++i) {
    double x = rng.normal(0.5, 3.0);
    double lhs = mixture_density(fam, combo, x);
    double rhs = u * mixture_density(fam, g1, x) + (1.0 - u) * mixture_density(fam, g2, x);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("log likelihood closed form and sentinels") {
  // single-atom equal-variance G at (mean, s_n^2): exactly
  // -(n/2) log(2 pi) - n log s_n - n/2
  Rng rng(99);
  Sample s;
  for (int i = 0; i < 40; ++i) s.values.push_back(rng.normal(1.0, 2.0));
  double mean = sample_mean(s);
  double sn2 = sample_variance(s);
  auto fam = ComponentFamily::normal_equal_variance(sn2);
  double n = static_cast<double>(s.size());
  double expected = -(n / 2.0) * std::log(2 * M_PI) - n * std::log(std::sqrt(sn2)) - n / 2.0;
  CHECK(log_likelihood(fam, dirac(mean), s) == doctest::Approx(expected).epsilon(1e-12));

  // Poisson G = delta_0 with an observed 1 forces -infinity
  Sample sp;
  sp.values = {0.0, 1.0};
  CHECK(log_likelihood(ComponentFamily::poisson(), dirac(0.0), sp) == -kInf);
}

TEST_CASE("log likelihood shifts additively under mass scaling") {
  auto fam = ComponentFamily::normal_free_variance();
  auto g = make_mixing2({0.0, 2.0}, {1.0, 0.5}, {0.25, 0.75});
  Sample s;
  Rng rng(5);
  for (int i = 0; i < 25; ++i) s.values.push_back(rng.normal(1.0, 1.5));
  double base = log_likelihood(fam, g, s);
  double n = static_cast<double>(s.size());
  // exact for power-of-two mass factors (log-space arithmetic)
  for (double rho : {0.5, 0.25, 0.0625}) {
    CHECK(log_likelihood(fam, scale_mass(g, rho), s) == base + n * std::log(rho));
  }
  CHECK(log_likelihood(fam, scale_mass(g, 0.3), s) ==
        doctest::Approx(base + n * std::log(0.3)).epsilon(1e-12));
}

TEST_CASE("densities stay finite for tiny scales") {
  auto fam = ComponentFamily::normal_free_variance();
  for (double sd : {1e-10, 1e-50, 1e-100, 1e-150}) {
    auto g = make_mixing2({0.0}, {sd}, {1.0});
    double at_mode = mixture_density(fam, g, 0.0);
    double off_mode = mixture_density(fam, g, 1.0);
    CHECK(std::isfinite(at_mode));
    CHECK(at_mode >= 0.0);
    CHECK(off_mode == 0.0);
    CHECK(std::isfinite(log_mixture_density(fam, g, 0.0)));
  }
}

TEST_CASE("canonicalize sorts, merges and is idempotent") {
  // label switching: permuted components have identical canonical forms
  auto a = make_mixing({1.0, 2.0}, {0.3, 0.7});
  auto b = make_mixing({2.0, 1.0}, {0.7, 0.3});
  auto ca = canonicalize(a);
  auto cb = canonicalize(b);
  CHECK(compare_canonical(ca, cb) == 0);
  CHECK(ca.atoms == cb.atoms);
  CHECK(ca.weights == cb.weights);

  // bitwise-duplicate atoms merge by summing weights
  auto dup = make_mixing({1.0, 1.0}, {0.2, 0.3});
  auto cd = canonicalize(dup);
  CHECK(cd.size() == 1);
  CHECK(cd.weights[0] == doctest::Approx(0.5).epsilon(1e-15));

  // already-canonical input comes back unchanged
  auto again = canonicalize(cd);
  CHECK(again.atoms == cd.atoms);
  CHECK(again.weights == cd.weights);
}

TEST_CASE("canonicalize preserves the mixture density pointwise") {
  auto fam = ComponentFamily::normal_free_variance();
  MixingDistribution g = make_mixing2({2.0, -1.0, 2.0}, {0.5, 1.0, 0.5}, {0.25, 0.5, 0.25});
  auto c = canonicalize(g);
  CHECK(c.size() == 2);
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    double x = rng.normal(0.0, 2.5);
    CHECK(mixture_density(fam, g, x) ==
          doctest::Approx(mixture_density(fam, c, x)).epsilon(1e-12));
  }
}

TEST_CASE("sampling is deterministic and hits CLT bounds") {
  auto fam = ComponentFamily::normal_free_variance();
  auto g = make_mixing2({0.0, 3.0}, {1.0, 0.5}, {0.5, 0.5});
  Sample s1 = sample_mixture(fam, g, 5, 7);
  Sample s2 = sample_mixture(fam, g, 5, 7);
  CHECK(s1.values == s2.values);
  CHECK_FALSE(s1.provenance.empty());

  // delta_mu normal: mean within 5 sigma / sqrt(n)
  double mu = 1.25;
  Sample big = sample_mixture(fam, make_mixing2({mu}, {1.0}, {1.0}), 10000, 11);
  CHECK(std::abs(sample_mean(big) - mu) < 5.0 / std::sqrt(10000.0));

  // Poisson mixture mean is the weight-average of component means
  auto pg = make_mixing({1.0, 5.0}, {0.5, 0.5});
  Sample ps = sample_mixture(ComponentFamily::poisson(), pg, 100000, 13);
  // var = E var + var of means = 3 + 4 = 7
  double se = std::sqrt(7.0 / 100000.0);
  CHECK(std::abs(sample_mean(ps) - 3.0) < 5.0 * se);

  CHECK_THROWS_AS(sample_mixture(fam, scale_mass(g, 0.5), 10, 1), contract_error);
  CHECK_THROWS_AS(sample_mixture(fam, g, 0, 1), contract_error);
}

TEST_CASE("empirical cdf basics") {
  EmpiricalCdf ecdf({0.1, 0.9, 0.2});
  CHECK(ecdf(0.05) == 0.0);
  CHECK(ecdf(0.1) == doctest::Approx(1.0 / 3.0));
  CHECK(ecdf(0.15) == doctest::Approx(1.0 / 3.0));
  CHECK(ecdf(0.9) == 1.0);
  CHECK(ecdf(2.0) == 1.0);
  CHECK_THROWS_AS(EmpiricalCdf({}), contract_error);
}

TEST_CASE("cdf window sup exact values") {
  EmpiricalCdf ecdf({0.1, 0.2, 0.9});
  // brute-force verified: the window [0.1, 0.25) holds two of three points
  CHECK(ecdf.window_sup(0.15) == doctest::Approx(2.0 / 3.0));
  CHECK(ecdf.window_sup(5.0) == 1.0);  // window covers everything
  EmpiricalCdf single({3.0});
  CHECK(single.window_sup(1e-6) == 1.0);
  CHECK_THROWS_AS(ecdf.window_sup(0.0), contract_error);
}

TEST_CASE("cdf window sup equals brute force and grows with eps") {
  Rng rng(31);
  std::vector<double> vals;
  for (int i = 0; i < 200; ++i) vals.push_back(rng.normal(0.0, 1.0));
  EmpiricalCdf ecdf(vals);
  auto sorted = ecdf.sorted_values();
  auto brute = [&](double eps) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      std::size_t count = 0;
      for (std::size_t j = 0; j < sorted.size(); ++j)
        if (sorted[j] >= sorted[i] && sorted[j] < sorted[i] + eps) ++count;
      best = std::max(best, count);
    }
    return static_cast<double>(best) / static_cast<double>(sorted.size());
  };
  double prev = 0.0;
  for (double eps : {0.01, 0.05, 0.2, 0.5, 1.0, 3.0}) {
    double got = ecdf.window_sup(eps);
    CHECK(got == brute(eps));
    CHECK(got >= prev);  // nondecreasing in eps
    prev = got;
  }
}

TEST_CASE("mixing distribution validation") {
  MixingDistribution bad = make_mixing({0.0, 1.0}, {0.5, 0.6});
  bad.mass = 1.0;  // weights sum to 1.1
  CHECK_THROWS_AS(validate(bad), contract_error);
  MixingDistribution neg = make_mixing({0.0}, {-1.0});
  CHECK_THROWS_AS(validate(neg), contract_error);
  CHECK_THROWS_AS(validate(MixingDistribution{}), contract_error);
  CHECK_NOTHROW(validate(make_mixing({0.0, 1.0}, {0.5, 0.5})));
}
