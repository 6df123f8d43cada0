#include "mixlab/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "mixlab/density.hpp"
#include "mixlab/ecdf.hpp"
#include "mixlab/em.hpp"
#include "mixlab/errors.hpp"
#include "mixlab/quadrature.hpp"
#include "mixlab/rng.hpp"
#include "mixlab/sampling.hpp"

namespace mixlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 6.28318530717958647692528676656;

struct MonteCarlo {
  double mean = 0.0;
  double se = 0.0;
};

MonteCarlo mc_stats(const std::vector<double>& vals) {
  double n = static_cast<double>(vals.size());
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : vals) var += (v - mean) * (v - mean);
  var /= n;
  return {mean, std::sqrt(var / n)};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

CheckReport check_jensen_kl(const ComponentFamily& family, const MixingDistribution& g_star,
                            const MixingDistribution& g_alt, std::size_t mc_n,
                            std::uint64_t seed) {
  if (mc_n < 2) throw contract_error("check_jensen_kl: mc_n too small");
  Sample xs = sample_mixture(family, g_star, mc_n, seed);
  std::vector<double> summands(mc_n);
  for (std::size_t i = 0; i < mc_n; ++i)
    summands[i] = log_mixture_density(family, g_alt, xs.values[i]) -
                  log_mixture_density(family, g_star, xs.values[i]);
  MonteCarlo mc = mc_stats(summands);

  CheckReport rep;
  rep.name = "jensen_kl";
  rep.statistic = mc.mean;
  rep.threshold = 3.0 * mc.se;
  rep.comparison = "<=";
  rep.standard_error = mc.se;
  rep.passed = rep.statistic <= rep.threshold;
  rep.details = "E*[log f(X;G_alt)/f(X;G_star)] estimate " + fmt(mc.mean) + " (se " + fmt(mc.se) +
                "), nonpositive up to 3 se";
  return rep;
}

CheckReport check_pfanzagl(const ComponentFamily& family, const MixingDistribution& g_star,
                           const MixingDistribution& g_alt, double u, std::size_t mc_n,
                           std::uint64_t seed) {
  if (!(u > 0.0) || !(u < 1.0)) throw contract_error("check_pfanzagl: u must be in (0,1)");
  if (mc_n < 2) throw contract_error("check_pfanzagl: mc_n too small");
  Sample xs = sample_mixture(family, g_star, mc_n, seed);
  const double floor_val = std::log(1.0 - u);
  bool floor_ok = true;
  std::vector<double> summands(mc_n);
  for (std::size_t i = 0; i < mc_n; ++i) {
    double lr = log_mixture_density(family, g_star, xs.values[i]) -
                log_mixture_density(family, g_alt, xs.values[i]);
    // log{(1-u) + u exp(lr)} without overflow for large ratios.
    double term = lr > 0.0 ? lr + std::log(u + (1.0 - u) * std::exp(-lr))
                           : std::log((1.0 - u) + u * std::exp(lr));
    summands[i] = term;
    floor_ok = floor_ok && term >= floor_val;
  }
  MonteCarlo mc = mc_stats(summands);

  CheckReport rep;
  rep.name = "pfanzagl";
  rep.statistic = floor_ok ? mc.mean : -kInf;
  rep.threshold = -3.0 * mc.se;
  rep.comparison = ">=";
  rep.standard_error = mc.se;
  rep.passed = rep.statistic >= rep.threshold;
  rep.details = "E*[log{1+u(f*/f - 1)}] estimate " + fmt(mc.mean) + " (se " + fmt(mc.se) +
                "), nonnegative up to 3 se; summand floor log(1-u) " +
                (floor_ok ? "respected" : "VIOLATED");
  return rep;
}

CheckReport finite_grid_mle_demo(const ComponentFamily& family, double theta_star,
                                 const std::vector<double>& candidates,
                                 const std::vector<std::size_t>& n_grid, std::size_t reps,
                                 std::uint64_t seed) {
  if (candidates.empty() || n_grid.empty() || reps == 0)
    throw contract_error("finite_grid_mle_demo: empty inputs");
  if (std::find(candidates.begin(), candidates.end(), theta_star) == candidates.end())
    throw contract_error("finite_grid_mle_demo: theta_star must be among the candidates");

  std::vector<double> fractions;
  for (std::size_t n : n_grid) {
    std::size_t hits = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      Sample s = sample_mixture(family, dirac(theta_star), n, mix_seed(seed, n, r));
      double best = -kInf;
      double arg = candidates.front();
      for (double c : candidates) {
        double ll = log_likelihood(family, dirac(c), s);
        if (ll > best) {
          best = ll;
          arg = c;
        }
      }
      if (arg == theta_star) ++hits;
    }
    fractions.push_back(static_cast<double>(hits) / static_cast<double>(reps));
  }

  std::size_t inversions = 0;
  for (std::size_t i = 1; i < fractions.size(); ++i)
    if (fractions[i] < fractions[i - 1]) ++inversions;

  CheckReport rep;
  rep.name = "finite_grid_mle";
  rep.statistic = inversions <= 1 ? fractions.back() : -1.0;
  rep.threshold = 0.99;
  rep.comparison = ">=";
  rep.passed = rep.statistic >= rep.threshold;
  std::ostringstream det;
  det << "selection fraction per n:";
  for (std::size_t i = 0; i < n_grid.size(); ++i) det << " " << n_grid[i] << ":" << fractions[i];
  det << "; inversions=" << inversions;
  rep.details = det.str();
  return rep;
}

CheckReport degenerate_sequence_demo(const Sample& sample, const std::vector<double>& k_list) {
  validate(sample);
  if (sample.size() < 2) throw contract_error("degenerate_sequence_demo: need n >= 2");
  if (k_list.empty()) throw contract_error("degenerate_sequence_demo: k_list must be nonempty");
  for (std::size_t i = 1; i < k_list.size(); ++i)
    if (k_list[i] <= k_list[i - 1])
      throw contract_error("degenerate_sequence_demo: k_list must be increasing");

  ComponentFamily fam = ComponentFamily::normal_free_variance();
  const double n = static_cast<double>(sample.size());
  double sumsq_tail = 0.0;
  for (std::size_t i = 1; i < sample.size(); ++i)
    sumsq_tail += sample.values[i] * sample.values[i];

  double min_margin = kInf;
  double ll_last = 0.0;
  std::ostringstream det;
  for (double k : k_list) {
    MixingDistribution gk =
        make_mixing2({0.0, sample.values[0]}, {1.0, 1.0 / (2.0 * k)}, {0.5, 0.5});
    double ll = log_likelihood(fam, gk, sample);
    double bound = std::log(k) - 0.5 * sumsq_tail - n * std::log(kTwoPi);
    min_margin = std::min(min_margin, ll - bound);  // exact inequality, no tolerance
    ll_last = ll;
    det << "k=" << k << ": l_n=" << fmt(ll) << " bound=" << fmt(bound) << "; ";
  }

  // Reference: equal-variance MLE on the same data.
  FitConfig ref;
  ref.family = ComponentFamily::normal_equal_variance(sample_variance(sample));
  ref.m = 2;
  ref.mode = FitMode::EqualVariance;
  ref.restarts = 2;
  ref.max_iter = 500;
  ref.seed = 0x5eedUL;
  double ll_ref = em_fit(ref, sample).objective_trace.back();
  double excess = ll_last - ll_ref - 100.0;
  det << "l_n(G_kmax)-l_n(eqvar MLE)=" << fmt(ll_last - ll_ref);

  CheckReport rep;
  rep.name = "degenerate_sequence";
  rep.statistic = std::min(min_margin, excess);
  rep.threshold = 0.0;
  rep.comparison = ">=";
  rep.passed = rep.statistic >= rep.threshold;
  rep.details = det.str();
  return rep;
}

CheckReport check_concentration(double density_sup, const Sample& sample,
                                const std::vector<double>& eps_list) {
  validate(sample);
  if (!(density_sup > 0.0)) throw contract_error("check_concentration: density sup must be > 0");
  if (eps_list.empty()) throw contract_error("check_concentration: eps_list must be nonempty");
  if (sample.size() < 20) throw contract_error("check_concentration: need n >= 20");

  EmpiricalCdf ecdf(sample.values);
  const double n = static_cast<double>(sample.size());
  const double additive = 10.0 * std::log(n) / n;

  double worst_margin = kInf;
  double prev_left = -kInf;
  bool monotone = true;
  std::vector<double> sorted_eps = eps_list;
  std::sort(sorted_eps.begin(), sorted_eps.end());
  for (double eps : sorted_eps) {
    double left = ecdf.window_sup(eps);
    double bound = 2.0 * density_sup * eps + additive;
    worst_margin = std::min(worst_margin, bound - left);
    monotone = monotone && left >= prev_left;
    prev_left = left;
  }

  CheckReport rep;
  rep.name = "concentration";
  rep.statistic = monotone ? worst_margin : -kInf;
  rep.threshold = 0.0;
  rep.comparison = ">=";
  rep.passed = rep.statistic >= rep.threshold;
  rep.details = "worst margin of 2*M*eps + 10 log(n)/n over window sup: " + fmt(worst_margin) +
                (monotone ? "" : "; window sup NOT monotone in eps");
  return rep;
}

CheckReport poisson_heavy_tail_check(const std::vector<int>& x_list) {
  if (x_list.empty()) throw contract_error("poisson_heavy_tail_check: x_list must be nonempty");
  for (int x : x_list)
    if (x < 1 || x > 30)
      throw domain_error("poisson_heavy_tail_check: series evaluation supports 1 <= x <= 30 only");
  int max_x = *std::max_element(x_list.begin(), x_list.end());

  // Partial sums of (log n)^{x-1} / (n log log n)^2 for n = 20..N, one pass
  // over n with iterated powers of log n.
  const std::size_t series_n = 10'000'000;
  std::vector<double> partial(static_cast<std::size_t>(max_x), 0.0);
  for (std::size_t n = 20; n <= series_n; ++n) {
    double ln = std::log(static_cast<double>(n));
    double lln = std::log(ln);
    double base = 1.0 / (static_cast<double>(n) * lln);
    base *= base;
    double powln = 1.0;
    for (int x = 1; x <= max_x; ++x) {
      partial[static_cast<std::size_t>(x - 1)] += base * powln;
      powln *= ln;
    }
  }

  // Tail bound: the summand decreases beyond its peak exp((x-1)/2) < N, so
  //   sum_{n>N} <= int_N^inf = int_{log N}^inf u^{x-1} e^{-u} / (log u)^2 du
  //             <= Gamma(x, log N) / (log log N)^2.
  auto upper_incomplete_gamma = [](int x, double a) {
    double term = std::exp(-a);
    double acc = term;  // k = 0
    for (int k = 1; k < x; ++k) {
      term *= a / static_cast<double>(k);
      acc += term;
    }
    double fact = 1.0;
    for (int k = 2; k < x; ++k) fact *= static_cast<double>(k);
    return fact * acc;  // (x-1)! e^{-a} sum_{k<x} a^k / k!
  };
  const double log_n_cut = std::log(static_cast<double>(series_n));
  const double llog_cut = std::log(log_n_cut);

  double worst = -kInf;
  std::ostringstream det;
  for (int x : x_list) {
    double tail = upper_incomplete_gamma(x, log_n_cut) / (llog_cut * llog_cut);
    double series_upper = partial[static_cast<std::size_t>(x - 1)] + tail;
    double log_fx = std::log(series_upper) - std::lgamma(static_cast<double>(x) + 1.0);
    double margin1 = log_fx + std::log(static_cast<double>(x));  // must be <= 0

    // Integral comparison from the construction: quadrature of
    // u^{x-1} e^{-u} / (log u)^2 from log 20, against (x-1)!.
    auto integrand = [x](double u) {
      double lu = std::log(u);
      return std::exp((x - 1) * std::log(u) - u) / (lu * lu);
    };
    double quad = adaptive_simpson(integrand, std::log(20.0), 320.0, 1e-12 * std::tgamma(x), 52);
    double margin2 = std::log(quad) - std::lgamma(static_cast<double>(x));  // must be <= 0
    worst = std::max(worst, std::max(margin1, margin2));
    det << "x=" << x << ": log f+log x=" << fmt(margin1)
        << ", log quad-log (x-1)!=" << fmt(margin2) << "; ";
  }

  CheckReport rep;
  rep.name = "poisson_heavy_tail";
  rep.statistic = worst;
  rep.threshold = 0.0;
  rep.comparison = "<=";
  rep.passed = rep.statistic <= rep.threshold;
  rep.details = det.str();
  return rep;
}

CheckReport g_dominance_check(double eps0, const std::vector<double>& sigma1_list,
                              const std::vector<double>& offset_multipliers) {
  if (!(eps0 > 0.0) || eps0 > 0.05)
    throw contract_error("g_dominance_check: eps0 must be in (0, 0.05]");
  if (sigma1_list.empty() || offset_multipliers.empty())
    throw contract_error("g_dominance_check: empty grids");
  for (double s : sigma1_list)
    if (!(s > 0.0) || s > eps0)
      throw contract_error("g_dominance_check: every sigma1 must be in (0, eps0]");
  for (double c : offset_multipliers)
    if (!(c >= 1.0))
      throw contract_error("g_dominance_check: offsets are multiples >= 1 of sigma1 log(1/sigma1)");

  const double wide_sd = std::sqrt(2.0) * eps0;
  double worst = -kInf;
  for (double s1 : sigma1_list) {
    double radius = s1 * std::log(1.0 / s1);
    for (double c : offset_multipliers) {
      double x = c * radius;
      double diff = detail::log_normal_density(x, 0.0, s1) -
                    detail::log_normal_density(x, 0.0, wide_sd);
      worst = std::max(worst, diff);
    }
  }

  CheckReport rep;
  rep.name = "g_dominance";
  rep.statistic = worst;
  rep.threshold = 0.0;
  rep.comparison = "<=";
  rep.passed = rep.statistic <= rep.threshold;
  rep.details = "worst log phi(x;0,sigma1^2) - log phi(x;0,2 eps0^2) over the offset grid: " +
                fmt(worst);
  return rep;
}

CheckReport check_kl_finiteness_bounded_poisson(double m_bound, const MixingDistribution& g_star,
                                                std::size_t mc_n, std::uint64_t seed) {
  validate(g_star);
  for (const auto& a : g_star.atoms)
    if (a.mean > m_bound)
      throw contract_error("check_kl_finiteness_bounded_poisson: an atom exceeds the bound M");
  if (mc_n < 100) throw contract_error("check_kl_finiteness_bounded_poisson: mc_n too small");

  ComponentFamily fam = ComponentFamily::poisson();
  Sample xs = sample_mixture(fam, g_star, mc_n, seed);
  double acc = 0.0;
  double at_half = 0.0;
  std::vector<double> summands(mc_n);
  for (std::size_t i = 0; i < mc_n; ++i) {
    summands[i] = std::abs(log_mixture_density(fam, g_star, xs.values[i]));
    acc += summands[i];
    if (i + 1 == mc_n / 2) at_half = acc / static_cast<double>(i + 1);
  }
  double final_mean = acc / static_cast<double>(mc_n);
  double rel_change = std::abs(final_mean - at_half) / std::abs(final_mean);
  MonteCarlo mc = mc_stats(summands);

  CheckReport rep;
  rep.name = "kl_finiteness_bounded_poisson";
  rep.statistic = rel_change;
  rep.threshold = 0.01;
  rep.comparison = "<=";
  rep.standard_error = mc.se;
  rep.passed = rep.statistic <= rep.threshold;
  rep.details = "E*|log f(X;G*)| estimate " + fmt(final_mean) + " (se " + fmt(mc.se) +
                "); relative change over last doubling " + fmt(rel_change);
  return rep;
}

}  // namespace mixlab
