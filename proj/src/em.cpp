#include "mixlab/em.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mixlab/density.hpp"
#include "mixlab/errors.hpp"
#include "mixlab/rng.hpp"

namespace mixlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Keeps plain free-variance arithmetic finite when a component collapses
// onto a single observation (sigma >= 1e-150).
constexpr double kMinVariance = 1e-300;
constexpr double kDeathThreshold = 1e-10;

double quantile(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  double pos = p * static_cast<double>(n - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  if (lo >= n - 1) return sorted[n - 1];
  double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

struct WorkingModel {
  MixingDistribution g;
  double structural_sigma2 = 1.0;

  ComponentFamily family_with(const ComponentFamily& base) const {
    ComponentFamily f = base;
    if (f.kind == FamilyKind::NormalEqualVariance) f.structural_sigma2 = structural_sigma2;
    return f;
  }
};

void validate_config(const FitConfig& cfg, const Sample& sample) {
  validate(sample);
  if (cfg.m < 1) throw contract_error("em_fit: m must be >= 1");
  if (!(cfg.tol > 0.0)) throw contract_error("em_fit: tol must be > 0");
  if (cfg.restarts < 1) throw contract_error("em_fit: restarts must be >= 1");
  if (sample.size() < cfg.m)
    throw contract_error("em_fit: under-determined fit, sample size n < component count m");
  bool estimates_variance = cfg.family.kind != FamilyKind::Poisson;
  if (estimates_variance && sample.size() < 2)
    throw contract_error("em_fit: variance estimation needs n >= 2");
  if (cfg.mode == FitMode::Constrained && !(cfg.sigma_floor > 0.0))
    throw contract_error("em_fit: constrained mode needs sigma_floor > 0");
  if (cfg.family.kind == FamilyKind::Poisson && cfg.mode != FitMode::Plain)
    throw contract_error("em_fit: Poisson family supports plain mode only");
  if (cfg.family.kind == FamilyKind::NormalEqualVariance && cfg.mode != FitMode::EqualVariance)
    throw contract_error("em_fit: equal-variance family requires equal_variance mode");
  if (cfg.mode == FitMode::EqualVariance && cfg.family.kind != FamilyKind::NormalEqualVariance)
    throw contract_error("em_fit: equal_variance mode requires the equal-variance normal family");
  if (cfg.penalty && !(cfg.penalty->scale_anchor > 0.0))
    throw contract_error("em_fit: penalty scale_anchor must be > 0");
}

// Quantile-spread start; restart r > 0 jitters the means by s_n * N(0,1).
WorkingModel initialize(const FitConfig& cfg, const Sample& sample, std::size_t restart) {
  std::vector<double> sorted = sample.values;
  std::sort(sorted.begin(), sorted.end());
  double sn2 = sample_variance(sample);
  double sn = std::sqrt(std::max(sn2, 1e-300));

  WorkingModel model;
  model.structural_sigma2 = std::max(sn2, 1e-300);
  Rng rng(mix_seed(cfg.seed, restart));
  const bool free_variance = cfg.family.kind == FamilyKind::NormalFreeVariance;
  for (std::size_t j = 0; j < cfg.m; ++j) {
    double p = (static_cast<double>(j) + 0.5) / static_cast<double>(cfg.m);
    double mean = quantile(sorted, p);
    if (restart > 0) mean += sn * rng.normal();
    if (cfg.family.kind == FamilyKind::Poisson) mean = std::max(mean, 0.0);
    double scale = sn;
    if (cfg.mode == FitMode::Constrained) scale = std::max(scale, cfg.sigma_floor);
    model.g.atoms.push_back({mean, free_variance ? std::optional<double>(scale) : std::nullopt});
    model.g.weights.push_back(1.0 / static_cast<double>(cfg.m));
  }
  double sum = 0.0;
  for (double w : model.g.weights) sum += w;
  model.g.mass = sum;
  return model;
}

struct RestartOutcome {
  WorkingModel model;
  std::vector<double> trace;
  bool converged = false;
  bool failed = false;
  std::string failure;
};

}  // namespace

Responsibilities e_step(const ComponentFamily& family, const MixingDistribution& g,
                        const Sample& sample) {
  validate(g);
  validate_pairing(family, g);
  const std::size_t n = sample.size();
  const std::size_t m = g.size();
  Responsibilities resp;
  resp.n = n;
  resp.m = m;
  resp.w.resize(n * m);

  std::vector<double> log_terms(m);
  for (std::size_t i = 0; i < n; ++i) {
    double mx = kNegInf;
    for (std::size_t j = 0; j < m; ++j) {
      log_terms[j] = std::log(g.weights[j]) + log_component_density(family, g.atoms[j], sample.values[i]);
      mx = std::max(mx, log_terms[j]);
    }
    if (std::isinf(mx) && mx < 0.0) {
      std::ostringstream msg;
      msg << "e_step: mixture density vanishes at observation " << i << " (x=" << sample.values[i]
          << ")";
      throw domain_error(msg.str());
    }
    double denom = 0.0;
    for (std::size_t j = 0; j < m; ++j) denom += std::exp(log_terms[j] - mx);
    for (std::size_t j = 0; j < m; ++j) resp.w[i * m + j] = std::exp(log_terms[j] - mx) / denom;
  }
  return resp;
}

MStepResult m_step(const ComponentFamily& family, FitMode mode, const Responsibilities& resp,
                   const Sample& sample, double penalty_anchor, double sigma_floor) {
  const std::size_t n = resp.n;
  const std::size_t m = resp.m;
  if (n != sample.size()) throw contract_error("m_step: responsibility/sample size mismatch");

  std::vector<double> s(m, 0.0), mean(m, 0.0), ss(m, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) s[j] += resp(i, j);
  for (std::size_t j = 0; j < m; ++j) {
    if (!(s[j] > kDeathThreshold)) {
      std::ostringstream msg;
      msg << "m_step: component " << j << " lost all responsibility mass (S_j=" << s[j] << ")";
      throw component_death_error(msg.str());
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) mean[j] += resp(i, j) * sample.values[i];
  for (std::size_t j = 0; j < m; ++j) mean[j] /= s[j];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      double d = sample.values[i] - mean[j];
      ss[j] += resp(i, j) * d * d;
    }

  MStepResult out;
  out.g.atoms.resize(m);
  out.g.weights.resize(m);
  const double dn = static_cast<double>(n);
  double wsum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    out.g.weights[j] = s[j] / dn;
    wsum += out.g.weights[j];
    out.g.atoms[j].mean = family.kind == FamilyKind::Poisson ? std::max(mean[j], 0.0) : mean[j];
  }
  out.g.mass = wsum;

  switch (family.kind) {
    case FamilyKind::Poisson:
      break;  // no variance step
    case FamilyKind::NormalEqualVariance: {
      double total_ss = 0.0;
      for (std::size_t j = 0; j < m; ++j) total_ss += ss[j];
      out.structural_sigma2 = std::max(total_ss / dn, kMinVariance);
      break;
    }
    case FamilyKind::NormalFreeVariance: {
      for (std::size_t j = 0; j < m; ++j) {
        double v;
        switch (mode) {
          case FitMode::Plain:
            v = ss[j] / s[j];
            break;
          case FitMode::Penalized:
            // Stationary point of the responsibility-weighted normal
            // log-likelihood plus -(1/n)(a/v + log v): always positive.
            v = (ss[j] + 2.0 * penalty_anchor / dn) / (s[j] + 2.0 / dn);
            break;
          case FitMode::Constrained:
            v = std::max(ss[j] / s[j], sigma_floor * sigma_floor);
            break;
          default:
            throw contract_error("m_step: equal_variance mode with free-variance family");
        }
        out.g.atoms[j].scale = std::sqrt(std::max(v, kMinVariance));
      }
      break;
    }
  }
  return out;
}

double fit_objective(const FitConfig& cfg, const ComponentFamily& family,
                     const MixingDistribution& g, const Sample& sample, double penalty_anchor) {
  double ll = log_likelihood(family, g, sample);
  if (cfg.mode == FitMode::Penalized) {
    PenaltyConfig pc = cfg.penalty.value_or(PenaltyConfig{});
    pc.scale_anchor = penalty_anchor;
    return ll + penalty_total(pc, sample.size(), g);
  }
  return ll;
}

FitReport em_fit(const FitConfig& cfg, const Sample& sample) {
  validate_config(cfg, sample);
  double anchor = 1.0;
  if (cfg.mode == FitMode::Penalized)
    anchor = cfg.penalty ? cfg.penalty->scale_anchor : sample_variance(sample);

  std::vector<RestartOutcome> outcomes;
  outcomes.reserve(cfg.restarts);
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    RestartOutcome run;
    try {
      WorkingModel model = initialize(cfg, sample, r);
      ComponentFamily fam = model.family_with(cfg.family);
      run.trace.push_back(fit_objective(cfg, fam, model.g, sample, anchor));
      for (std::size_t it = 0; it < cfg.max_iter; ++it) {
        Responsibilities resp = e_step(fam, model.g, sample);
        MStepResult step = m_step(fam, cfg.mode, resp, sample, anchor, cfg.sigma_floor);
        model.g = std::move(step.g);
        if (cfg.family.kind == FamilyKind::NormalEqualVariance)
          model.structural_sigma2 = step.structural_sigma2;
        fam = model.family_with(cfg.family);
        double obj = fit_objective(cfg, fam, model.g, sample, anchor);
        run.trace.push_back(obj);
        if (obj - run.trace[run.trace.size() - 2] < cfg.tol) {
          run.converged = true;
          break;
        }
      }
      run.model = std::move(model);
    } catch (const component_death_error& e) {
      run.failed = true;
      run.failure = e.what();
    } catch (const domain_error& e) {
      run.failed = true;
      run.failure = e.what();
    }
    outcomes.push_back(std::move(run));
  }

  int best = -1;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    if (outcomes[r].failed) continue;
    if (best < 0) {
      best = static_cast<int>(r);
      continue;
    }
    double cur = outcomes[r].trace.back();
    double ref = outcomes[best].trace.back();
    if (cur > ref ||
        (cur == ref &&
         compare_canonical(outcomes[r].model.g, outcomes[best].model.g) < 0)) {
      best = static_cast<int>(r);
    }
  }
  if (best < 0) {
    std::ostringstream msg;
    msg << "em_fit: every restart failed;";
    for (std::size_t r = 0; r < outcomes.size(); ++r)
      msg << " [restart " << r << ": " << outcomes[r].failure << "]";
    throw fit_failure_error(msg.str());
  }

  const RestartOutcome& win = outcomes[static_cast<std::size_t>(best)];
  FitReport report;
  report.estimate = canonicalize(win.model.g);
  if (cfg.mode == FitMode::EqualVariance) report.structural_sigma2 = win.model.structural_sigma2;
  report.objective_trace = win.trace;
  report.converged = win.converged;
  report.iterations = win.trace.size() - 1;
  report.best_of_restarts = static_cast<std::size_t>(best);
  if (cfg.family.kind == FamilyKind::NormalFreeVariance && cfg.mode == FitMode::Plain) {
    report.warning =
        "plain free-variance likelihood is unbounded; this is the best terminated "
        "iterate, not a maximum";
  }
  return report;
}

}  // namespace mixlab
