#include "mixlab/mixlab.h"

#include <cstring>
#include <new>
#include <string>

#include "mixlab/checks.hpp"
#include "mixlab/density.hpp"
#include "mixlab/em.hpp"
#include "mixlab/errors.hpp"
#include "mixlab/experiments.hpp"
#include "mixlab/io.hpp"
#include "mixlab/kw_distance.hpp"
#include "mixlab/npmle.hpp"
#include "mixlab/sampling.hpp"

using namespace mixlab;

struct mixlab_mixing {
  MixingDistribution g;
};

struct mixlab_sample {
  Sample s;
};

struct mixlab_result {
  std::string json_text;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

// Maps the library's exception taxonomy onto status codes.
template <typename Fn>
mixlab_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return MIXLAB_OK;
  } catch (const contract_error& e) {
    set_error(e.what());
    return MIXLAB_ERROR_INVALID_ARGUMENT;
  } catch (const domain_error& e) {
    set_error(e.what());
    return MIXLAB_ERROR_DOMAIN;
  } catch (const parse_error& e) {
    set_error(e.what());
    return MIXLAB_ERROR_PARSE;
  } catch (const fit_failure_error& e) {
    set_error(e.what());
    return MIXLAB_ERROR_FIT;
  } catch (const component_death_error& e) {
    set_error(e.what());
    return MIXLAB_ERROR_FIT;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return MIXLAB_ERROR_INTERNAL;
  } catch (const std::exception& e) {
    set_error(e.what());
    return MIXLAB_ERROR_INTERNAL;
  }
}

mixlab_status require(bool cond, const char* msg) {
  if (cond) return MIXLAB_OK;
  set_error(msg);
  return MIXLAB_ERROR_INVALID_ARGUMENT;
}

mixlab_result* wrap_result(const json& j) { return new mixlab_result{j.dump(2)}; }

CheckReport run_named_check(const std::string& name, const json& p) {
  if (name == "jensen_kl") {
    return check_jensen_kl(family_from_json(p.at("family")), mixing_from_json(p.at("g_star")),
                           mixing_from_json(p.at("g_alt")),
                           p.value("mc_n", std::size_t{100000}), p.value("seed", 0ULL));
  }
  if (name == "pfanzagl") {
    return check_pfanzagl(family_from_json(p.at("family")), mixing_from_json(p.at("g_star")),
                          mixing_from_json(p.at("g_alt")), p.value("u", 0.5),
                          p.value("mc_n", std::size_t{100000}), p.value("seed", 0ULL));
  }
  if (name == "finite_grid_mle") {
    std::vector<double> candidates = p.at("candidates").get<std::vector<double>>();
    std::vector<std::size_t> n_grid = p.at("n_grid").get<std::vector<std::size_t>>();
    return finite_grid_mle_demo(family_from_json(p.at("family")), p.at("theta_star").get<double>(),
                                candidates, n_grid, p.value("reps", std::size_t{200}),
                                p.value("seed", 0ULL));
  }
  if (name == "degenerate_sequence") {
    Sample s;
    if (p.contains("sample_csv")) {
      s = sample_load_csv(p.at("sample_csv").get<std::string>());
    } else if (p.contains("values")) {
      s.values = p.at("values").get<std::vector<double>>();
    } else if (p.contains("generator")) {
      const json& gen = p.at("generator");
      s = sample_mixture(family_from_json(gen.at("family")), mixing_from_json(gen.at("mixing")),
                         gen.value("n", std::size_t{50}), gen.value("seed", 0ULL));
    } else {
      throw parse_error("degenerate_sequence needs sample_csv, values, or generator");
    }
    std::vector<double> k_list =
        p.value("k_list", std::vector<double>{1, 1e2, 1e4, 1e6, 1e20, 1e40, 1e80});
    return degenerate_sequence_demo(s, k_list);
  }
  if (name == "concentration") {
    Sample s;
    if (p.contains("sample_csv")) {
      s = sample_load_csv(p.at("sample_csv").get<std::string>());
    } else if (p.contains("values")) {
      s.values = p.at("values").get<std::vector<double>>();
    } else if (p.contains("generator")) {
      const json& gen = p.at("generator");
      s = sample_mixture(family_from_json(gen.at("family")), mixing_from_json(gen.at("mixing")),
                         gen.value("n", std::size_t{1000}), gen.value("seed", 0ULL));
    } else {
      throw parse_error("concentration needs sample_csv, values, or generator");
    }
    return check_concentration(p.at("density_sup").get<double>(), s,
                               p.at("eps_list").get<std::vector<double>>());
  }
  if (name == "poisson_heavy_tail") {
    return poisson_heavy_tail_check(p.at("x_list").get<std::vector<int>>());
  }
  if (name == "g_dominance") {
    return g_dominance_check(p.value("eps0", 0.05),
                             p.at("sigma1_list").get<std::vector<double>>(),
                             p.value("offset_multipliers", std::vector<double>{1, 2, 5, 10, 100}));
  }
  if (name == "kl_finiteness_bounded_poisson") {
    return check_kl_finiteness_bounded_poisson(p.at("m_bound").get<double>(),
                                               mixing_from_json(p.at("g_star")),
                                               p.value("mc_n", std::size_t{100000}),
                                               p.value("seed", 0ULL));
  }
  throw parse_error("unknown check name \"" + name +
                    "\" (expected jensen_kl | pfanzagl | finite_grid_mle | degenerate_sequence | "
                    "concentration | poisson_heavy_tail | g_dominance | "
                    "kl_finiteness_bounded_poisson)");
}

}  // namespace

extern "C" {

const char* mixlab_version(void) { return "0.1.0"; }

const char* mixlab_status_name(mixlab_status s) {
  switch (s) {
    case MIXLAB_OK: return "ok";
    case MIXLAB_ERROR_INVALID_ARGUMENT: return "invalid_argument";
    case MIXLAB_ERROR_DOMAIN: return "domain_error";
    case MIXLAB_ERROR_PARSE: return "parse_error";
    case MIXLAB_ERROR_IO: return "io_error";
    case MIXLAB_ERROR_FIT: return "fit_error";
    case MIXLAB_ERROR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char* mixlab_last_error(void) { return g_last_error.c_str(); }

mixlab_status mixlab_mixing_from_json(const char* json_text, mixlab_mixing** out) {
  if (auto s = require(json_text && out, "null argument")) return s;
  return guarded([&] { *out = new mixlab_mixing{mixing_from_json(parse_json(json_text))}; });
}

mixlab_status mixlab_mixing_to_json(const mixlab_mixing* g, char** json_out) {
  if (auto s = require(g && json_out, "null argument")) return s;
  return guarded([&] {
    std::string text = mixing_to_json(g->g).dump(2);
    *json_out = new char[text.size() + 1];
    std::memcpy(*json_out, text.c_str(), text.size() + 1);
  });
}

mixlab_status mixlab_mixing_load(const char* path, mixlab_mixing** out) {
  if (auto s = require(path && out, "null argument")) return s;
  return guarded([&] { *out = new mixlab_mixing{mixing_from_json(load_json_file(path))}; });
}

mixlab_status mixlab_mixing_save(const mixlab_mixing* g, const char* path) {
  if (auto s = require(g && path, "null argument")) return s;
  return guarded([&] { write_text_file(path, mixing_to_json(g->g).dump(2) + "\n"); });
}

void mixlab_mixing_free(mixlab_mixing* g) { delete g; }

mixlab_status mixlab_kw_distance(const mixlab_mixing* a, const mixlab_mixing* b, int dim,
                                 double* value_out, uint64_t* cells_out) {
  if (auto s = require(a && b && value_out, "null argument")) return s;
  return guarded([&] {
    KwDistanceResult r = kw_distance(a->g, b->g, dim);
    *value_out = r.value;
    if (cells_out) *cells_out = r.cells_evaluated;
  });
}

mixlab_status mixlab_sample_generate(const char* family_json, const mixlab_mixing* g, size_t n,
                                     uint64_t seed, mixlab_sample** out) {
  if (auto s = require(family_json && g && out, "null argument")) return s;
  return guarded([&] {
    ComponentFamily fam = family_from_json(parse_json(family_json));
    *out = new mixlab_sample{sample_mixture(fam, g->g, n, seed)};
  });
}

mixlab_status mixlab_sample_load_csv(const char* csv_path, mixlab_sample** out) {
  if (auto s = require(csv_path && out, "null argument")) return s;
  return guarded([&] { *out = new mixlab_sample{sample_load_csv(csv_path)}; });
}

mixlab_status mixlab_sample_save_csv(const mixlab_sample* s, const char* csv_path,
                                     const char* family_json, const mixlab_mixing* g) {
  if (auto st = require(s && csv_path, "null argument")) return st;
  return guarded([&] {
    json meta = json::object();
    if (family_json) meta["family"] = family_to_json(family_from_json(parse_json(family_json)));
    if (g) meta["mixing"] = mixing_to_json(g->g);
    sample_save_csv(s->s, csv_path, meta);
  });
}

size_t mixlab_sample_size(const mixlab_sample* s) { return s ? s->s.size() : 0; }

void mixlab_sample_free(mixlab_sample* s) { delete s; }

mixlab_status mixlab_log_likelihood(const char* family_json, const mixlab_mixing* g,
                                    const mixlab_sample* s, double* out) {
  if (auto st = require(family_json && g && s && out, "null argument")) return st;
  return guarded([&] {
    ComponentFamily fam = family_from_json(parse_json(family_json));
    *out = log_likelihood(fam, g->g, s->s);
  });
}

mixlab_status mixlab_fit(const mixlab_sample* s, const char* config_json, mixlab_result** out) {
  if (auto st = require(s && config_json && out, "null argument")) return st;
  return guarded([&] {
    FitConfig cfg = fit_config_from_json(parse_json(config_json));
    FitReport rpt = em_fit(cfg, s->s);
    *out = wrap_result(fit_report_to_json(rpt));
  });
}

mixlab_status mixlab_npmle(const mixlab_sample* s, const char* config_json, mixlab_result** out) {
  if (auto st = require(s && config_json && out, "null argument")) return st;
  return guarded([&] {
    json j = parse_json(config_json);
    if (!j.contains("family")) throw parse_error("npmle config needs a \"family\"");
    ComponentFamily fam = family_from_json(j["family"]);
    NpmleConfig cfg = npmle_config_from_json(j);
    NpmleResult r = npmle_fit(fam, s->s, cfg);
    *out = wrap_result(npmle_result_to_json(r));
  });
}

mixlab_status mixlab_check(const char* name, const char* params_json, mixlab_result** out,
                           int* passed_out) {
  if (auto st = require(name && params_json && out, "null argument")) return st;
  return guarded([&] {
    CheckReport rep = run_named_check(name, parse_json(params_json));
    if (passed_out) *passed_out = rep.passed ? 1 : 0;
    *out = wrap_result(check_report_to_json(rep));
  });
}

mixlab_status mixlab_experiment(const char* kind, const char* config_json, mixlab_result** out) {
  if (auto st = require(kind && config_json && out, "null argument")) return st;
  return guarded([&] {
    json j = parse_json(config_json);
    ExperimentConfig cfg = experiment_config_from_json(j);
    std::string k(kind);
    if (k == "consistency") {
      auto rows = run_consistency(cfg);
      *out = wrap_result(summary_to_json(summarize(rows, cfg.n_grid)));
    } else if (k == "degeneracy") {
      std::vector<double> k_list =
          j.value("k_list", std::vector<double>{1, 1e2, 1e4, 1e6, 1e20, 1e40, 1e80});
      auto rows = run_degeneracy_comparison(cfg, k_list);
      std::size_t exceed = 0, bound_ok = 0;
      for (const auto& r : rows) {
        if (r.plain_objective > r.penalized_objective) ++exceed;
        if (r.bound_ok) ++bound_ok;
      }
      *out = wrap_result(json{{"replications", rows.size()},
                              {"plain_exceeds_penalized", exceed},
                              {"bound_ok", bound_ok}});
    } else {
      throw parse_error("unknown experiment kind \"" + k +
                        "\" (expected consistency | degeneracy)");
    }
  });
}

const char* mixlab_result_json(const mixlab_result* r) { return r ? r->json_text.c_str() : ""; }

void mixlab_result_free(mixlab_result* r) { delete r; }

void mixlab_string_free(char* s) { delete[] s; }

}  // extern "C"
