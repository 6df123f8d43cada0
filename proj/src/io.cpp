#include "mixlab/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mixlab/errors.hpp"

namespace mixlab {

namespace {

// nlohmann reports byte offsets; translate to line:column for config errors.
std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw parse_error(std::string("missing or non-numeric field \"") + key + "\"");
  return j[key].get<double>();
}

std::string meta_path_for(const std::string& csv_path) {
  std::filesystem::path p(csv_path);
  p.replace_extension();
  return p.string() + ".meta.json";
}

}  // namespace

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    std::ostringstream msg;
    if (!origin.empty()) msg << origin << ": ";
    msg << "JSON parse error at line " << line << ", column " << col << ": " << e.what();
    throw parse_error(msg.str());
  }
}

json load_json_file(const std::string& path) { return parse_json(read_text_file(path), path); }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw parse_error("cannot open file for writing: " + path);
  out << content;
}

std::string format_double(double v) {
  char buf[32];
  int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

json mixing_to_json(const MixingDistribution& g) {
  json atoms = json::array();
  for (const auto& a : g.atoms) {
    json atom = {{"mean", a.mean}};
    if (a.scale) atom["scale"] = *a.scale;
    atoms.push_back(atom);
  }
  return {{"atoms", atoms}, {"weights", g.weights}, {"mass", g.mass}};
}

MixingDistribution mixing_from_json(const json& j) {
  if (!j.is_object() || !j.contains("atoms") || !j.contains("weights"))
    throw parse_error("mixing distribution needs \"atoms\" and \"weights\" arrays");
  MixingDistribution g;
  for (const auto& atom : j["atoms"]) {
    ParamPoint p;
    p.mean = require_number(atom, "mean");
    if (atom.contains("scale") && !atom["scale"].is_null()) p.scale = atom["scale"].get<double>();
    g.atoms.push_back(p);
  }
  for (const auto& w : j["weights"]) {
    if (!w.is_number()) throw parse_error("mixing weights must be numbers");
    g.weights.push_back(w.get<double>());
  }
  if (j.contains("mass")) {
    g.mass = require_number(j, "mass");
  } else {
    g.mass = 0.0;
    for (double w : g.weights) g.mass += w;
  }
  validate(g);
  return g;
}

json family_to_json(const ComponentFamily& f) {
  switch (f.kind) {
    case FamilyKind::Poisson:
      return {{"variant", "poisson"}};
    case FamilyKind::NormalEqualVariance:
      return {{"variant", "normal_equal_variance"}, {"sigma2", f.structural_sigma2}};
    case FamilyKind::NormalFreeVariance:
      return {{"variant", "normal_free_variance"}};
  }
  throw contract_error("unknown family kind");
}

ComponentFamily family_from_json(const json& j) {
  if (!j.is_object() || !j.contains("variant") || !j["variant"].is_string())
    throw parse_error("family needs a \"variant\" string");
  std::string v = j["variant"].get<std::string>();
  if (v == "poisson") return ComponentFamily::poisson();
  if (v == "normal_equal_variance") {
    double s2 = require_number(j, "sigma2");
    if (!(s2 > 0.0)) throw parse_error("family sigma2 must be > 0");
    return ComponentFamily::normal_equal_variance(s2);
  }
  if (v == "normal_free_variance") return ComponentFamily::normal_free_variance();
  throw parse_error("unknown family variant \"" + v +
                    "\" (expected poisson | normal_equal_variance | normal_free_variance)");
}

namespace {
std::string mode_name(FitMode m) {
  switch (m) {
    case FitMode::Plain: return "plain";
    case FitMode::Penalized: return "penalized";
    case FitMode::Constrained: return "constrained";
    case FitMode::EqualVariance: return "equal_variance";
  }
  return "?";
}
}  // namespace

json fit_config_to_json(const FitConfig& cfg) {
  json j = {{"family", family_to_json(cfg.family)},
            {"m", cfg.m},
            {"mode", mode_name(cfg.mode)},
            {"max_iter", cfg.max_iter},
            {"tol", cfg.tol},
            {"restarts", cfg.restarts},
            {"seed", cfg.seed}};
  if (cfg.penalty) {
    j["penalty"] = {{"scale_anchor", cfg.penalty->scale_anchor},
                    {"form", cfg.penalty->form == PenaltyForm::LogOnly ? "log_only"
                                                                       : "inverse_plus_log"}};
  }
  if (cfg.mode == FitMode::Constrained) j["sigma_floor"] = cfg.sigma_floor;
  return j;
}

FitConfig fit_config_from_json(const json& j) {
  FitConfig cfg;
  if (!j.is_object()) throw parse_error("fit config must be a JSON object");
  if (!j.contains("family")) throw parse_error("fit config needs a \"family\"");
  cfg.family = family_from_json(j["family"]);
  cfg.m = static_cast<std::size_t>(require_number(j, "m"));
  std::string mode = j.value("mode", "plain");
  if (mode == "plain") cfg.mode = FitMode::Plain;
  else if (mode == "penalized") cfg.mode = FitMode::Penalized;
  else if (mode == "constrained") cfg.mode = FitMode::Constrained;
  else if (mode == "equal_variance") cfg.mode = FitMode::EqualVariance;
  else throw parse_error("unknown fit mode \"" + mode + "\"");
  if (j.contains("penalty") && !j["penalty"].is_null()) {
    PenaltyConfig pc;
    const json& p = j["penalty"];
    if (p.contains("scale_anchor")) pc.scale_anchor = require_number(p, "scale_anchor");
    std::string form = p.value("form", "inverse_plus_log");
    if (form == "inverse_plus_log") pc.form = PenaltyForm::InversePlusLog;
    else if (form == "log_only") pc.form = PenaltyForm::LogOnly;
    else throw parse_error("unknown penalty form \"" + form + "\"");
    cfg.penalty = pc;
  }
  cfg.sigma_floor = j.value("sigma_floor", 0.0);
  cfg.max_iter = static_cast<std::size_t>(j.value("max_iter", 2000.0));
  cfg.tol = j.value("tol", 1e-8);
  cfg.restarts = static_cast<std::size_t>(j.value("restarts", 1.0));
  cfg.seed = j.value("seed", 0ULL);
  return cfg;
}

json fit_report_to_json(const FitReport& r) {
  json j = {{"estimate", mixing_to_json(r.estimate)},
            {"objective_trace", r.objective_trace},
            {"objective", r.objective_trace.back()},
            {"converged", r.converged},
            {"iterations", r.iterations},
            {"best_of_restarts", r.best_of_restarts}};
  if (r.structural_sigma2) j["structural_sigma2"] = *r.structural_sigma2;
  if (!r.warning.empty()) j["warning"] = r.warning;
  return j;
}

json npmle_config_to_json(const NpmleConfig& cfg) {
  return {{"grid_atoms", cfg.grid_atoms},
          {"tol_grad", cfg.tol_grad},
          {"max_rounds", cfg.max_rounds},
          {"max_inner", cfg.max_inner}};
}

NpmleConfig npmle_config_from_json(const json& j) {
  NpmleConfig cfg;
  if (!j.is_object()) throw parse_error("npmle config must be a JSON object");
  cfg.grid_atoms = static_cast<std::size_t>(j.value("grid_atoms", 200.0));
  cfg.tol_grad = j.value("tol_grad", 1e-3);
  cfg.max_rounds = static_cast<std::size_t>(j.value("max_rounds", 200.0));
  cfg.max_inner = static_cast<std::size_t>(j.value("max_inner", 20000.0));
  return cfg;
}

json npmle_result_to_json(const NpmleResult& r) {
  return {{"estimate", mixing_to_json(r.estimate)},
          {"gradient_sup", r.gradient_sup},
          {"support_size", r.support_size},
          {"distinct_obs", r.distinct_obs},
          {"certified", r.certified},
          {"rounds", r.rounds}};
}

json check_report_to_json(const CheckReport& r) {
  json j = {{"name", r.name},
            {"passed", r.passed},
            {"statistic", r.statistic},
            {"threshold", r.threshold},
            {"comparison", r.comparison},
            {"details", r.details}};
  if (r.standard_error) j["standard_error"] = *r.standard_error;
  return j;
}

ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig cfg;
  if (!j.is_object() || !j.contains("generator"))
    throw parse_error("experiment config needs a \"generator\"");
  const json& gen = j["generator"];
  if (!gen.contains("family") || !gen.contains("mixing"))
    throw parse_error("experiment generator needs \"family\" and \"mixing\"");
  cfg.generator.family = family_from_json(gen["family"]);
  cfg.generator.g_star = mixing_from_json(gen["mixing"]);
  if (!j.contains("n_grid") || !j["n_grid"].is_array())
    throw parse_error("experiment config needs an \"n_grid\" array");
  for (const auto& n : j["n_grid"]) cfg.n_grid.push_back(n.get<std::size_t>());
  cfg.reps = static_cast<std::size_t>(require_number(j, "reps"));
  if (!j.contains("fit")) throw parse_error("experiment config needs a \"fit\" config");
  cfg.fit = fit_config_from_json(j["fit"]);
  cfg.master_seed = j.value("master_seed", 0ULL);
  cfg.output_path = j.value("output_path", std::string{});
  cfg.threads = static_cast<std::size_t>(j.value("threads", 0.0));
  return cfg;
}

json summary_to_json(const std::vector<SummaryRow>& rows) {
  json per_n = json::array();
  for (const auto& r : rows)
    per_n.push_back({{"n", r.n},
                     {"median", r.median},
                     {"q25", r.q25},
                     {"q75", r.q75},
                     {"failures", r.failures}});
  return {{"per_n", per_n}};
}

void sample_save_csv(const Sample& s, const std::string& csv_path, const json& metadata) {
  validate(s);
  std::ostringstream csv;
  csv << "value\n";
  for (double v : s.values) csv << format_double(v) << '\n';
  write_text_file(csv_path, csv.str());

  json meta = metadata;
  meta["seed"] = s.seed;
  meta["n"] = s.values.size();
  if (!s.provenance.empty()) meta["provenance"] = s.provenance;
  write_text_file(meta_path_for(csv_path), meta.dump(2) + "\n");
}

Sample sample_load_csv(const std::string& csv_path) {
  std::istringstream in(read_text_file(csv_path));
  std::string line;
  if (!std::getline(in, line)) throw parse_error(csv_path + ": empty sample file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "value") throw parse_error(csv_path + ": expected header \"value\"");
  Sample s;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc{} || ptr != line.data() + line.size())
      throw parse_error(csv_path + ": bad numeric value at line " + std::to_string(lineno));
    s.values.push_back(v);
  }
  validate(s);
  std::string meta_path = meta_path_for(csv_path);
  if (std::filesystem::exists(meta_path)) {
    json meta = load_json_file(meta_path);
    s.seed = meta.value("seed", 0ULL);
    s.provenance = meta.value("provenance", std::string{});
  }
  return s;
}

void replication_results_save_csv(const std::vector<ReplicationResult>& rows,
                                  const std::string& path) {
  std::ostringstream out;
  out << "n,rep,kw_dist,objective,converged,wall_time_ms\n";
  for (const auto& r : rows)
    out << r.n << ',' << r.rep << ',' << format_double(r.kw_dist) << ','
        << format_double(r.objective) << ',' << (r.converged ? 1 : 0) << ',' << r.wall_time_ms
        << '\n';
  write_text_file(path, out.str());
}

void degeneracy_rows_save_csv(const std::vector<DegeneracyRow>& rows, const std::string& path) {
  std::ostringstream out;
  out << "n,rep,plain_objective,degenerate_bound,bound_ok,penalized_objective,kw_dist,"
         "min_sigma_over_sn,converged,wall_time_ms\n";
  for (const auto& r : rows)
    out << r.n << ',' << r.rep << ',' << format_double(r.plain_objective) << ','
        << format_double(r.degenerate_bound) << ',' << (r.bound_ok ? 1 : 0) << ','
        << format_double(r.penalized_objective) << ',' << format_double(r.kw_dist) << ','
        << format_double(r.min_sigma_over_sn) << ',' << (r.converged ? 1 : 0) << ','
        << r.wall_time_ms << '\n';
  write_text_file(path, out.str());
}

}  // namespace mixlab
