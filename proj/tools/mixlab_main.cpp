// Command-line front end; talks to the library exclusively through the C
// API in mixlab/mixlab.h. Exit codes: 0 success (or check passed),
// 1 check failed, 2 usage/config error.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mixlab/mixlab.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct CliError {
  std::string message;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{"cannot open file: " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CliError{"cannot open file for writing: " + path};
  out << content;
}

[[noreturn]] void fail(mixlab_status status) {
  throw CliError{std::string(mixlab_status_name(status)) + ": " + mixlab_last_error()};
}

void check_status(mixlab_status status) {
  if (status != MIXLAB_OK) fail(status);
}

nlohmann::json parse_config(const std::string& path) {
  try {
    return nlohmann::json::parse(slurp(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw CliError{path + ": " + e.what()};
  }
}

struct MixingHandle {
  mixlab_mixing* ptr = nullptr;
  ~MixingHandle() { mixlab_mixing_free(ptr); }
};

struct SampleHandle {
  mixlab_sample* ptr = nullptr;
  ~SampleHandle() { mixlab_sample_free(ptr); }
};

struct ResultHandle {
  mixlab_result* ptr = nullptr;
  ~ResultHandle() { mixlab_result_free(ptr); }
  std::string json_text() const { return mixlab_result_json(ptr); }
};

int cmd_sample(const std::string& config_path, const std::string& output, bool as_json) {
  nlohmann::json cfg = parse_config(config_path);
  if (!cfg.contains("family") || !cfg.contains("mixing"))
    throw CliError{config_path + ": sample config needs \"family\" and \"mixing\""};
  std::string family = cfg["family"].dump();
  MixingHandle g;
  check_status(mixlab_mixing_from_json(cfg["mixing"].dump().c_str(), &g.ptr));
  auto n = cfg.value("n", std::size_t{100});
  std::uint64_t seed = cfg.value("seed", 0ULL);
  SampleHandle s;
  check_status(mixlab_sample_generate(family.c_str(), g.ptr, n, seed, &s.ptr));
  check_status(mixlab_sample_save_csv(s.ptr, output.c_str(), family.c_str(), g.ptr));
  if (as_json) {
    std::cout << nlohmann::json{{"output", output}, {"n", n}, {"seed", seed}}.dump() << "\n";
  } else {
    std::cout << "wrote " << n << " observations to " << output << "\n";
  }
  return kExitOk;
}

int cmd_fit(const std::string& config_path, const std::string& sample_path,
            const std::string& output, bool npmle, bool as_json) {
  nlohmann::json cfg = parse_config(config_path);
  SampleHandle s;
  check_status(mixlab_sample_load_csv(sample_path.c_str(), &s.ptr));
  ResultHandle r;
  if (npmle)
    check_status(mixlab_npmle(s.ptr, cfg.dump().c_str(), &r.ptr));
  else
    check_status(mixlab_fit(s.ptr, cfg.dump().c_str(), &r.ptr));
  std::string report = r.json_text();
  if (!output.empty()) write_file(output, report + "\n");
  if (as_json || output.empty()) {
    std::cout << report << "\n";
  } else {
    nlohmann::json j = nlohmann::json::parse(report);
    if (npmle) {
      std::cout << "npmle: support=" << j["support_size"] << " gradient_sup=" << j["gradient_sup"]
                << " certified=" << j["certified"] << " -> " << output << "\n";
    } else {
      std::cout << "fit: objective=" << j["objective"] << " iterations=" << j["iterations"]
                << " converged=" << j["converged"] << " -> " << output << "\n";
    }
  }
  return kExitOk;
}

int cmd_distance(const std::string& g1_path, const std::string& g2_path, int dim, bool as_json) {
  MixingHandle a, b;
  check_status(mixlab_mixing_load(g1_path.c_str(), &a.ptr));
  check_status(mixlab_mixing_load(g2_path.c_str(), &b.ptr));
  double value = 0.0;
  uint64_t cells = 0;
  check_status(mixlab_kw_distance(a.ptr, b.ptr, dim, &value, &cells));
  if (as_json) {
    std::cout << nlohmann::json{{"value", value}, {"cells_evaluated", cells}, {"dim", dim}}.dump()
              << "\n";
  } else {
    std::printf("%.12f\n", value);
  }
  return kExitOk;
}

int cmd_check(const std::string& name, const std::string& config_path, const std::string& output,
              bool as_json) {
  nlohmann::json params =
      config_path.empty() ? nlohmann::json::object() : parse_config(config_path);
  ResultHandle r;
  int passed = 0;
  check_status(mixlab_check(name.c_str(), params.dump().c_str(), &r.ptr, &passed));
  std::string report = r.json_text();
  if (!output.empty()) write_file(output, report + "\n");
  if (as_json) {
    std::cout << report << "\n";
  } else {
    nlohmann::json j = nlohmann::json::parse(report);
    std::cout << (passed ? "PASS" : "FAIL") << " " << name << ": statistic=" << j["statistic"]
              << " " << j["comparison"].get<std::string>() << " threshold=" << j["threshold"]
              << "\n";
  }
  return passed ? kExitOk : kExitCheckFailed;
}

int cmd_experiment(const std::string& kind, const std::string& config_path, bool as_json) {
  nlohmann::json cfg = parse_config(config_path);
  ResultHandle r;
  check_status(mixlab_experiment(kind.c_str(), cfg.dump().c_str(), &r.ptr));
  std::string summary = r.json_text();
  if (as_json) {
    std::cout << summary << "\n";
  } else {
    nlohmann::json j = nlohmann::json::parse(summary);
    if (j.contains("per_n")) {
      std::cout << "n\tmedian\tq25\tq75\tfailures\n";
      for (const auto& row : j["per_n"])
        std::cout << row["n"] << "\t" << row["median"] << "\t" << row["q25"] << "\t" << row["q75"]
                  << "\t" << row["failures"] << "\n";
    } else {
      std::cout << summary << "\n";
    }
    if (cfg.contains("output_path"))
      std::cout << "rows -> " << cfg["output_path"].get<std::string>() << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixture-model estimation laboratory"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable output on stdout");

  std::string config_path, sample_path, output_path, check_name;
  std::string g1_path, g2_path;
  int dim = 1;

  auto* sample_cmd = app.add_subcommand("sample", "draw a sample from a mixture");
  sample_cmd->add_option("--config", config_path, "sample config JSON")->required();
  sample_cmd->add_option("--output", output_path, "output CSV path")->required();

  auto* fit_cmd = app.add_subcommand("fit", "EM fit of a finite mixture");
  fit_cmd->add_option("--config", config_path, "FitConfig JSON")->required();
  fit_cmd->add_option("--sample", sample_path, "sample CSV")->required();
  fit_cmd->add_option("--output", output_path, "FitReport JSON path");

  auto* npmle_cmd = app.add_subcommand("npmle", "grid-based nonparametric MLE");
  npmle_cmd->add_option("--config", config_path, "NPMLE config JSON")->required();
  npmle_cmd->add_option("--sample", sample_path, "sample CSV")->required();
  npmle_cmd->add_option("--output", output_path, "result JSON path");

  auto* dist_cmd = app.add_subcommand("distance", "Kiefer-Wolfowitz distance between two mixing "
                                                  "distributions");
  dist_cmd->add_option("g1", g1_path, "first mixing JSON")->required();
  dist_cmd->add_option("g2", g2_path, "second mixing JSON")->required();
  dist_cmd->add_option("--dim", dim, "1 = means only, 2 = (mean, scale)");

  auto* check_cmd = app.add_subcommand("check", "run a named theory check");
  check_cmd->add_option("--name", check_name, "check name")->required();
  check_cmd->add_option("--config", config_path, "check parameter JSON");
  check_cmd->add_option("--output", output_path, "CheckReport JSON path");

  auto* exp_cmd = app.add_subcommand("experiment", "simulation experiments");
  exp_cmd->require_subcommand(1);
  std::string exp_config;
  auto* exp_cons = exp_cmd->add_subcommand("consistency", "KW-distance consistency sweep");
  exp_cons->add_option("--config", exp_config, "ExperimentConfig JSON")->required();
  auto* exp_degen = exp_cmd->add_subcommand("degeneracy", "plain vs penalized degeneracy study");
  exp_degen->add_option("--config", exp_config, "ExperimentConfig JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sample_cmd->parsed()) return cmd_sample(config_path, output_path, as_json);
    if (fit_cmd->parsed()) return cmd_fit(config_path, sample_path, output_path, false, as_json);
    if (npmle_cmd->parsed()) return cmd_fit(config_path, sample_path, output_path, true, as_json);
    if (dist_cmd->parsed()) return cmd_distance(g1_path, g2_path, dim, as_json);
    if (check_cmd->parsed()) return cmd_check(check_name, config_path, output_path, as_json);
    if (exp_cmd->parsed()) {
      return cmd_experiment(exp_cons->parsed() ? "consistency" : "degeneracy", exp_config,
                            as_json);
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
