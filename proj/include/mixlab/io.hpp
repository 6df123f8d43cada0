#pragma once

#include <string>

#include <json.hpp>

#include "mixlab/checks.hpp"
#include "mixlab/em.hpp"
#include "mixlab/experiments.hpp"
#include "mixlab/model.hpp"
#include "mixlab/npmle.hpp"

namespace mixlab {

using nlohmann::json;

// Parse with a line:column position in the error message.
json parse_json(const std::string& text, const std::string& origin = "");
json load_json_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// {"atoms":[{"mean":..,"scale":..}], "weights":[..], "mass":..}
json mixing_to_json(const MixingDistribution& g);
MixingDistribution mixing_from_json(const json& j);

// {"variant":"poisson"} |
// {"variant":"normal_equal_variance","sigma2":..} |
// {"variant":"normal_free_variance"}
json family_to_json(const ComponentFamily& f);
ComponentFamily family_from_json(const json& j);

json fit_config_to_json(const FitConfig& cfg);
FitConfig fit_config_from_json(const json& j);

json fit_report_to_json(const FitReport& r);

json npmle_config_to_json(const NpmleConfig& cfg);
NpmleConfig npmle_config_from_json(const json& j);
json npmle_result_to_json(const NpmleResult& r);

json check_report_to_json(const CheckReport& r);

ExperimentConfig experiment_config_from_json(const json& j);
json summary_to_json(const std::vector<SummaryRow>& rows);

// CSV with a single `value` header column; a sidecar <stem>.meta.json
// records seed, family (when known), mixing law, and provenance.
void sample_save_csv(const Sample& s, const std::string& csv_path,
                     const json& metadata = json::object());
Sample sample_load_csv(const std::string& csv_path);

void replication_results_save_csv(const std::vector<ReplicationResult>& rows,
                                  const std::string& path);
void degeneracy_rows_save_csv(const std::vector<DegeneracyRow>& rows, const std::string& path);

// Full round-trip precision for doubles embedded in CSV.
std::string format_double(double v);

}  // namespace mixlab
