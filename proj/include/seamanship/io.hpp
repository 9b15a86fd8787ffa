#pragma once

#include "seamanship/geometry.hpp"
#include "seamanship/ingest.hpp"
#include "seamanship/planner.hpp"
#include "seamanship/risk.hpp"
#include "seamanship/scenario.hpp"
#include "seamanship/scoring.hpp"
#include "seamanship/speed_model.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace seamanship {

using Json = nlohmann::json;

inline constexpr int kScenarioSchemaVersion = 1;

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Shortest text that reads back to the same double.
std::string format_number(double value);

std::string read_text(const std::filesystem::path& path);
/// Creates parent directories as needed.
void write_text(const std::filesystem::path& path, std::string_view text);
/// Two-space indented, keys sorted, trailing newline.
std::string dump_json(const Json& j);
Json read_json(const std::filesystem::path& path);

// Parameter blocks. Reading applies only the keys present and rejects
// unknown ones with ConfigError.
Json to_json(const DomainParams& p);
Json to_json(const RiskParams& p);
Json to_json(const KinodynamicParams& p);
Json to_json(const Hyperparameters& p);
Json to_json(const ScoreParams& p);
Json to_json(const SpeedModelParams& p);
Json to_json(const IngestParams& p);
Json to_json(const AisSchema& p);
void apply_json(const Json& j, DomainParams& p);
void apply_json(const Json& j, RiskParams& p);
void apply_json(const Json& j, KinodynamicParams& p);
void apply_json(const Json& j, Hyperparameters& p);
void apply_json(const Json& j, ScoreParams& p);
void apply_json(const Json& j, SpeedModelParams& p);
void apply_json(const Json& j, IngestParams& p);
void apply_json(const Json& j, AisSchema& p);

Json scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const Json& j);
void save_scenario(const std::filesystem::path& path, const Scenario& scenario);
Scenario load_scenario(const std::filesystem::path& path);

Json speed_model_to_json(const SpeedChangeModel& model);
SpeedChangeModel speed_model_from_json(const Json& j);

Json risk_series_to_json(const RiskSeries& series);
/// Columns: time, CR per target (plus wavg/worst when present), GR, SR,
/// SR* and SR_norm when present. `header` lines are written as '# ' comments.
std::string risk_series_csv(const RiskSeries& series, const std::vector<std::string>& header);

Json path_to_json(const Path& path);
Json path_result_to_json(const PathResult& result);
/// One row per node of every returned path.
std::string path_result_csv(const PathResult& result, const std::vector<std::string>& header);

Json gss_report_to_json(const GssReport& report);
/// vessel,t_start,t_end,sr_max,j_m,j_c,gss,params_hash
std::string gss_csv_header();
std::string gss_csv_row(const GssReport& report, std::string_view params_hash);

} // namespace seamanship
