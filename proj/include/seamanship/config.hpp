#pragma once

#include "seamanship/geometry.hpp"
#include "seamanship/ingest.hpp"
#include "seamanship/io.hpp"
#include "seamanship/planner.hpp"
#include "seamanship/risk.hpp"
#include "seamanship/scoring.hpp"
#include "seamanship/speed_model.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace seamanship {

struct RunPaths {
  std::optional<std::filesystem::path> ais;
  std::optional<std::filesystem::path> chart;
  std::optional<std::filesystem::path> scenario;
  std::vector<std::filesystem::path> scenarios; // extra archives for fit-speed-model
  std::optional<std::filesystem::path> model;   // model file or directory of them
  std::filesystem::path output_dir = "run";
};

/// Grid sizes swept by safest-path. Empty lists keep the configured value.
struct SweepConfig {
  std::vector<int> n_t;
  std::vector<int> n_alpha;
  std::vector<int> n_v;
  bool exhaustive = false; // also run the unpruned search where affordable
};

struct RunConfig {
  RunPaths paths;
  AisSchema schema;
  IngestParams ingest;
  DomainParams domain;
  RiskParams risk;
  KinodynamicParams kinodynamics;
  Hyperparameters search;
  ScoreParams score;
  SpeedModelParams speed_model;

  std::string ownship;
  std::optional<double> t_start; // s since scenario epoch
  std::optional<double> t_end;
  std::optional<double> time;    // planning time for safest-path
  SweepConfig sweep;
  bool compare_exhaustive = false;

  /// Runs every block's own checks.
  void validate() const;
};

/// Sets a dotted key ("search.n_t") in a config document. The value is read
/// as JSON when it parses, otherwise as a plain string.
void apply_override(Json& doc, const std::string& assignment);

/// Relative paths inside `doc` are resolved against `base_dir`.
RunConfig config_from_json(const Json& doc, const std::filesystem::path& base_dir = {});

/// Reads the file (if any), applies overrides in order, then parses.
RunConfig load_config(const std::optional<std::filesystem::path>& file, const std::vector<std::string>& overrides);

/// Every parameter that affects results; paths excluded.
Json config_echo(const RunConfig& config);
std::string params_hash(const RunConfig& config);

} // namespace seamanship
