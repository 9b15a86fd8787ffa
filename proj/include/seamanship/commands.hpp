#pragma once

#include "seamanship/config.hpp"
#include "seamanship/planner.hpp"
#include "seamanship/risk.hpp"
#include "seamanship/scenario.hpp"
#include "seamanship/scoring.hpp"
#include "seamanship/speed_model.hpp"

#include <exception>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace seamanship {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitInternal = 3;

/// 2 for input and configuration errors, 3 for everything else.
int exit_code_for(const std::exception& e);
/// Machine-readable failure record: {"status", "kind", "message"}.
Json error_json(const std::exception& e);

struct InputSet {
  std::vector<SourceDigest> digests;
  Json to_json() const;
};

/// Loads paths.scenario, or ingests paths.ais (+ chart) when no archive is set.
Scenario load_run_scenario(const RunConfig& config, InputSet& inputs);
/// A single model file or a directory of speed_model_<Type>.json files.
SpeedModelSet load_speed_models(const std::filesystem::path& path, InputSet& inputs);

/// Score time grid: multiples of dt inside the window and the ownship track.
std::vector<double> score_times(const Scenario& scenario, const RunConfig& config);

/// Deterministic CR, GR and SR for the ownship at each time; probabilistic
/// columns are filled only when `models` is non-null.
RiskSeries compute_risk_series(const Scenario& scenario, const std::string& ownship, std::span<const double> times,
                               const SpeedModelSet* models, const RunConfig& config);

struct ScoreOutcome {
  RiskSeries series;
  std::vector<PathResult> searches;
  GssReport proposed;
  GssReport baseline;
  std::size_t sr_star_clamped = 0;    // steps where the search found no better than recorded
  std::size_t sr_star_above_half = 0; // steps normalised with f(sr_star) < 1
  std::vector<std::string> warnings;
};

/// Scores an already loaded scenario; no files are touched.
ScoreOutcome score_scenario(const Scenario& scenario, const RunConfig& config, const SpeedModelSet* models);

struct SweepRow {
  int n_t = 0;
  int n_alpha = 0;
  int n_v = 0;
  double sr_star = 0.0;
  std::size_t nodes_evaluated = 0;
  std::optional<double> exhaustive_sr_star;
  bool divergent = false;
};

struct NestedViolation {
  std::size_t coarse = 0; // row indices into the sweep
  std::size_t fine = 0;
};

/// Pairs of sweep rows with equal n_t whose action grids nest, where the
/// finer grid found a higher sr_star.
std::vector<NestedViolation> nested_grid_violations(std::span<const SweepRow> rows, const RunConfig& config,
                                                    double own_speed);

Scenario cmd_ingest(const RunConfig& config);
SpeedModelSet cmd_fit_speed_model(const RunConfig& config);
ScoreOutcome cmd_score(const RunConfig& config);
PathResult cmd_safest_path(const RunConfig& config);

} // namespace seamanship
