#include "seamanship/commands.hpp"

#include "seamanship/ingest.hpp"
#include "seamanship/io.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

namespace seamanship {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const InputError*>(&e) || dynamic_cast<const ConfigError*>(&e)) return kExitInput;
  return kExitInternal;
}

Json error_json(const std::exception& e) {
  std::string kind = "internal";
  if (dynamic_cast<const OutOfRangeError*>(&e)) kind = "out_of_range";
  else if (dynamic_cast<const InputError*>(&e)) kind = "input";
  else if (dynamic_cast<const ConfigError*>(&e)) kind = "config";
  else if (dynamic_cast<const InvariantError*>(&e)) kind = "invariant";
  return {{"status", exit_code_for(e)}, {"kind", kind}, {"message", e.what()}};
}

Json InputSet::to_json() const {
  Json out = Json::array();
  for (const SourceDigest& d : digests) out.push_back({{"role", d.role}, {"path", d.path}, {"sha256", d.sha256}});
  return out;
}

namespace {

void require_file(const std::filesystem::path& path, const std::string& role) {
  if (!std::filesystem::is_regular_file(path)) throw InputError(role + " file not found: " + path.string());
}

SourceDigest digest(const std::string& role, const std::filesystem::path& path) {
  return {role, path.generic_string(), sha256_file(path)};
}

// Output bookkeeping shared by the commands: every file carries the
// parameter echo, and the manifest lists what was written.
class RunWriter {
public:
  RunWriter(const RunConfig& config, std::string command, const InputSet& inputs)
      : config_(config), command_(std::move(command)), inputs_(inputs), echo_(config_echo(config)),
        hash_(params_hash(config)) {}

  Json envelope(Json body) const {
    body["params"] = echo_;
    body["params_hash"] = hash_;
    body["inputs"] = inputs_.to_json();
    return body;
  }

  std::vector<std::string> csv_header() const {
    std::vector<std::string> lines;
    lines.push_back("params_hash " + hash_);
    lines.push_back("params " + echo_.dump());
    for (const SourceDigest& d : inputs_.digests) lines.push_back("input " + d.role + " " + d.sha256 + " " + d.path);
    return lines;
  }

  void json(const std::string& name, Json body) { text(name, dump_json(envelope(std::move(body)))); }

  void text(const std::string& name, const std::string& content) {
    write_text(config_.paths.output_dir / name, content);
    outputs_.push_back({name, sha256_hex(content)});
  }

  void manifest() {
    Json files = Json::array();
    for (const auto& [name, sha] : outputs_) files.push_back({{"file", name}, {"sha256", sha}});
    Json body = {{"command", command_}, {"outputs", files}};
    write_text(config_.paths.output_dir / "manifest.json", dump_json(envelope(body)));
  }

  const std::string& hash() const { return hash_; }

private:
  const RunConfig& config_;
  std::string command_;
  const InputSet& inputs_;
  Json echo_;
  std::string hash_;
  std::vector<std::pair<std::string, std::string>> outputs_;
};

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';
}

} // namespace

Scenario load_run_scenario(const RunConfig& config, InputSet& inputs) {
  if (config.paths.scenario) {
    require_file(*config.paths.scenario, "scenario");
    inputs.digests.push_back(digest("scenario", *config.paths.scenario));
    return load_scenario(*config.paths.scenario);
  }
  if (!config.paths.ais) throw ConfigError("no scenario archive or AIS file configured");
  require_file(*config.paths.ais, "AIS");
  if (config.paths.chart) require_file(*config.paths.chart, "chart");
  Scenario scenario =
      ingest_files(*config.paths.ais, config.paths.chart, config.schema, config.ingest, config.risk.obstacle_spacing);
  scenario.sources.push_back(digest("ais", *config.paths.ais));
  if (config.paths.chart) scenario.sources.push_back(digest("chart", *config.paths.chart));
  for (const SourceDigest& d : scenario.sources) inputs.digests.push_back(d);
  return scenario;
}

SpeedModelSet load_speed_models(const std::filesystem::path& path, InputSet& inputs) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(path)) {
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      const std::string name = entry.path().filename().string();
      if (entry.is_regular_file() && name.rfind("speed_model_", 0) == 0 && entry.path().extension() == ".json")
        files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw InputError("no speed_model_*.json files in " + path.string());
  } else {
    require_file(path, "speed model");
    files.push_back(path);
  }
  SpeedModelSet models;
  for (const auto& f : files) {
    SpeedChangeModel m = speed_model_from_json(read_json(f));
    inputs.digests.push_back(digest("speed_model", f));
    models[m.vessel_type] = std::move(m);
  }
  return models;
}

std::vector<double> score_times(const Scenario& scenario, const RunConfig& config) {
  const VesselTrack& own = scenario.at(config.ownship);
  const double lo = std::max(config.t_start.value_or(own.start_time()), own.start_time());
  const double hi = std::min(config.t_end.value_or(own.end_time()), own.end_time());
  if (lo > hi) throw InputError("window lies outside the ownship track");
  const double dt = own.dt();
  std::vector<double> times;
  const auto k0 = static_cast<long long>(std::ceil(lo / dt - 1e-9));
  const auto k1 = static_cast<long long>(std::floor(hi / dt + 1e-9));
  for (long long k = k0; k <= k1; ++k) times.push_back(static_cast<double>(k) * dt);
  if (times.empty()) throw InputError("window holds no time step");
  return times;
}

RiskSeries compute_risk_series(const Scenario& scenario, const std::string& ownship, std::span<const double> times,
                               const SpeedModelSet* models, const RunConfig& config) {
  const VesselTrack& own = scenario.at(ownship);
  RiskSeries s;
  s.vessel_id = ownship;
  s.times.assign(times.begin(), times.end());

  std::vector<const VesselTrack*> targets;
  for (const VesselTrack& track : scenario.tracks) {
    if (track.id() == ownship) continue;
    if (std::any_of(times.begin(), times.end(), [&](double t) { return track.covers(t); })) {
      targets.push_back(&track);
      s.target_ids.push_back(track.id());
    }
  }
  const std::size_t n = times.size();
  s.collision_risk.assign(targets.size(), std::vector<double>(n, 0.0));
  if (models) {
    s.collision_risk_wavg.assign(targets.size(), std::vector<double>(n, 0.0));
    s.collision_risk_worst.assign(targets.size(), std::vector<double>(n, 0.0));
  }
  s.grounding_risk.assign(n, 0.0);
  s.scenario_risk.assign(n, 0.0);

  std::map<VesselType, SpeedChangeModel> fallback;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = times[i];
    const VesselState own_state = own.state_at(t);
    std::vector<VesselState> present;
    std::vector<std::size_t> index;
    for (std::size_t k = 0; k < targets.size(); ++k) {
      if (!targets[k]->covers(t)) continue;
      present.push_back(targets[k]->state_at(t));
      index.push_back(k);
    }
    const ScenarioRisk risk = evaluate_scenario_risk(own_state, present, scenario.obstacles, config.domain, config.risk);
    for (std::size_t m = 0; m < present.size(); ++m) s.collision_risk[index[m]][i] = risk.collision[m];
    s.grounding_risk[i] = risk.grounding;
    s.scenario_risk[i] = risk.scenario;

    if (!models) continue;
    for (std::size_t m = 0; m < present.size(); ++m) {
      const VesselType type = present[m].vessel_type;
      const SpeedChangeModel* model = nullptr;
      if (auto it = models->find(type); it != models->end()) {
        model = &it->second;
      } else {
        auto fb = fallback.find(type);
        if (fb == fallback.end()) fb = fallback.emplace(type, uniform_model(type, config.speed_model)).first;
        model = &fb->second;
      }
      const ProbabilisticRisk pr =
          probabilistic_cr(own_state, present[m], *model, config.speed_model.grid_n, config.domain, config.risk);
      s.collision_risk_wavg[index[m]][i] = pr.wavg;
      s.collision_risk_worst[index[m]][i] = pr.max;
    }
  }
  s.validate();
  return s;
}

ScoreOutcome score_scenario(const Scenario& scenario, const RunConfig& config, const SpeedModelSet* models) {
  if (config.ownship.empty()) throw ConfigError("ownship id is required");
  if (!scenario.find(config.ownship)) throw InputError("ownship '" + config.ownship + "' is not in the scenario");
  const std::vector<double> times = score_times(scenario, config);

  ScoreOutcome out;
  out.series = compute_risk_series(scenario, config.ownship, times, models, config);
  if (models)
    for (VesselType type : kAllVesselTypes)
      if (!models->count(type))
        out.warnings.push_back("no speed model for " + std::string(to_string(type)) + ", uniform fallback used");

  out.searches = sr_star_series(scenario, config.ownship, times, config.search, config.kinodynamics, config.domain,
                                config.risk);
  const std::size_t n = times.size();
  out.series.sr_star.resize(n);
  out.series.scenario_risk_norm.resize(n);
  std::size_t extrapolated = 0, truncated = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sr = out.series.scenario_risk[i];
    double star = out.searches[i].sr_star;
    if (!(star >= 0.0 && star <= 1.0)) throw InvariantError("search returned a risk outside [0, 1]");
    if (out.searches[i].targets_extrapolated) ++extrapolated;
    if (out.searches[i].beam_truncated) ++truncated;
    // The search is greedy per level, so the recorded track can beat it.
    if (star > sr) {
      star = sr;
      ++out.sr_star_clamped;
    }
    if (star > config.score.sr_star_eps && star > 0.5) ++out.sr_star_above_half;
    out.series.sr_star[i] = star;
    out.series.scenario_risk_norm[i] = normalize_risk(sr, star, config.score);
  }
  out.series.validate();
  if (out.sr_star_clamped)
    out.warnings.push_back(std::to_string(out.sr_star_clamped) + " step(s) where the search found no path safer than the record");
  if (extrapolated)
    out.warnings.push_back(std::to_string(extrapolated) + " step(s) planned past the end of a target track");
  if (truncated) out.warnings.push_back(std::to_string(truncated) + " step(s) hit the search beam width");

  auto report = [&](const std::vector<double>& series, bool normalized) {
    GssReport r;
    r.vessel_id = config.ownship;
    r.t_start = times.front();
    r.t_end = times.back();
    r.times = times;
    r.sr_series = out.series.scenario_risk;
    r.sr_norm_series = series;
    r.normalized = normalized;
    r.score = gss(series, times, config.score);
    return r;
  };
  out.proposed = report(out.series.scenario_risk_norm, true);
  out.baseline = report(out.series.scenario_risk, false);
  return out;
}

Scenario cmd_ingest(const RunConfig& config) {
  if (!config.paths.ais) throw ConfigError("paths.ais is required for ingest");
  InputSet inputs;
  RunConfig ingest_only = config;
  ingest_only.paths.scenario.reset();
  Scenario scenario = load_run_scenario(ingest_only, inputs);

  RunWriter writer(config, "ingest", inputs);
  writer.text("scenario.json", dump_json(scenario_to_json(scenario)));
  double vessel_seconds = 0.0;
  for (const VesselTrack& t : scenario.tracks) vessel_seconds += t.end_time() - t.start_time();
  writer.json("ingest_summary.json", {{"vessel_count", scenario.tracks.size()},
                                      {"start_time", scenario.start_time()},
                                      {"end_time", scenario.end_time()},
                                      {"duration", scenario.end_time() - scenario.start_time()},
                                      {"track_seconds", vessel_seconds},
                                      {"obstacle_count", scenario.obstacles.polygons().size()},
                                      {"obstacle_points", scenario.obstacles.sampled_points().size()},
                                      {"origin", {{"lat", scenario.origin.lat}, {"lon", scenario.origin.lon}}},
                                      {"epoch_unix", scenario.epoch_unix},
                                      {"warnings", scenario.warnings}});
  writer.manifest();
  print_warnings(scenario.warnings);
  return scenario;
}

SpeedModelSet cmd_fit_speed_model(const RunConfig& config) {
  InputSet inputs;
  std::vector<Scenario> scenarios;
  if (config.paths.scenario || config.paths.ais) scenarios.push_back(load_run_scenario(config, inputs));
  for (const auto& p : config.paths.scenarios) {
    require_file(p, "scenario");
    inputs.digests.push_back(digest("scenario", p));
    scenarios.push_back(load_scenario(p));
  }
  if (scenarios.empty()) throw ConfigError("fit-speed-model needs paths.scenario, paths.scenarios or paths.ais");

  std::vector<EncounterEvent> events;
  Json per_scenario = Json::array();
  for (const Scenario& s : scenarios) {
    const std::vector<EncounterEvent> found = detect_encounters(s.tracks, config.domain, config.speed_model);
    per_scenario.push_back(found.size());
    events.insert(events.end(), found.begin(), found.end());
  }

  std::vector<std::string> warnings;
  if (events.empty()) warnings.push_back("no encounters found; every model is the uniform fallback");

  RunWriter writer(config, "fit-speed-model", inputs);
  SpeedModelSet models;
  Json counts = Json::object(), degenerate = Json::object(), bandwidth = Json::object();
  for (VesselType type : kAllVesselTypes) {
    SpeedChangeModel m = fit_model(events, type, config.speed_model);
    const std::string name(to_string(type));
    counts[name] = m.samples.size();
    degenerate[name] = m.degenerate;
    bandwidth[name] = m.bandwidth;
    if (m.degenerate && !events.empty())
      warnings.push_back(name + ": " + std::to_string(m.samples.size()) + " sample(s), uniform fallback");
    writer.json("speed_model_" + name + ".json", speed_model_to_json(m));
    models[type] = std::move(m);
  }
  writer.json("fit_report.json", {{"event_count", events.size()},
                                  {"events_per_scenario", per_scenario},
                                  {"sample_counts", counts},
                                  {"degenerate", degenerate},
                                  {"bandwidth", bandwidth},
                                  {"warnings", warnings}});
  writer.manifest();
  print_warnings(warnings);
  return models;
}

ScoreOutcome cmd_score(const RunConfig& config) {
  InputSet inputs;
  const Scenario scenario = load_run_scenario(config, inputs);
  std::optional<SpeedModelSet> models;
  if (config.paths.model) models = load_speed_models(*config.paths.model, inputs);
  ScoreOutcome out = score_scenario(scenario, config, models ? &*models : nullptr);

  RunWriter writer(config, "score", inputs);
  const Json diagnostics = {{"sr_star_clamped", out.sr_star_clamped},
                            {"sr_star_above_half", out.sr_star_above_half},
                            {"warnings", out.warnings}};
  Json proposed = gss_report_to_json(out.proposed);
  proposed["diagnostics"] = diagnostics;
  writer.json("gss.json", proposed);
  writer.json("baseline_gss.json", gss_report_to_json(out.baseline));
  writer.text("gss.csv", gss_csv_header() + gss_csv_row(out.proposed, writer.hash()));
  writer.text("baseline_gss.csv", gss_csv_header() + gss_csv_row(out.baseline, writer.hash()));
  writer.json("risk_series.json", {{"series", risk_series_to_json(out.series)}});
  writer.text("risk_series.csv", risk_series_csv(out.series, writer.csv_header()));

  std::ostringstream star;
  for (const std::string& line : writer.csv_header()) star << "# " << line << '\n';
  star << "time,sr,sr_star_search,sr_star,nodes_evaluated,targets_extrapolated,beam_truncated\n";
  for (std::size_t i = 0; i < out.series.times.size(); ++i) {
    const PathResult& r = out.searches[i];
    star << format_number(out.series.times[i]) << ',' << format_number(out.series.scenario_risk[i]) << ','
         << format_number(r.sr_star) << ',' << format_number(out.series.sr_star[i]) << ',' << r.nodes_evaluated << ','
         << (r.targets_extrapolated ? 1 : 0) << ',' << (r.beam_truncated ? 1 : 0) << '\n';
  }
  writer.text("sr_star.csv", star.str());
  writer.manifest();
  print_warnings(out.warnings);
  return out;
}

namespace {

bool subset(const std::vector<double>& a, const std::vector<double>& b) {
  return std::all_of(a.begin(), a.end(), [&](double x) {
    return std::any_of(b.begin(), b.end(), [x](double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x)); });
  });
}

} // namespace

std::vector<NestedViolation> nested_grid_violations(std::span<const SweepRow> rows, const RunConfig& config,
                                                    double own_speed) {
  const KinodynamicParams bounds = config.kinodynamics.resolve_for(own_speed);
  auto grids = [&](const SweepRow& r) {
    Hyperparameters h = config.search;
    h.n_alpha = r.n_alpha;
    h.n_v = r.n_v;
    return std::pair{alpha_grid(h), speed_grid(h, bounds)};
  };
  std::vector<NestedViolation> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (i == j || rows[i].n_t != rows[j].n_t) continue;
      if (rows[i].n_alpha == rows[j].n_alpha && rows[i].n_v == rows[j].n_v) continue;
      const auto [ai, vi] = grids(rows[i]);
      const auto [aj, vj] = grids(rows[j]);
      if (!subset(ai, aj) || !subset(vi, vj)) continue;
      if (rows[j].sr_star > rows[i].sr_star + config.search.tie_eps) out.push_back({i, j});
    }
  }
  return out;
}

PathResult cmd_safest_path(const RunConfig& config) {
  if (config.ownship.empty()) throw ConfigError("ownship id is required");
  InputSet inputs;
  const Scenario scenario = load_run_scenario(config, inputs);
  const VesselTrack& own = scenario.at(config.ownship);
  const double t = config.time.value_or(own.start_time());
  if (!own.covers(t)) throw OutOfRangeError("planning time outside the ownship track");

  const PlanningScene scene = make_planning_scene(scenario, config.ownship, t, config.domain, config.risk);
  const PathResult result = branch_and_bound(scene, config.search, config.kinodynamics, config.domain, config.risk);
  if (result.paths.empty()) throw InvariantError("search returned no path");

  std::vector<std::string> warnings;
  // Replay check: emitted decisions must regenerate the emitted states.
  double replay_error = 0.0;
  for (const Path& p : result.paths) {
    const std::vector<VesselState> states = replay(p, config.search, config.kinodynamics);
    for (std::size_t i = 0; i < states.size(); ++i)
      replay_error = std::max(replay_error, (states[i].position - p.nodes[i].state.position).norm());
  }
  if (replay_error > 1e-6) throw InvariantError("replayed decisions drift from the emitted path");

  Json body = {{"time", t}, {"ownship", config.ownship}, {"result", path_result_to_json(result)},
               {"replay_max_error", replay_error}};
  if (result.targets_extrapolated) warnings.push_back("planning horizon extends past a target track");
  if (result.beam_truncated) warnings.push_back("survivor beam truncated");

  if (config.compare_exhaustive) {
    const PathResult exact = exhaustive_search(scene, config.search, config.kinodynamics, config.domain, config.risk);
    const bool divergent = std::abs(exact.sr_star - result.sr_star) > config.search.tie_eps;
    body["exhaustive"] = {{"sr_star", exact.sr_star}, {"nodes_evaluated", exact.nodes_evaluated}, {"divergent", divergent}};
    if (divergent)
      warnings.push_back("pruned search sr_star " + format_number(result.sr_star) + " differs from exhaustive " +
                         format_number(exact.sr_star));
  }

  RunWriter writer(config, "safest-path", inputs);
  const bool sweeping = !config.sweep.n_t.empty() || !config.sweep.n_alpha.empty() || !config.sweep.n_v.empty();
  if (sweeping) {
    auto or_default = [](const std::vector<int>& v, int d) { return v.empty() ? std::vector<int>{d} : v; };
    std::vector<SweepRow> rows;
    for (int n_t : or_default(config.sweep.n_t, config.search.n_t))
      for (int n_alpha : or_default(config.sweep.n_alpha, config.search.n_alpha))
        for (int n_v : or_default(config.sweep.n_v, config.search.n_v)) {
          Hyperparameters h = config.search;
          h.n_t = n_t;
          h.n_alpha = n_alpha;
          h.n_v = n_v;
          const PathResult r = branch_and_bound(scene, h, config.kinodynamics, config.domain, config.risk);
          SweepRow row{n_t, n_alpha, n_v, r.sr_star, r.nodes_evaluated, std::nullopt, false};
          if (config.sweep.exhaustive && std::pow(static_cast<double>(n_alpha * n_v), n_t) <= 1e4) {
            row.exhaustive_sr_star = exhaustive_search(scene, h, config.kinodynamics, config.domain, config.risk).sr_star;
            row.divergent = std::abs(*row.exhaustive_sr_star - r.sr_star) > h.tie_eps;
            if (row.divergent)
              warnings.push_back("sweep n_t=" + std::to_string(n_t) + " n_alpha=" + std::to_string(n_alpha) +
                                 " n_v=" + std::to_string(n_v) + ": pruned search diverges from exhaustive");
          }
          rows.push_back(row);
        }
    const auto violations = nested_grid_violations(rows, config, scene.ownship.speed);
    for (const NestedViolation& v : violations)
      warnings.push_back("nested grids: finer (" + std::to_string(rows[v.fine].n_alpha) + "x" +
                         std::to_string(rows[v.fine].n_v) + ") worse than coarser (" +
                         std::to_string(rows[v.coarse].n_alpha) + "x" + std::to_string(rows[v.coarse].n_v) + ")");

    std::ostringstream csv;
    for (const std::string& line : writer.csv_header()) csv << "# " << line << '\n';
    csv << "n_t,n_alpha,n_v,sr_star,nodes_evaluated,exhaustive_sr_star,divergent\n";
    for (const SweepRow& r : rows)
      csv << r.n_t << ',' << r.n_alpha << ',' << r.n_v << ',' << format_number(r.sr_star) << ',' << r.nodes_evaluated
          << ',' << (r.exhaustive_sr_star ? format_number(*r.exhaustive_sr_star) : "") << ','
          << (r.divergent ? 1 : 0) << '\n';
    writer.text("sr_star_sweep.csv", csv.str());
    body["sweep_nested_violations"] = violations.size();
  }

  body["warnings"] = warnings;
  writer.json("safest_path.json", body);
  writer.text("safest_path.csv", path_result_csv(result, writer.csv_header()));
  writer.manifest();
  print_warnings(warnings);
  return result;
}

} // namespace seamanship
