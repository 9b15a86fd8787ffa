#include "seamanship/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace seamanship {

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
    throw InvariantError("SHA-256 computation failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_text(path)); }

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw InvariantError("number formatting failed");
  return std::string(buf.data(), ptr);
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw InputError("write failed for " + path.string());
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json read_json(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw InputError(path.string() + ": invalid JSON: " + e.what());
  }
}

// ---- parameter blocks -------------------------------------------------------

namespace {

class BlockReader {
public:
  BlockReader(const Json& j, std::string block) : j_(j), block_(std::move(block)) {
    if (!j_.is_object()) throw ConfigError(block_ + " must be an object");
  }
  ~BlockReader() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : j_.items())
      if (!known_.count(key)) throw ConfigError("unknown key " + block_ + "." + key);
  }

  void number(const char* key, double& out) {
    if (const Json* v = get(key)) {
      if (!v->is_number()) throw ConfigError(block_ + "." + key + " must be a number");
      out = v->get<double>();
    }
  }
  template <class Int>
  void integer(const char* key, Int& out) {
    if (const Json* v = get(key)) {
      if (!v->is_number_integer()) throw ConfigError(block_ + "." + key + " must be an integer");
      const long long x = v->get<long long>();
      if (x < 0) throw ConfigError(block_ + "." + key + " must be non-negative");
      out = static_cast<Int>(x);
    }
  }
  void boolean(const char* key, bool& out) {
    if (const Json* v = get(key)) {
      if (!v->is_boolean()) throw ConfigError(block_ + "." + key + " must be true or false");
      out = v->get<bool>();
    }
  }
  void string(const char* key, std::string& out) {
    if (const Json* v = get(key)) {
      if (!v->is_string()) throw ConfigError(block_ + "." + key + " must be a string");
      out = v->get<std::string>();
    }
  }
  const Json* get(const char* key) {
    known_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }
  const std::string& block() const { return block_; }

private:
  const Json& j_;
  std::string block_;
  std::set<std::string> known_;
};

} // namespace

Json to_json(const DomainParams& p) {
  return {{"c_a0", p.c_a0}, {"c_a1", p.c_a1}, {"c_b0", p.c_b0}, {"c_off", p.c_off}, {"c_off_stb", p.c_off_stb}};
}

void apply_json(const Json& j, DomainParams& p) {
  BlockReader r(j, "domain");
  r.number("c_a0", p.c_a0);
  r.number("c_a1", p.c_a1);
  r.number("c_b0", p.c_b0);
  r.number("c_off", p.c_off);
  r.number("c_off_stb", p.c_off_stb);
}

Json to_json(const RiskParams& p) {
  return {{"kappa", p.kappa},
          {"f50", p.f50},
          {"horizon_T", p.horizon_T},
          {"horizon_step", p.horizon_step},
          {"arena_radius", p.arena_radius},
          {"risk_clamp_eps", p.risk_clamp_eps},
          {"union_mode", p.union_mode == UnionMode::Max ? "max" : "probabilistic_or"},
          {"grounding_horizon", p.grounding_horizon},
          {"obstacle_spacing", p.obstacle_spacing},
          {"channel_adjust", p.channel_adjust},
          {"channel_gamma", p.channel_gamma},
          {"channel_min_fraction", p.channel_min_fraction},
          {"channel_corridor", p.channel_corridor}};
}

void apply_json(const Json& j, RiskParams& p) {
  BlockReader r(j, "risk");
  r.number("kappa", p.kappa);
  r.number("f50", p.f50);
  r.number("horizon_T", p.horizon_T);
  r.number("horizon_step", p.horizon_step);
  r.number("arena_radius", p.arena_radius);
  r.number("risk_clamp_eps", p.risk_clamp_eps);
  std::string mode;
  r.string("union_mode", mode);
  if (mode == "max") p.union_mode = UnionMode::Max;
  else if (mode == "probabilistic_or") p.union_mode = UnionMode::ProbabilisticOr;
  else if (!mode.empty()) throw ConfigError("risk.union_mode must be 'max' or 'probabilistic_or'");
  r.boolean("grounding_horizon", p.grounding_horizon);
  r.number("obstacle_spacing", p.obstacle_spacing);
  r.boolean("channel_adjust", p.channel_adjust);
  r.number("channel_gamma", p.channel_gamma);
  r.number("channel_min_fraction", p.channel_min_fraction);
  r.number("channel_corridor", p.channel_corridor);
}

Json to_json(const KinodynamicParams& p) {
  return {{"swing_rate_coeff", p.swing_rate_coeff}, {"v_min", p.v_min},
          {"v_max", p.v_max},                       {"speed_relative", p.speed_relative},
          {"speed_factor_lo", p.speed_factor_lo},   {"speed_factor_hi", p.speed_factor_hi}};
}

void apply_json(const Json& j, KinodynamicParams& p) {
  BlockReader r(j, "kinodynamics");
  r.number("swing_rate_coeff", p.swing_rate_coeff);
  r.number("v_min", p.v_min);
  r.number("v_max", p.v_max);
  r.boolean("speed_relative", p.speed_relative);
  r.number("speed_factor_lo", p.speed_factor_lo);
  r.number("speed_factor_hi", p.speed_factor_hi);
}

Json to_json(const Hyperparameters& p) {
  return {{"n_t", p.n_t},
          {"n_alpha", p.n_alpha},
          {"n_v", p.n_v},
          {"horizon_T", p.horizon_T},
          {"tie_eps", p.tie_eps},
          {"beam_width", p.beam_width},
          {"spacing", p.spacing == GridSpacing::HalfOpen ? "half_open" : "inclusive"},
          {"land_check", p.land_check}};
}

void apply_json(const Json& j, Hyperparameters& p) {
  BlockReader r(j, "search");
  r.integer("n_t", p.n_t);
  r.integer("n_alpha", p.n_alpha);
  r.integer("n_v", p.n_v);
  r.number("horizon_T", p.horizon_T);
  r.number("tie_eps", p.tie_eps);
  r.integer("beam_width", p.beam_width);
  r.boolean("land_check", p.land_check);
  std::string spacing;
  r.string("spacing", spacing);
  if (spacing == "half_open") p.spacing = GridSpacing::HalfOpen;
  else if (spacing == "inclusive") p.spacing = GridSpacing::Inclusive;
  else if (!spacing.empty()) throw ConfigError("search.spacing must be 'half_open' or 'inclusive'");
}

Json to_json(const ScoreParams& p) {
  return {{"beta", p.beta},
          {"kappa", p.kappa},
          {"f50", p.f50},
          {"sr_star_eps", p.sr_star_eps},
          {"risk_clamp_eps", p.risk_clamp_eps},
          {"sr_max_eps", p.sr_max_eps},
          {"order_tolerance", p.order_tolerance}};
}

void apply_json(const Json& j, ScoreParams& p) {
  BlockReader r(j, "score");
  r.number("beta", p.beta);
  r.number("kappa", p.kappa);
  r.number("f50", p.f50);
  r.number("sr_star_eps", p.sr_star_eps);
  r.number("risk_clamp_eps", p.risk_clamp_eps);
  r.number("sr_max_eps", p.sr_max_eps);
  r.number("order_tolerance", p.order_tolerance);
}

Json to_json(const SpeedModelParams& p) {
  return {{"dcpa_threshold", p.dcpa_threshold},
          {"window", p.window},
          {"min_samples", p.min_samples},
          {"default_support_lo", p.default_support_lo},
          {"default_support_hi", p.default_support_hi},
          {"min_bandwidth", p.min_bandwidth},
          {"grid_n", p.grid_n}};
}

void apply_json(const Json& j, SpeedModelParams& p) {
  BlockReader r(j, "speed_model");
  r.number("dcpa_threshold", p.dcpa_threshold);
  r.number("window", p.window);
  r.integer("min_samples", p.min_samples);
  r.number("default_support_lo", p.default_support_lo);
  r.number("default_support_hi", p.default_support_hi);
  r.number("min_bandwidth", p.min_bandwidth);
  r.integer("grid_n", p.grid_n);
}

Json to_json(const IngestParams& p) {
  Json lengths = Json::object();
  for (const auto& [type, len] : p.default_lengths) lengths[std::string(to_string(type))] = len;
  Json origin = p.origin ? Json{{"lat", p.origin->lat}, {"lon", p.origin->lon}} : Json(nullptr);
  return {{"dt", p.dt},
          {"max_gap", p.max_gap},
          {"draught_threshold", p.draught_threshold},
          {"depth_property", p.depth_property},
          {"default_lengths", lengths},
          {"origin", origin}};
}

void apply_json(const Json& j, IngestParams& p) {
  BlockReader r(j, "ingest");
  r.number("dt", p.dt);
  r.number("max_gap", p.max_gap);
  r.number("draught_threshold", p.draught_threshold);
  r.string("depth_property", p.depth_property);
  if (const Json* lengths = r.get("default_lengths")) {
    if (!lengths->is_object()) throw ConfigError("ingest.default_lengths must be an object");
    for (const auto& [key, value] : lengths->items()) {
      const VesselType type = parse_vessel_type(key);
      if (to_string(type) != key && type == VesselType::Other && key != "Other")
        throw ConfigError("ingest.default_lengths: unknown vessel type '" + key + "'");
      if (!value.is_number()) throw ConfigError("ingest.default_lengths values must be numbers");
      p.default_lengths[type] = value.get<double>();
    }
  }
  if (const Json* origin = r.get("origin")) {
    if (origin->is_null()) {
      p.origin.reset();
    } else {
      GeoPoint g;
      BlockReader o(*origin, "ingest.origin");
      o.number("lat", g.lat);
      o.number("lon", g.lon);
      p.origin = g;
    }
  }
}

Json to_json(const AisSchema& p) {
  return {{"timestamp", p.timestamp}, {"mmsi", p.mmsi},           {"latitude", p.latitude},
          {"longitude", p.longitude}, {"sog", p.sog},             {"cog", p.cog},
          {"heading", p.heading},     {"ship_type", p.ship_type}, {"length", p.length},
          {"delimiter", std::string(1, p.delimiter)}};
}

void apply_json(const Json& j, AisSchema& p) {
  BlockReader r(j, "schema");
  r.string("timestamp", p.timestamp);
  r.string("mmsi", p.mmsi);
  r.string("latitude", p.latitude);
  r.string("longitude", p.longitude);
  r.string("sog", p.sog);
  r.string("cog", p.cog);
  r.string("heading", p.heading);
  r.string("ship_type", p.ship_type);
  r.string("length", p.length);
  std::string delim;
  r.string("delimiter", delim);
  if (!delim.empty()) {
    if (delim.size() != 1) throw ConfigError("schema.delimiter must be a single character");
    p.delimiter = delim[0];
  }
}

// ---- scenario ---------------------------------------------------------------

Json scenario_to_json(const Scenario& scenario) {
  Json tracks = Json::array();
  for (const VesselTrack& track : scenario.tracks) {
    std::vector<double> time, north, east, speed, heading;
    for (const VesselState& s : track.states()) {
      time.push_back(s.time);
      north.push_back(s.north());
      east.push_back(s.east());
      speed.push_back(s.speed);
      heading.push_back(s.heading);
    }
    tracks.push_back({{"id", track.id()},
                      {"vessel_type", std::string(to_string(track.vessel_type()))},
                      {"length", track.length()},
                      {"dt", track.dt()},
                      {"time", time},
                      {"north", north},
                      {"east", east},
                      {"speed", speed},
                      {"heading", heading}});
  }
  Json polygons = Json::array();
  for (const Ring& ring : scenario.obstacles.polygons()) {
    Json r = Json::array();
    for (const LocalPoint& p : ring) r.push_back({p.x(), p.y()});
    polygons.push_back(r);
  }
  Json sources = Json::array();
  for (const SourceDigest& s : scenario.sources) sources.push_back({{"role", s.role}, {"path", s.path}, {"sha256", s.sha256}});
  return {{"schema", "seamanship.scenario"},
          {"version", kScenarioSchemaVersion},
          {"origin", {{"lat", scenario.origin.lat}, {"lon", scenario.origin.lon}}},
          {"dt", scenario.dt},
          {"epoch_unix", scenario.epoch_unix},
          {"tracks", tracks},
          {"obstacles", {{"spacing", scenario.obstacles.spacing()}, {"polygons", polygons}}},
          {"sources", sources},
          {"warnings", scenario.warnings}};
}

Scenario scenario_from_json(const Json& j) {
  try {
    if (j.value("schema", "") != "seamanship.scenario") throw InputError("not a scenario archive");
    if (j.at("version").get<int>() != kScenarioSchemaVersion)
      throw InputError("unsupported scenario archive version " + j.at("version").dump());
    Scenario s;
    s.origin = {j.at("origin").at("lat").get<double>(), j.at("origin").at("lon").get<double>()};
    s.dt = j.at("dt").get<double>();
    s.epoch_unix = j.at("epoch_unix").get<double>();
    for (const Json& t : j.at("tracks")) {
      const auto time = t.at("time").get<std::vector<double>>();
      const auto north = t.at("north").get<std::vector<double>>();
      const auto east = t.at("east").get<std::vector<double>>();
      const auto speed = t.at("speed").get<std::vector<double>>();
      const auto heading = t.at("heading").get<std::vector<double>>();
      const std::size_t n = time.size();
      if (north.size() != n || east.size() != n || speed.size() != n || heading.size() != n)
        throw InputError("track columns differ in length");
      const VesselType type = parse_vessel_type(t.at("vessel_type").get<std::string>());
      const double length = t.at("length").get<double>();
      std::vector<VesselState> states(n);
      for (std::size_t i = 0; i < n; ++i) {
        states[i].time = time[i];
        states[i].position = {north[i], east[i]};
        states[i].speed = speed[i];
        states[i].heading = heading[i];
        states[i].length = length;
        states[i].vessel_type = type;
      }
      s.tracks.emplace_back(t.at("id").get<std::string>(), std::move(states), t.at("dt").get<double>());
    }
    std::sort(s.tracks.begin(), s.tracks.end(), [](const VesselTrack& a, const VesselTrack& b) { return a.id() < b.id(); });
    std::vector<Ring> rings;
    for (const Json& r : j.at("obstacles").at("polygons")) {
      Ring ring;
      for (const Json& p : r) ring.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
      rings.push_back(std::move(ring));
    }
    s.obstacles = ObstacleSet(std::move(rings), j.at("obstacles").at("spacing").get<double>());
    for (const Json& src : j.value("sources", Json::array()))
      s.sources.push_back({src.at("role").get<std::string>(), src.at("path").get<std::string>(),
                           src.at("sha256").get<std::string>()});
    s.warnings = j.value("warnings", std::vector<std::string>{});
    return s;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed scenario archive: ") + e.what());
  } catch (const ConfigError& e) {
    throw InputError(std::string("malformed scenario archive: ") + e.what());
  }
}

void save_scenario(const std::filesystem::path& path, const Scenario& scenario) {
  write_text(path, dump_json(scenario_to_json(scenario)));
}

Scenario load_scenario(const std::filesystem::path& path) { return scenario_from_json(read_json(path)); }

// ---- speed model ------------------------------------------------------------

Json speed_model_to_json(const SpeedChangeModel& m) {
  return {{"schema", "seamanship.speed_model"},
          {"vessel_type", std::string(to_string(m.vessel_type))},
          {"sample_count", m.samples.size()},
          {"samples", m.samples},
          {"bandwidth", m.bandwidth},
          {"support", {m.support_lo, m.support_hi}},
          {"support_mass", m.support_mass},
          {"degenerate", m.degenerate},
          {"fit", {{"window", m.window}, {"dcpa_threshold", m.dcpa_threshold}}}};
}

SpeedChangeModel speed_model_from_json(const Json& j) {
  try {
    if (j.value("schema", "") != "seamanship.speed_model") throw InputError("not a speed model document");
    SpeedChangeModel m;
    m.vessel_type = parse_vessel_type(j.at("vessel_type").get<std::string>());
    m.samples = j.at("samples").get<std::vector<double>>();
    m.bandwidth = j.at("bandwidth").get<double>();
    m.support_lo = j.at("support").at(0).get<double>();
    m.support_hi = j.at("support").at(1).get<double>();
    m.support_mass = j.at("support_mass").get<double>();
    m.degenerate = j.at("degenerate").get<bool>();
    m.window = j.at("fit").at("window").get<double>();
    m.dcpa_threshold = j.at("fit").at("dcpa_threshold").get<double>();
    try {
      m.validate();
    } catch (const ConfigError& e) {
      throw InputError(std::string("invalid speed model: ") + e.what());
    }
    return m;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed speed model: ") + e.what());
  }
}

// ---- risk series ------------------------------------------------------------

Json risk_series_to_json(const RiskSeries& s) {
  Json targets = Json::array();
  for (std::size_t k = 0; k < s.target_ids.size(); ++k) {
    Json t = {{"id", s.target_ids[k]}, {"cr", s.collision_risk[k]}};
    if (!s.collision_risk_wavg.empty()) t["cr_wavg"] = s.collision_risk_wavg[k];
    if (!s.collision_risk_worst.empty()) t["cr_worst"] = s.collision_risk_worst[k];
    targets.push_back(t);
  }
  Json j = {{"vessel_id", s.vessel_id},
            {"time", s.times},
            {"targets", targets},
            {"gr", s.grounding_risk},
            {"sr", s.scenario_risk}};
  if (!s.sr_star.empty()) j["sr_star"] = s.sr_star;
  if (!s.scenario_risk_norm.empty()) j["sr_norm"] = s.scenario_risk_norm;
  return j;
}

namespace {

void write_header(std::ostringstream& out, const std::vector<std::string>& header) {
  for (const std::string& line : header) out << "# " << line << '\n';
}

} // namespace

std::string risk_series_csv(const RiskSeries& s, const std::vector<std::string>& header) {
  std::ostringstream out;
  write_header(out, header);
  out << "time";
  for (const std::string& id : s.target_ids) out << ",cr_" << id;
  if (!s.collision_risk_wavg.empty())
    for (const std::string& id : s.target_ids) out << ",cr_wavg_" << id;
  if (!s.collision_risk_worst.empty())
    for (const std::string& id : s.target_ids) out << ",cr_worst_" << id;
  out << ",gr,sr";
  if (!s.sr_star.empty()) out << ",sr_star";
  if (!s.scenario_risk_norm.empty()) out << ",sr_norm";
  out << '\n';
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    out << format_number(s.times[i]);
    for (const auto& col : s.collision_risk) out << ',' << format_number(col[i]);
    for (const auto& col : s.collision_risk_wavg) out << ',' << format_number(col[i]);
    for (const auto& col : s.collision_risk_worst) out << ',' << format_number(col[i]);
    out << ',' << format_number(s.grounding_risk[i]) << ',' << format_number(s.scenario_risk[i]);
    if (!s.sr_star.empty()) out << ',' << format_number(s.sr_star[i]);
    if (!s.scenario_risk_norm.empty()) out << ',' << format_number(s.scenario_risk_norm[i]);
    out << '\n';
  }
  return out.str();
}

// ---- paths ------------------------------------------------------------------

Json path_to_json(const Path& path) {
  Json decisions = Json::array();
  for (const Decision& d : path.decisions) decisions.push_back({{"alpha", d.alpha}, {"speed", d.speed}});
  Json states = Json::array();
  for (const SearchNode& n : path.nodes)
    states.push_back({{"time", n.state.time},
                      {"north", n.state.north()},
                      {"east", n.state.east()},
                      {"speed", n.state.speed},
                      {"heading", n.state.heading},
                      {"scenario_risk", n.scenario_risk}});
  return {{"path_risk", path.path_risk}, {"decisions", decisions}, {"states", states}};
}

Json path_result_to_json(const PathResult& r) {
  Json paths = Json::array();
  for (const Path& p : r.paths) paths.push_back(path_to_json(p));
  return {{"sr_star", r.sr_star},
          {"level_min_risk", r.level_min_risk},
          {"nodes_evaluated", r.nodes_evaluated},
          {"targets_extrapolated", r.targets_extrapolated},
          {"beam_truncated", r.beam_truncated},
          {"paths", paths}};
}

std::string path_result_csv(const PathResult& r, const std::vector<std::string>& header) {
  std::ostringstream out;
  write_header(out, header);
  out << "path,step,time,north,east,speed,heading,alpha,speed_cmd,scenario_risk\n";
  for (std::size_t p = 0; p < r.paths.size(); ++p) {
    const Path& path = r.paths[p];
    for (std::size_t i = 0; i < path.nodes.size(); ++i) {
      const SearchNode& n = path.nodes[i];
      const bool has_decision = i > 0;
      out << p << ',' << i << ',' << format_number(n.state.time) << ',' << format_number(n.state.north()) << ','
          << format_number(n.state.east()) << ',' << format_number(n.state.speed) << ','
          << format_number(n.state.heading) << ',' << (has_decision ? format_number(n.decision.alpha) : "") << ','
          << (has_decision ? format_number(n.decision.speed) : "") << ',' << format_number(n.scenario_risk) << '\n';
    }
  }
  return out.str();
}

// ---- scores -----------------------------------------------------------------

Json gss_report_to_json(const GssReport& r) {
  return {{"vessel_id", r.vessel_id},
          {"window", {r.t_start, r.t_end}},
          {"normalized", r.normalized},
          {"sr_max", r.score.sr_max},
          {"j_m", r.score.j_m},
          {"j_c", r.score.j_c},
          {"j_c_raw", r.score.j_c_raw},
          {"gss", r.score.gss},
          {"series", {{"time", r.times}, {"sr", r.sr_series}, {"sr_norm", r.sr_norm_series}}}};
}

std::string gss_csv_header() { return "vessel,t_start,t_end,sr_max,j_m,j_c,gss,params_hash\n"; }

std::string gss_csv_row(const GssReport& r, std::string_view params_hash) {
  std::ostringstream out;
  out << r.vessel_id << ',' << format_number(r.t_start) << ',' << format_number(r.t_end) << ','
      << format_number(r.score.sr_max) << ',' << format_number(r.score.j_m) << ',' << format_number(r.score.j_c)
      << ',' << format_number(r.score.gss) << ',' << params_hash << '\n';
  return out.str();
}

} // namespace seamanship
