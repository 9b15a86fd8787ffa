#include "seamanship/ingest.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <sstream>

namespace seamanship {

// ---- Scenario ---------------------------------------------------------------

const VesselTrack* Scenario::find(const std::string& id) const {
  auto it = std::lower_bound(tracks.begin(), tracks.end(), id,
                             [](const VesselTrack& t, const std::string& key) { return t.id() < key; });
  if (it != tracks.end() && it->id() == id) return &*it;
  for (const VesselTrack& t : tracks)
    if (t.id() == id) return &t;
  return nullptr;
}

const VesselTrack& Scenario::at(const std::string& id) const {
  const VesselTrack* track = find(id);
  if (!track) throw InputError("unknown vessel id '" + id + "'");
  return *track;
}

double Scenario::start_time() const {
  if (tracks.empty()) throw InputError("scenario has no tracks");
  double t = tracks.front().start_time();
  for (const VesselTrack& track : tracks) t = std::min(t, track.start_time());
  return t;
}

double Scenario::end_time() const {
  if (tracks.empty()) throw InputError("scenario has no tracks");
  double t = tracks.front().end_time();
  for (const VesselTrack& track : tracks) t = std::max(t, track.end_time());
  return t;
}

// ---- parameters -------------------------------------------------------------

std::map<VesselType, double> default_type_lengths() {
  return {{VesselType::Tanker, 180.0}, {VesselType::Cargo, 150.0},    {VesselType::Pilot, 20.0},
          {VesselType::Passenger, 120.0}, {VesselType::Fishing, 25.0}, {VesselType::Other, 50.0}};
}

void IngestParams::validate() const {
  if (!(dt > 0.0)) throw ConfigError("ingest.dt must be positive");
  if (!(max_gap >= dt)) throw ConfigError("ingest.max_gap must be at least dt");
  if (!std::isfinite(draught_threshold)) throw ConfigError("ingest.draught_threshold must be finite");
  for (VesselType type : kAllVesselTypes) {
    auto it = default_lengths.find(type);
    if (it == default_lengths.end() || !(it->second > 0.0))
      throw ConfigError("ingest default length missing or non-positive for " + std::string(to_string(type)));
  }
}

// ---- timestamps -------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

bool read_int(std::string_view& s, std::size_t digits, int& out) {
  if (s.size() < digits) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + digits, out);
  if (ec != std::errc() || ptr != s.data() + digits) return false;
  s.remove_prefix(digits);
  return true;
}

bool expect(std::string_view& s, char c) {
  if (s.empty() || s.front() != c) return false;
  s.remove_prefix(1);
  return true;
}

std::optional<double> parse_number(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

} // namespace

double parse_timestamp(std::string_view text) {
  std::string_view s = trim(text);
  const std::string original(s);
  auto fail = [&]() -> double { throw InputError("unrecognised timestamp '" + original + "'"); };

  int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  if (s.size() >= 10 && s[2] == '/' && s[5] == '/') {
    if (!read_int(s, 2, day) || !expect(s, '/') || !read_int(s, 2, month) || !expect(s, '/') || !read_int(s, 4, year))
      return fail();
  } else {
    if (!read_int(s, 4, year) || !expect(s, '-') || !read_int(s, 2, month) || !expect(s, '-') || !read_int(s, 2, day))
      return fail();
  }
  if (!s.empty()) {
    if (s.front() != 'T' && s.front() != ' ') return fail();
    s.remove_prefix(1);
    if (!read_int(s, 2, hour) || !expect(s, ':') || !read_int(s, 2, minute)) return fail();
    if (!s.empty() && s.front() == ':' && (s.remove_prefix(1), !read_int(s, 2, second))) return fail();
  }
  double fraction = 0.0;
  if (!s.empty() && (s.front() == '.' || s.front() == ',')) {
    s.remove_prefix(1);
    double scale = 0.1;
    if (s.empty() || !std::isdigit(static_cast<unsigned char>(s.front()))) return fail();
    while (!s.empty() && std::isdigit(static_cast<unsigned char>(s.front()))) {
      fraction += scale * (s.front() - '0');
      scale *= 0.1;
      s.remove_prefix(1);
    }
  }
  int offset_seconds = 0;
  if (!s.empty()) {
    if (s == "Z" || s == "z") {
      s.remove_prefix(1);
    } else if (s.front() == '+' || s.front() == '-') {
      const int sign = s.front() == '+' ? 1 : -1;
      s.remove_prefix(1);
      int oh = 0, om = 0;
      if (!read_int(s, 2, oh)) return fail();
      if (!s.empty() && s.front() == ':') s.remove_prefix(1);
      if (!s.empty() && !read_int(s, 2, om)) return fail();
      offset_seconds = sign * (oh * 3600 + om * 60);
    }
  }
  if (!s.empty()) return fail();
  if (hour > 23 || minute > 59 || second > 60) return fail();

  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                           std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok()) return fail();
  const auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<double>(days) * 86400.0 + hour * 3600.0 + minute * 60.0 + second + fraction - offset_seconds;
}

// ---- AIS CSV ----------------------------------------------------------------

namespace {

std::vector<std::string> split_csv(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delim) {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string normalize_header(std::string_view h) {
  h = trim(h);
  if (h.size() >= 3 && static_cast<unsigned char>(h[0]) == 0xEF && static_cast<unsigned char>(h[1]) == 0xBB &&
      static_cast<unsigned char>(h[2]) == 0xBF)
    h.remove_prefix(3);
  while (!h.empty() && (h.front() == '#' || std::isspace(static_cast<unsigned char>(h.front())))) h.remove_prefix(1);
  std::string out;
  for (char c : h) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Numeric AIS ship-type codes as well as text labels.
VesselType vessel_type_from_field(std::string_view text) {
  text = trim(text);
  if (auto code = parse_number(text)) {
    const int c = static_cast<int>(*code);
    if (c == 30) return VesselType::Fishing;
    if (c == 50) return VesselType::Pilot;
    if (c >= 60 && c <= 69) return VesselType::Passenger;
    if (c >= 70 && c <= 79) return VesselType::Cargo;
    if (c >= 80 && c <= 89) return VesselType::Tanker;
    return VesselType::Other;
  }
  return parse_vessel_type(text);
}

struct Row {
  std::string mmsi;
  RawFix fix;
  VesselType type = VesselType::Other;
  std::optional<double> length;
};

} // namespace

AisData parse_ais(std::istream& in, const AisSchema& schema, const IngestParams& params) {
  params.validate();
  AisData data;
  std::string line;
  if (!std::getline(in, line)) throw InputError("AIS file is empty");
  const std::vector<std::string> header = split_csv(line, schema.delimiter);

  auto column = [&](const std::string& name, bool required) -> int {
    const std::string want = normalize_header(name);
    for (std::size_t i = 0; i < header.size(); ++i)
      if (normalize_header(header[i]) == want) return static_cast<int>(i);
    if (required) throw InputError("AIS header lacks column '" + name + "'");
    return -1;
  };
  const int c_time = column(schema.timestamp, true);
  const int c_mmsi = column(schema.mmsi, true);
  const int c_lat = column(schema.latitude, true);
  const int c_lon = column(schema.longitude, true);
  const int c_sog = column(schema.sog, true);
  const int c_cog = column(schema.cog, true);
  const int c_head = column(schema.heading, false);
  const int c_type = column(schema.ship_type, false);
  const int c_len = column(schema.length, false);

  std::map<std::string, std::vector<Row>> by_mmsi;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++data.rows_read;
    const std::vector<std::string> f = split_csv(line, schema.delimiter);
    auto field = [&](int c) -> std::string_view {
      return c >= 0 && static_cast<std::size_t>(c) < f.size() ? trim(f[static_cast<std::size_t>(c)]) : std::string_view{};
    };
    auto skip = [&](const std::string& why) {
      ++data.rows_skipped;
      if (data.rows_skipped <= 20) data.warnings.push_back("line " + std::to_string(line_no) + ": " + why);
    };

    Row row;
    row.mmsi = std::string(field(c_mmsi));
    if (row.mmsi.empty()) {
      skip("missing MMSI");
      continue;
    }
    try {
      row.fix.unix_time = parse_timestamp(field(c_time));
    } catch (const InputError& e) {
      skip(e.what());
      continue;
    }
    const auto lat = parse_number(field(c_lat));
    const auto lon = parse_number(field(c_lon));
    if (!lat || !lon || std::abs(*lat) > 90.0 || std::abs(*lon) > 180.0) {
      skip("invalid position");
      continue;
    }
    const auto sog = parse_number(field(c_sog));
    if (!sog || *sog < 0.0 || *sog >= 102.2) {
      skip("invalid speed over ground");
      continue;
    }
    std::optional<double> heading = parse_number(field(c_head));
    if (heading && !(*heading >= 0.0 && *heading < 360.0)) heading.reset(); // 511 = not available
    if (!heading) {
      const auto cog = parse_number(field(c_cog));
      if (cog && *cog >= 0.0 && *cog < 360.0) heading = cog;
    }
    if (!heading) {
      skip("neither heading nor course available");
      continue;
    }
    row.fix.lat = *lat;
    row.fix.lon = *lon;
    row.fix.speed = *sog * kKnot;
    row.fix.heading = wrap_heading(*heading * std::numbers::pi / 180.0);
    row.type = c_type >= 0 ? vessel_type_from_field(field(c_type)) : VesselType::Other;
    if (auto len = parse_number(field(c_len)); len && *len > 0.0) row.length = len;
    by_mmsi[row.mmsi].push_back(std::move(row));
  }

  for (auto& [mmsi, rows] : by_mmsi) {
    // Stable sort keeps file order among equal timestamps so the first wins.
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.fix.unix_time < b.fix.unix_time; });
    RawTrack track;
    track.mmsi = mmsi;
    for (const Row& r : rows) {
      if (track.vessel_type == VesselType::Other && r.type != VesselType::Other) track.vessel_type = r.type;
      if (track.length <= 0.0 && r.length) track.length = *r.length;
      if (!track.fixes.empty() && track.fixes.back().unix_time == r.fix.unix_time) {
        ++data.duplicates;
        continue;
      }
      track.fixes.push_back(r.fix);
    }
    if (track.length <= 0.0) {
      track.length = params.default_lengths.at(track.vessel_type);
      track.length_defaulted = true;
      data.warnings.push_back("vessel " + mmsi + ": length missing, using the " +
                              std::string(to_string(track.vessel_type)) + " default");
    }
    data.tracks.push_back(std::move(track));
  }
  if (data.tracks.empty()) throw InputError("AIS input has no valid rows");
  return data;
}

AisData parse_ais(const std::filesystem::path& path, const AisSchema& schema, const IngestParams& params) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open AIS file " + path.string());
  return parse_ais(in, schema, params);
}

// ---- resampling -------------------------------------------------------------

std::vector<VesselTrack> resample(const std::string& id, VesselType type, double length,
                                  std::span<const TimedFix> fixes, double dt, double max_gap,
                                  std::vector<std::string>* warnings) {
  if (!(dt > 0.0)) throw ConfigError("resample needs dt > 0");
  for (std::size_t i = 1; i < fixes.size(); ++i)
    if (!(fixes[i].time > fixes[i - 1].time)) throw InputError("fixes of " + id + " are not strictly increasing in time");
  auto warn = [&](const std::string& w) {
    if (warnings) warnings->push_back(w);
  };

  std::vector<VesselTrack> out;
  std::size_t begin = 0;
  int segment = 0;
  while (begin < fixes.size()) {
    std::size_t end = begin + 1;
    while (end < fixes.size() && fixes[end].time - fixes[end - 1].time <= max_gap) ++end;
    const std::span<const TimedFix> seg = fixes.subspan(begin, end - begin);
    begin = end;

    const auto k0 = static_cast<long long>(std::ceil(seg.front().time / dt - 1e-9));
    const auto k1 = static_cast<long long>(std::floor(seg.back().time / dt + 1e-9));
    if (seg.size() < 2 || k1 <= k0) {
      warn("vessel " + id + ": dropped a segment too short to resample");
      continue;
    }

    std::vector<VesselState> states;
    states.reserve(static_cast<std::size_t>(k1 - k0 + 1));
    std::size_t i = 0;
    for (long long k = k0; k <= k1; ++k) {
      const double t = static_cast<double>(k) * dt;
      while (i + 2 < seg.size() && seg[i + 1].time <= t) ++i;
      const TimedFix& a = seg[i];
      const TimedFix& b = seg[i + 1];
      const double w = std::clamp((t - a.time) / (b.time - a.time), 0.0, 1.0);
      VesselState s;
      s.time = t;
      s.position = a.position + w * (b.position - a.position);
      s.speed = a.speed + w * (b.speed - a.speed);
      s.heading = wrap_heading(a.heading + w * heading_difference(a.heading, b.heading));
      s.length = length;
      s.vessel_type = type;
      states.push_back(s);
    }
    const std::string seg_id = segment == 0 ? id : id + "-" + std::to_string(segment);
    if (segment > 0) warn("vessel " + id + ": gap above max_gap, continued as " + seg_id);
    out.emplace_back(seg_id, std::move(states), dt);
    ++segment;
  }
  return out;
}

// ---- chart ------------------------------------------------------------------

namespace {

struct ChartReader {
  const GeoPoint& origin;
  const IngestParams& params;
  ChartData& out;

  void ring(const nlohmann::json& coords) {
    Ring r;
    for (const auto& c : coords) {
      if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number())
        throw InputError("chart coordinate must be [lon, lat]");
      const LocalPoint p = project({c[1].get<double>(), c[0].get<double>()}, origin);
      if (!r.empty() && (r.back() - p).norm() < 1e-9) continue;
      r.push_back(p);
    }
    if (r.size() >= 2 && (r.front() - r.back()).norm() < 1e-9) r.pop_back();
    if (r.size() < 3) {
      out.warnings.push_back("skipped a ring with fewer than 3 distinct vertices");
      return;
    }
    const bool closed = (coords.front() == coords.back());
    if (!closed) out.warnings.push_back("closed an open ring");
    r.push_back(r.front());
    out.rings.push_back(std::move(r));
  }

  void polygon(const nlohmann::json& coords) {
    if (!coords.is_array()) throw InputError("polygon coordinates must be an array");
    for (const auto& r : coords) ring(r);
  }

  void geometry(const nlohmann::json& g, const nlohmann::json* properties) {
    if (g.is_null()) return;
    if (properties && properties->is_object() && properties->contains(params.depth_property)) {
      const auto& d = (*properties)[params.depth_property];
      if (d.is_number() && d.get<double>() >= params.draught_threshold) {
        ++out.excluded;
        return;
      }
    }
    const std::string type = g.value("type", "");
    if (type == "Polygon") {
      polygon(g.at("coordinates"));
    } else if (type == "MultiPolygon") {
      for (const auto& p : g.at("coordinates")) polygon(p);
    } else if (type == "GeometryCollection") {
      for (const auto& sub : g.at("geometries")) geometry(sub, properties);
    } else {
      out.warnings.push_back("ignored unsupported geometry '" + type + "'");
    }
  }

  void node(const nlohmann::json& j) {
    const std::string type = j.value("type", "");
    if (type == "FeatureCollection") {
      for (const auto& f : j.at("features")) node(f);
    } else if (type == "Feature") {
      const nlohmann::json* props = j.contains("properties") ? &j["properties"] : nullptr;
      if (j.contains("geometry")) geometry(j["geometry"], props);
    } else {
      geometry(j, nullptr);
    }
  }
};

} // namespace

ChartData load_chart(std::istream& in, const GeoPoint& origin, const IngestParams& params) {
  ChartData out;
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (trim(text).empty()) return out;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("chart is not valid JSON: ") + e.what());
  }
  try {
    ChartReader{origin, params, out}.node(j);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed GeoJSON: ") + e.what());
  }
  return out;
}

ChartData load_chart(const std::filesystem::path& path, const GeoPoint& origin, const IngestParams& params) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open chart file " + path.string());
  return load_chart(in, origin, params);
}

// ---- scenario assembly ------------------------------------------------------

GeoPoint centroid(const AisData& data) {
  double lat = 0.0, lon = 0.0;
  std::size_t n = 0;
  for (const RawTrack& t : data.tracks)
    for (const RawFix& f : t.fixes) {
      lat += f.lat;
      lon += f.lon;
      ++n;
    }
  if (n == 0) throw InputError("no fixes to take a centroid of");
  return {lat / static_cast<double>(n), lon / static_cast<double>(n)};
}

Scenario build_scenario(const AisData& data, const std::vector<Ring>& obstacle_rings, const GeoPoint& origin,
                        const IngestParams& params, double obstacle_spacing) {
  params.validate();
  Scenario scenario;
  scenario.origin = origin;
  scenario.dt = params.dt;
  scenario.warnings = data.warnings;

  double epoch = std::numeric_limits<double>::infinity();
  for (const RawTrack& t : data.tracks)
    for (const RawFix& f : t.fixes) epoch = std::min(epoch, f.unix_time);
  if (!std::isfinite(epoch)) throw InputError("AIS input has no valid rows");
  // Whole seconds keep the grid readable in output files.
  scenario.epoch_unix = std::floor(epoch);

  for (const RawTrack& t : data.tracks) {
    std::vector<TimedFix> fixes;
    fixes.reserve(t.fixes.size());
    for (const RawFix& f : t.fixes)
      fixes.push_back({f.unix_time - scenario.epoch_unix, project({f.lat, f.lon}, origin), f.speed, f.heading});
    for (VesselTrack& track :
         resample(t.mmsi, t.vessel_type, t.length, fixes, params.dt, params.max_gap, &scenario.warnings))
      scenario.tracks.push_back(std::move(track));
  }
  if (scenario.tracks.empty()) throw InputError("no vessel has enough fixes to resample");
  std::sort(scenario.tracks.begin(), scenario.tracks.end(),
            [](const VesselTrack& a, const VesselTrack& b) { return a.id() < b.id(); });
  scenario.obstacles = ObstacleSet(obstacle_rings, obstacle_spacing);
  return scenario;
}

Scenario ingest_files(const std::filesystem::path& ais, const std::optional<std::filesystem::path>& chart,
                      const AisSchema& schema, const IngestParams& params, double obstacle_spacing) {
  const AisData data = parse_ais(ais, schema, params);
  const GeoPoint origin = params.origin ? *params.origin : centroid(data);
  ChartData chart_data;
  if (chart) chart_data = load_chart(*chart, origin, params);
  Scenario scenario = build_scenario(data, chart_data.rings, origin, params, obstacle_spacing);
  for (std::string& w : chart_data.warnings) scenario.warnings.push_back("chart: " + w);
  return scenario;
}

} // namespace seamanship
