#include "doctest.h"

#include "seamanship/ingest.hpp"
#include "seamanship/io.hpp"

#include <sstream>

using namespace seamanship;

namespace {

constexpr const char* kHeader =
    "# Timestamp,Type of mobile,MMSI,Latitude,Longitude,Navigational status,ROT,SOG,COG,Heading,IMO,Callsign,Name,"
    "Ship type,Width,Length\n";

std::string row(const std::string& time, const std::string& mmsi, double lat, double lon, double sog, double cog,
                const std::string& heading, const std::string& type, const std::string& length) {
  std::ostringstream s;
  s << time << ",Class A," << mmsi << ',' << lat << ',' << lon << ",Under way,0," << sog << ',' << cog << ','
    << heading << ",,,," << type << ",," << length << '\n';
  return s.str();
}

AisData parse(const std::string& text, const IngestParams& params = {}) {
  std::istringstream in(text);
  return parse_ais(in, AisSchema{}, params);
}

ChartData chart(const std::string& text, const IngestParams& params = {}) {
  std::istringstream in(text);
  return load_chart(in, GeoPoint{55.0, 12.0}, params);
}

constexpr double kDeg = std::numbers::pi / 180.0;

} // namespace

TEST_CASE("timestamps") {
  CHECK(parse_timestamp("1970-01-01T00:00:00Z") == 0.0);
  CHECK(parse_timestamp("2021-06-01T12:00:00Z") == 1622548800.0);
  CHECK(parse_timestamp("2021-06-01 12:00:00") == 1622548800.0);
  CHECK(parse_timestamp("01/06/2021 12:00:00") == 1622548800.0);
  CHECK(parse_timestamp("2021-06-01T14:00:00+02:00") == 1622548800.0);
  CHECK(parse_timestamp("2021-06-01T12:00:00.5Z") == 1622548800.5);
  CHECK_THROWS_AS(parse_timestamp("yesterday"), InputError);
  CHECK_THROWS_AS(parse_timestamp("2021-02-30T00:00:00Z"), InputError);
}

TEST_CASE("parse_ais substitutions and dedup") {
  std::string text = kHeader;
  text += row("01/06/2021 12:00:00", "111", 55.0, 12.0, 10.0, 87.0, "511", "Tanker", "");
  text += row("01/06/2021 12:00:00", "111", 55.1, 12.1, 11.0, 90.0, "90", "Tanker", "");
  text += row("01/06/2021 12:00:10", "111", 55.0005, 12.0, 10.0, 87.0, "88", "Tanker", "");
  text += row("01/06/2021 12:00:00", "222", 55.0, 12.01, 5.0, 10.0, "12", "Cargo", "140");
  text += row("01/06/2021 12:00:10", "222", 55.0, 12.01, 5.0, 10.0, "12", "Cargo", "140");
  const AisData data = parse(text);

  REQUIRE(data.tracks.size() == 2);
  const RawTrack& tanker = data.tracks[0];
  CHECK(tanker.mmsi == "111");
  CHECK(tanker.vessel_type == VesselType::Tanker);
  CHECK(tanker.length == 180.0);
  CHECK(tanker.length_defaulted);
  REQUIRE(tanker.fixes.size() == 2);
  CHECK(data.duplicates == 1);
  // The first of the duplicate rows is kept; its heading 511 falls back to COG.
  CHECK(tanker.fixes[0].heading == doctest::Approx(87.0 * kDeg));
  CHECK(tanker.fixes[0].lat == 55.0);
  CHECK(tanker.fixes[0].speed == doctest::Approx(10.0 * kKnot));
  CHECK(tanker.fixes[1].heading == doctest::Approx(88.0 * kDeg));

  CHECK(data.tracks[1].length == 140.0);
  CHECK_FALSE(data.tracks[1].length_defaulted);
}

TEST_CASE("parse_ais skips malformed rows and counts them") {
  std::string text = kHeader;
  text += row("01/06/2021 12:00:00", "111", 55.0, 12.0, 10.0, 87.0, "87", "Cargo", "100");
  text += row("not a time", "111", 55.0, 12.0, 10.0, 87.0, "87", "Cargo", "100");
  text += row("01/06/2021 12:00:10", "111", 95.0, 12.0, 10.0, 87.0, "87", "Cargo", "100");
  text += row("01/06/2021 12:00:20", "111", 55.0, 12.0, 102.3, 87.0, "87", "Cargo", "100");
  text += "01/06/2021 12:00:30,Class A,111,55.0\n";
  text += row("01/06/2021 12:00:40", "111", 55.001, 12.0, 10.0, 87.0, "87", "Cargo", "100");
  const AisData data = parse(text);
  CHECK(data.rows_read == 6);
  CHECK(data.rows_skipped == 4);
  CHECK(data.warnings.size() >= 4);
  CHECK(data.tracks.at(0).fixes.size() == 2);
}

TEST_CASE("parse_ais rejects input without valid rows") {
  CHECK_THROWS_AS(parse(""), InputError);
  CHECK_THROWS_AS(parse(kHeader), InputError);
  CHECK_THROWS_AS(parse("a,b,c\n1,2,3\n"), InputError);
}

TEST_CASE("custom schema") {
  AisSchema schema;
  schema.timestamp = "time";
  schema.mmsi = "id";
  schema.latitude = "lat";
  schema.longitude = "lon";
  schema.sog = "sog";
  schema.cog = "cog";
  schema.heading = "hdg";
  schema.ship_type = "type";
  schema.length = "len";
  schema.delimiter = ';';
  std::istringstream in("id;time;lat;lon;sog;cog;hdg;type;len\n"
                        "7;2021-06-01T12:00:00Z;55;12;4;90;;Pilot;\n"
                        "7;2021-06-01T12:00:20Z;55;12.001;4;90;;Pilot;\n");
  const AisData data = parse_ais(in, schema, IngestParams{});
  REQUIRE(data.tracks.size() == 1);
  CHECK(data.tracks[0].length == 20.0);
  CHECK(data.tracks[0].fixes[1].heading == doctest::Approx(90.0 * kDeg));
}

TEST_CASE("resample") {
  SUBCASE("midpoint between two fixes") {
    const std::vector<TimedFix> fixes{{0.0, LocalPoint(0, 0), 2.0, 0.0}, {20.0, LocalPoint(100, 40), 4.0, 0.2}};
    const auto tracks = resample("v", VesselType::Other, 50.0, fixes, 10.0, 300.0);
    REQUIRE(tracks.size() == 1);
    REQUIRE(tracks[0].size() == 3);
    const VesselState& mid = tracks[0].states()[1];
    CHECK(mid.time == 10.0);
    CHECK(mid.north() == doctest::Approx(50.0));
    CHECK(mid.east() == doctest::Approx(20.0));
    CHECK(mid.speed == doctest::Approx(3.0));
    CHECK(mid.heading == doctest::Approx(0.1));
  }
  SUBCASE("heading through north") {
    const std::vector<TimedFix> fixes{{0.0, LocalPoint(0, 0), 2.0, 350.0 * kDeg},
                                      {20.0, LocalPoint(40, 0), 2.0, 10.0 * kDeg}};
    const auto tracks = resample("v", VesselType::Other, 50.0, fixes, 10.0, 300.0);
    REQUIRE(tracks[0].size() == 3);
    CHECK(std::abs(heading_difference(0.0, tracks[0].states()[1].heading)) < 1e-12);
  }
  SUBCASE("gap splits the track") {
    const std::vector<TimedFix> fixes{{0.0, LocalPoint(0, 0), 2.0, 0.0},
                                      {30.0, LocalPoint(60, 0), 2.0, 0.0},
                                      {630.0, LocalPoint(1260, 0), 2.0, 0.0},
                                      {660.0, LocalPoint(1320, 0), 2.0, 0.0}};
    std::vector<std::string> warnings;
    const auto tracks = resample("v", VesselType::Other, 50.0, fixes, 10.0, 300.0, &warnings);
    REQUIRE(tracks.size() == 2);
    CHECK(tracks[0].id() == "v");
    CHECK(tracks[1].id() == "v-1");
    CHECK(tracks[0].end_time() == 30.0);
    CHECK(tracks[1].start_time() == 630.0);
  }
  SUBCASE("single fix is dropped") {
    const std::vector<TimedFix> fixes{{0.0, LocalPoint(0, 0), 2.0, 0.0}};
    std::vector<std::string> warnings;
    CHECK(resample("v", VesselType::Other, 50.0, fixes, 10.0, 300.0, &warnings).empty());
    CHECK_FALSE(warnings.empty());
  }
  SUBCASE("grid points lie between neighbouring fixes") {
    const std::vector<TimedFix> fixes{{3.0, LocalPoint(0, 0), 2.0, 0.0},
                                      {17.0, LocalPoint(30, -10), 5.0, 0.3},
                                      {41.0, LocalPoint(90, 20), 1.0, 0.1}};
    const auto tracks = resample("v", VesselType::Other, 50.0, fixes, 10.0, 300.0);
    REQUIRE(tracks.size() == 1);
    CHECK(tracks[0].start_time() == 10.0);
    CHECK(tracks[0].end_time() == 40.0);
    for (const VesselState& s : tracks[0].states()) {
      const std::size_t k = s.time < 17.0 ? 0 : 1;
      CHECK(s.speed >= std::min(fixes[k].speed, fixes[k + 1].speed));
      CHECK(s.speed <= std::max(fixes[k].speed, fixes[k + 1].speed));
      CHECK(s.north() >= std::min(fixes[k].position.x(), fixes[k + 1].position.x()));
      CHECK(s.north() <= std::max(fixes[k].position.x(), fixes[k + 1].position.x()));
    }
  }
}

TEST_CASE("load_chart") {
  SUBCASE("land kept, deep water excluded, open ring closed") {
    const ChartData c = chart(R"({"type": "FeatureCollection", "features": [
      {"type": "Feature", "properties": {"name": "island"},
       "geometry": {"type": "Polygon", "coordinates": [[[12.0, 55.0], [12.01, 55.0], [12.01, 55.01], [12.0, 55.0]]]}},
      {"type": "Feature", "properties": {"depth": 20},
       "geometry": {"type": "Polygon", "coordinates": [[[12.1, 55.0], [12.11, 55.0], [12.11, 55.01], [12.1, 55.0]]]}},
      {"type": "Feature", "properties": {"depth": 4.5},
       "geometry": {"type": "Polygon", "coordinates": [[[12.2, 55.0], [12.21, 55.0], [12.21, 55.01], [12.2, 55.01]]]}}
    ]})");
    REQUIRE(c.rings.size() == 2);
    CHECK(c.excluded == 1);
    CHECK(c.rings[0].size() == 4);
    CHECK(c.rings[1].size() == 5); // four vertices given, closing one added
    CHECK(c.rings[1].front() == c.rings[1].back());
    CHECK(c.warnings.size() == 1);
    CHECK(c.rings[0][0].norm() < 1e-9);
  }
  SUBCASE("duplicate vertices removed") {
    const ChartData c = chart(R"({"type": "Polygon", "coordinates":
      [[[12.0, 55.0], [12.01, 55.0], [12.01, 55.0], [12.01, 55.01], [12.0, 55.0]]]})");
    REQUIRE(c.rings.size() == 1);
    CHECK(c.rings[0].size() == 4);
  }
  SUBCASE("multipolygon") {
    const ChartData c = chart(R"({"type": "MultiPolygon", "coordinates": [
      [[[12.0, 55.0], [12.01, 55.0], [12.01, 55.01], [12.0, 55.0]]],
      [[[12.1, 55.0], [12.11, 55.0], [12.11, 55.01], [12.1, 55.0]]]]})");
    CHECK(c.rings.size() == 2);
  }
  SUBCASE("empty file") { CHECK(chart("").rings.empty()); }
  SUBCASE("garbage") { CHECK_THROWS_AS(chart("{not json"), InputError); }
}

TEST_CASE("build a scenario and round-trip it through JSON") {
  std::string text = kHeader;
  for (int i = 0; i <= 6; ++i) {
    const std::string t = "01/06/2021 12:00:" + std::string(i * 10 < 10 ? "0" : "") + std::to_string(i * 10);
    text += row(t, "219000001", 55.0 + 0.0001 * i, 12.0, 10.0, 0.0, "0", "Cargo", "120");
    text += row(t, "219000002", 55.0 + 0.0001 * i, 12.01, 7.0, 0.0, "0", "Pilot", "");
  }
  IngestParams params;
  params.origin = GeoPoint{55.0, 12.0};
  const AisData data = parse(text, params);
  const ChartData c = chart(R"({"type": "Polygon", "coordinates":
      [[[12.002, 55.002], [12.004, 55.002], [12.004, 55.004], [12.002, 55.002]]]})",
                            params);
  const Scenario s = build_scenario(data, c.rings, *params.origin, params, 50.0);
  REQUIRE(s.tracks.size() == 2);
  CHECK(s.tracks[0].id() == "219000001");
  CHECK(s.tracks[0].start_time() == 0.0);
  CHECK(s.tracks[0].end_time() == 60.0);
  CHECK(s.tracks[1].length() == 20.0);
  CHECK(s.obstacles.polygons().size() == 1);

  const Scenario back = scenario_from_json(scenario_to_json(s));
  CHECK(scenario_to_json(back).dump() == scenario_to_json(s).dump());
  REQUIRE(back.tracks.size() == s.tracks.size());
  for (std::size_t k = 0; k < s.tracks.size(); ++k) {
    CHECK(back.tracks[k].id() == s.tracks[k].id());
    CHECK(back.tracks[k].vessel_type() == s.tracks[k].vessel_type());
    for (std::size_t i = 0; i < s.tracks[k].size(); ++i) {
      const VesselState& a = s.tracks[k].states()[i];
      const VesselState& b = back.tracks[k].states()[i];
      CHECK(a.time == b.time);
      CHECK(a.position == b.position);
      CHECK(a.speed == b.speed);
      CHECK(a.heading == b.heading);
      CHECK(a.length == b.length);
    }
  }
  CHECK(back.obstacles.polygons() == s.obstacles.polygons());
  CHECK(back.epoch_unix == s.epoch_unix);
  CHECK(back.origin.lat == s.origin.lat);

  Json wrong = scenario_to_json(s);
  wrong["version"] = 99;
  CHECK_THROWS_AS(scenario_from_json(wrong), InputError);
}
