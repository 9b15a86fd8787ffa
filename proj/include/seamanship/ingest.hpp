#pragma once

#include "seamanship/geometry.hpp"
#include "seamanship/risk.hpp"
#include "seamanship/scenario.hpp"
#include "seamanship/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace seamanship {

/// Column names of an AIS CSV export. Defaults follow the Danish Maritime
/// Authority layout. Header matching ignores case, surrounding blanks and a
/// leading '#'.
struct AisSchema {
  std::string timestamp = "Timestamp";
  std::string mmsi = "MMSI";
  std::string latitude = "Latitude";
  std::string longitude = "Longitude";
  std::string sog = "SOG";         // knots
  std::string cog = "COG";         // degrees
  std::string heading = "Heading"; // degrees, 511 = unavailable
  std::string ship_type = "Ship type";
  std::string length = "Length";   // meters, may be blank
  char delimiter = ',';
};

std::map<VesselType, double> default_type_lengths();

struct IngestParams {
  double dt = 10.0;       // s
  double max_gap = 300.0; // s
  double draught_threshold = 10.0; // m
  std::string depth_property = "depth";
  std::map<VesselType, double> default_lengths = default_type_lengths();
  std::optional<GeoPoint> origin; // defaults to the centroid of all fixes

  void validate() const;
};

/// Seconds since the Unix epoch. Accepts ISO-8601 ("2020-02-01T12:00:00Z",
/// optional fraction and +HH:MM offset, 'T' or ' ' separator) and the
/// day-first "01/02/2020 12:00:00" form.
double parse_timestamp(std::string_view text);

struct RawFix {
  double unix_time = 0.0;
  double lat = 0.0;
  double lon = 0.0;
  double speed = 0.0;   // m/s
  double heading = 0.0; // radians
};

struct RawTrack {
  std::string mmsi;
  VesselType vessel_type = VesselType::Other;
  double length = 0.0;
  bool length_defaulted = false;
  std::vector<RawFix> fixes; // sorted by time, unique timestamps
};

struct AisData {
  std::vector<RawTrack> tracks; // sorted by mmsi
  std::size_t rows_read = 0;
  std::size_t rows_skipped = 0;
  std::size_t duplicates = 0;
  std::vector<std::string> warnings;
};

AisData parse_ais(std::istream& in, const AisSchema& schema, const IngestParams& params);
AisData parse_ais(const std::filesystem::path& path, const AisSchema& schema, const IngestParams& params);

struct TimedFix {
  double time = 0.0; // s since scenario epoch
  LocalPoint position = LocalPoint::Zero();
  double speed = 0.0;
  double heading = 0.0;
};

/// Uniform resampling at multiples of dt. Gaps above max_gap split the
/// track; segments that hold a single fix or no grid time are dropped. The
/// first segment keeps `id`, later ones get "-1", "-2", ... appended.
std::vector<VesselTrack> resample(const std::string& id, VesselType type, double length,
                                  std::span<const TimedFix> fixes, double dt, double max_gap,
                                  std::vector<std::string>* warnings = nullptr);

struct ChartData {
  std::vector<Ring> rings;
  std::size_t excluded = 0; // polygons deeper than the draught threshold
  std::vector<std::string> warnings;
};

/// Reads GeoJSON (FeatureCollection, Feature or bare Polygon/MultiPolygon).
/// Polygons without a depth property, or shallower than the threshold,
/// become obstacles. Rings are deduplicated and closed.
ChartData load_chart(std::istream& in, const GeoPoint& origin, const IngestParams& params);
ChartData load_chart(const std::filesystem::path& path, const GeoPoint& origin, const IngestParams& params);

GeoPoint centroid(const AisData& data);

/// AIS (and optional chart) to a resampled scenario on one local frame.
Scenario build_scenario(const AisData& data, const std::vector<Ring>& obstacle_rings, const GeoPoint& origin,
                        const IngestParams& params, double obstacle_spacing);

Scenario ingest_files(const std::filesystem::path& ais, const std::optional<std::filesystem::path>& chart,
                      const AisSchema& schema, const IngestParams& params, double obstacle_spacing);

} // namespace seamanship
