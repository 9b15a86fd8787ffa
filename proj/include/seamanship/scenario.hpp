#pragma once

#include "seamanship/geometry.hpp"
#include "seamanship/risk.hpp"
#include "seamanship/types.hpp"

#include <string>
#include <vector>

namespace seamanship {

struct SourceDigest {
  std::string role; // "ais", "chart", ...
  std::string path;
  std::string sha256;
};

/// Tracks and obstacles on one local frame and one time grid. Times are
/// seconds since `epoch_unix`; every track sits on multiples of `dt`.
struct Scenario {
  GeoPoint origin;
  double dt = 10.0;
  double epoch_unix = 0.0;
  std::vector<VesselTrack> tracks; // sorted by id
  ObstacleSet obstacles;
  std::vector<SourceDigest> sources;
  std::vector<std::string> warnings;

  const VesselTrack* find(const std::string& id) const;
  const VesselTrack& at(const std::string& id) const; // throws InputError
  double start_time() const;
  double end_time() const;
};

} // namespace seamanship
