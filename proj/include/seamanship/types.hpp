#pragma once

#include <Eigen/Core>

#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace seamanship {

/// Position in the local tangent plane, (north, east) in meters.
using LocalPoint = Eigen::Vector2d;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kKnot = 1852.0 / 3600.0; // m/s per knot

// Error taxonomy. The CLI maps these onto exit statuses.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Bad or missing input data (files, ids, time ranges).
struct InputError : Error {
  using Error::Error;
};
/// A parameter block failed its own invariants.
struct ConfigError : Error {
  using Error::Error;
};
/// Query outside the time range a track covers.
struct OutOfRangeError : InputError {
  using InputError::InputError;
};
/// Internal invariant broke; indicates a bug, not bad input.
struct InvariantError : Error {
  using Error::Error;
};

enum class VesselType { Tanker, Cargo, Pilot, Passenger, Fishing, Other };

inline constexpr VesselType kAllVesselTypes[] = {VesselType::Tanker,    VesselType::Cargo,
                                                 VesselType::Pilot,     VesselType::Passenger,
                                                 VesselType::Fishing,   VesselType::Other};

std::string_view to_string(VesselType type);
/// Case-insensitive; unrecognised text maps to Other. Matches on prefix so
/// "Tanker - Hazard A" and "Cargo, all ships" resolve as expected.
VesselType parse_vessel_type(std::string_view text);

/// Wraps an angle into [0, 2π).
double wrap_heading(double radians);
/// Signed shortest-arc difference to - from, in (-π, π].
double heading_difference(double from, double to);

struct VesselState {
  double time = 0.0;                     // seconds since scenario epoch
  LocalPoint position = LocalPoint::Zero();
  double speed = 0.0;                    // m/s, over ground
  double heading = 0.0;                  // radians clockwise from north
  double length = 1.0;                   // m
  VesselType vessel_type = VesselType::Other;

  double north() const { return position.x(); }
  double east() const { return position.y(); }
  /// Unit vector along the heading in (north, east).
  LocalPoint direction() const;
  LocalPoint velocity() const { return speed * direction(); }

  /// Throws ConfigError when speed < 0, length <= 0 or a field is non-finite.
  void validate() const;
};

/// Uniformly sampled vessel trajectory. states[i].time == t0 + i*dt.
class VesselTrack {
public:
  VesselTrack() = default;
  VesselTrack(std::string id, std::vector<VesselState> states, double dt);

  const std::string& id() const { return id_; }
  double dt() const { return dt_; }
  const std::vector<VesselState>& states() const { return states_; }
  std::size_t size() const { return states_.size(); }
  bool empty() const { return states_.empty(); }

  double start_time() const;
  double end_time() const;
  VesselType vessel_type() const;
  double length() const;

  bool covers(double t) const;
  /// Linear interpolation of position and speed, shortest-arc interpolation
  /// of heading. Throws OutOfRangeError outside [start_time, end_time].
  VesselState state_at(double t) const;

private:
  std::string id_;
  std::vector<VesselState> states_;
  double dt_ = 0.0;
};

} // namespace seamanship
