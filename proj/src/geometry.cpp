#include "seamanship/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace seamanship {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

LocalPoint project(const GeoPoint& point, const GeoPoint& origin) {
  if (!std::isfinite(point.lat) || !std::isfinite(point.lon) || !std::isfinite(origin.lat) ||
      !std::isfinite(origin.lon))
    throw InputError("non-finite coordinate in projection");
  if (std::abs(point.lat) > 90.0 || std::abs(point.lon) > 180.0 || std::abs(origin.lat) > 90.0 ||
      std::abs(origin.lon) > 180.0)
    throw InputError("latitude/longitude out of range");
  const double north = (point.lat - origin.lat) * kDegToRad * kEarthRadius;
  const double east = (point.lon - origin.lon) * std::cos(origin.lat * kDegToRad) * kDegToRad * kEarthRadius;
  return {north, east};
}

GeoPoint unproject(const LocalPoint& point, const GeoPoint& origin) {
  const double lat = origin.lat + point.x() / (kEarthRadius * kDegToRad);
  const double lon = origin.lon + point.y() / (std::cos(origin.lat * kDegToRad) * kEarthRadius * kDegToRad);
  return {lat, lon};
}

void DomainParams::validate() const {
  if (!(c_b0 > 0.0)) throw ConfigError("domain coefficient c_b0 must be positive");
  if (!(c_a0 > 0.0) || c_a1 < 0.0) throw ConfigError("domain coefficients give a non-positive semi-major axis");
  if (!(std::abs(c_off) < 1.0) || !(std::abs(c_off_stb) < 1.0) || c_off * c_off + c_off_stb * c_off_stb >= 1.0)
    throw ConfigError("domain offsets must keep the vessel inside its domain");
}

void DomainSpec::validate() const {
  if (!(semi_major > 0.0) || !(semi_minor > 0.0)) throw ConfigError("domain axes must be positive");
  const double u = center_offset_fwd / semi_major;
  const double w = center_offset_stb / semi_minor;
  if (!(std::abs(u) < 1.0) || !(std::abs(w) < 1.0) || u * u + w * w >= 1.0)
    throw ConfigError("domain offsets must keep the vessel inside its domain");
}

DomainSpec make_domain(const VesselState& state, const DomainParams& params) {
  const double knots = state.speed / kKnot;
  DomainSpec domain;
  domain.semi_major = (params.c_a0 + params.c_a1 * knots) * state.length;
  domain.semi_minor = params.c_b0 * state.length;
  if (!(domain.semi_major > 0.0) || !(domain.semi_minor > 0.0))
    throw ConfigError("domain coefficients give a non-positive axis");
  domain.center_offset_fwd = params.c_off * domain.semi_major;
  domain.center_offset_stb = params.c_off_stb * domain.semi_minor;
  domain.heading = state.heading;
  domain.validate();
  return domain;
}

double scale_factor(const DomainSpec& domain, const LocalPoint& target, const LocalPoint& own_position) {
  const Eigen::Vector2d body = to_body_frame<double>(target - own_position, domain.heading);
  return scale_factor_body(domain.semi_major, domain.semi_minor, domain.center_offset_fwd,
                           domain.center_offset_stb, body.x(), body.y());
}

std::optional<double> find_tdv(const VesselTrack& track_j, const VesselTrack& track_k,
                               const DomainParams& params) {
  if (track_j.empty() || track_k.empty()) return std::nullopt;
  const double start = std::max(track_j.start_time(), track_k.start_time());
  const double end = std::min(track_j.end_time(), track_k.end_time());
  if (start > end) return std::nullopt;

  for (const VesselState& own : track_j.states()) {
    if (own.time < start - 1e-9 || own.time > end + 1e-9) continue;
    const VesselState target = track_k.state_at(own.time);
    const DomainSpec domain = make_domain(own, params);
    if (scale_factor(domain, target.position, own.position) < 1.0) return own.time;
  }
  return std::nullopt;
}

VesselState predict_state(const VesselState& state, double dt, double speed_change_rate) {
  if (dt < 0.0) throw ConfigError("prediction interval must be non-negative");
  VesselState next = state;
  if (dt == 0.0) return next;

  double distance = 0.0;
  const double final_speed = state.speed + speed_change_rate * dt;
  if (final_speed >= 0.0) {
    distance = state.speed * dt + 0.5 * speed_change_rate * dt * dt;
    next.speed = final_speed;
  } else {
    // Decelerates to a stop before dt elapses.
    const double stop_time = -state.speed / speed_change_rate;
    distance = state.speed * stop_time + 0.5 * speed_change_rate * stop_time * stop_time;
    next.speed = 0.0;
  }
  next.time = state.time + dt;
  next.position = state.position + distance * state.direction();
  return next;
}

} // namespace seamanship
