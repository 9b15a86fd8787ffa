#include "seamanship/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace seamanship {

namespace {
constexpr double kTimeTolerance = 1e-9;
}

std::string_view to_string(VesselType type) {
  switch (type) {
  case VesselType::Tanker: return "Tanker";
  case VesselType::Cargo: return "Cargo";
  case VesselType::Pilot: return "Pilot";
  case VesselType::Passenger: return "Passenger";
  case VesselType::Fishing: return "Fishing";
  case VesselType::Other: return "Other";
  }
  return "Other";
}

VesselType parse_vessel_type(std::string_view text) {
  std::string lower;
  lower.reserve(text.size());
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c)) || !lower.empty())
      lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  for (VesselType type : kAllVesselTypes) {
    std::string name(to_string(type));
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower.rfind(name, 0) == 0) return type;
  }
  return VesselType::Other;
}

double wrap_heading(double radians) {
  double wrapped = std::fmod(radians, kTwoPi);
  if (wrapped < 0.0) wrapped += kTwoPi;
  // fmod of a tiny negative value can round up to exactly 2π.
  if (wrapped >= kTwoPi) wrapped = 0.0;
  return wrapped;
}

double heading_difference(double from, double to) {
  double diff = wrap_heading(to - from);
  if (diff > std::numbers::pi) diff -= kTwoPi;
  return diff;
}

LocalPoint VesselState::direction() const { return {std::cos(heading), std::sin(heading)}; }

void VesselState::validate() const {
  if (!std::isfinite(time) || !position.allFinite() || !std::isfinite(speed) ||
      !std::isfinite(heading) || !std::isfinite(length))
    throw ConfigError("vessel state has non-finite fields");
  if (speed < 0.0) throw ConfigError("vessel speed must be non-negative");
  if (length <= 0.0) throw ConfigError("vessel length must be positive");
}

VesselTrack::VesselTrack(std::string id, std::vector<VesselState> states, double dt)
    : id_(std::move(id)), states_(std::move(states)), dt_(dt) {
  if (states_.empty()) throw InputError("track '" + id_ + "' has no states");
  if (states_.size() > 1 && !(dt_ > 0.0))
    throw ConfigError("track '" + id_ + "' needs a positive time step");
  for (std::size_t i = 1; i < states_.size(); ++i) {
    const double expected = states_.front().time + static_cast<double>(i) * dt_;
    if (std::abs(states_[i].time - expected) > 1e-6)
      throw InputError("track '" + id_ + "' is not on a uniform grid");
  }
}

double VesselTrack::start_time() const { return states_.front().time; }
double VesselTrack::end_time() const { return states_.back().time; }
VesselType VesselTrack::vessel_type() const { return states_.front().vessel_type; }
double VesselTrack::length() const { return states_.front().length; }

bool VesselTrack::covers(double t) const {
  return !states_.empty() && t >= start_time() - kTimeTolerance && t <= end_time() + kTimeTolerance;
}

VesselState VesselTrack::state_at(double t) const {
  if (!covers(t))
    throw OutOfRangeError("time " + std::to_string(t) + " outside track '" + id_ + "'");
  if (states_.size() == 1) return states_.front();

  const double u = (t - start_time()) / dt_;
  auto idx = static_cast<std::ptrdiff_t>(std::floor(u));
  idx = std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(states_.size()) - 2);
  const double w = std::clamp(u - static_cast<double>(idx), 0.0, 1.0);
  const VesselState& a = states_[static_cast<std::size_t>(idx)];
  const VesselState& b = states_[static_cast<std::size_t>(idx) + 1];
  if (w <= kTimeTolerance) {
    VesselState s = a;
    s.time = t;
    return s;
  }
  if (w >= 1.0 - kTimeTolerance) {
    VesselState s = b;
    s.time = t;
    return s;
  }

  VesselState s = a;
  s.time = t;
  s.position = (1.0 - w) * a.position + w * b.position;
  s.speed = (1.0 - w) * a.speed + w * b.speed;
  s.heading = wrap_heading(a.heading + w * heading_difference(a.heading, b.heading));
  return s;
}

} // namespace seamanship
