#pragma once

#include "seamanship/types.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <optional>

namespace seamanship {

inline constexpr double kEarthRadius = 6371000.0;

struct GeoPoint {
  double lat = 0.0; // degrees
  double lon = 0.0; // degrees
};

/// Equirectangular projection onto the tangent plane at `origin`.
LocalPoint project(const GeoPoint& point, const GeoPoint& origin);
GeoPoint unproject(const LocalPoint& point, const GeoPoint& origin);

/// Length/speed dependent coefficients of the off-center ellipse domain.
///   semi_major = (c_a0 + c_a1 * v[kn]) * L
///   semi_minor = c_b0 * L
///   offset_fwd = c_off * semi_major, offset_stb = c_off_stb * semi_minor
struct DomainParams {
  double c_a0 = 4.0;
  double c_a1 = 0.5;
  double c_b0 = 1.6;
  double c_off = 0.25;
  double c_off_stb = 0.0;

  void validate() const;
};

/// Off-center ellipse around a vessel. Offsets are measured from the vessel
/// position to the ellipse center, forward and to starboard.
struct DomainSpec {
  double semi_major = 1.0;
  double semi_minor = 1.0;
  double center_offset_fwd = 0.0;
  double center_offset_stb = 0.0;
  double heading = 0.0;

  /// The vessel must lie strictly inside its own domain.
  void validate() const;
};

struct ArenaSpec {
  double radius = 926.0;
  LocalPoint center = LocalPoint::Zero();
};

DomainSpec make_domain(const VesselState& state, const DomainParams& params);

/// Rotates a (north, east) offset into the body frame (forward, starboard).
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> to_body_frame(const Eigen::Matrix<Scalar, 2, 1>& offset, Scalar heading) {
  using std::cos;
  using std::sin;
  const Scalar c = cos(heading);
  const Scalar s = sin(heading);
  return {c * offset.x() + s * offset.y(), -s * offset.x() + c * offset.y()};
}

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> from_body_frame(const Eigen::Matrix<Scalar, 2, 1>& body, Scalar heading) {
  using std::cos;
  using std::sin;
  const Scalar c = cos(heading);
  const Scalar s = sin(heading);
  return {c * body.x() - s * body.y(), s * body.x() + c * body.y()};
}

/// Scale f applied to the whole domain (axes and offsets) that puts the body
/// frame point (x, y) on its boundary: the non-negative root of
///   (x - f*da)^2 b^2 + (y - f*db)^2 a^2 = f^2 a^2 b^2.
/// Uses the cancellation-free form of the quadratic formula.
template <typename Scalar>
Scalar scale_factor_body(Scalar a, Scalar b, Scalar da, Scalar db, Scalar x, Scalar y) {
  using std::sqrt;
  const Scalar a2 = a * a;
  const Scalar b2 = b * b;
  const Scalar A = da * da * b2 + db * db * a2 - a2 * b2;
  const Scalar B = Scalar(-2) * (x * da * b2 + y * db * a2);
  const Scalar C = x * x * b2 + y * y * a2;
  if (C == Scalar(0) && B == Scalar(0)) return Scalar(0);

  Scalar disc = B * B - Scalar(4) * A * C;
  if (disc < Scalar(0)) disc = Scalar(0);
  const Scalar root = sqrt(disc);
  // A < 0 and C >= 0, so the roots have opposite signs.
  if (B >= Scalar(0)) {
    const Scalar q = Scalar(-0.5) * (B + root);
    return q / A;
  }
  const Scalar q = Scalar(-0.5) * (B - root);
  return C / q;
}

double scale_factor(const DomainSpec& domain, const LocalPoint& target, const LocalPoint& own_position);

/// Degree of domain violation.
inline double ddv(double f) { return std::max(1.0 - f, 0.0); }

/// Earliest common grid time at which `k` is inside `j`'s domain.
std::optional<double> find_tdv(const VesselTrack& track_j, const VesselTrack& track_k,
                               const DomainParams& params);

/// Constant-course prediction with a constant speed-change rate; speed is
/// clamped at zero (no reversing).
VesselState predict_state(const VesselState& state, double dt, double speed_change_rate);

} // namespace seamanship
