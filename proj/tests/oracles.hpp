#pragma once

// Independent reference computations used as test oracles.

#include "seamanship/geometry.hpp"
#include "seamanship/planner.hpp"
#include "seamanship/risk.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace oracle {

using seamanship::DomainSpec;
using seamanship::LocalPoint;

/// Is `target` inside `domain` scaled by f about the own position?
inline bool inside_scaled(const DomainSpec& d, const LocalPoint& target, const LocalPoint& own, double f) {
  const Eigen::Vector2d body = seamanship::to_body_frame<double>(target - own, d.heading);
  const double u = (body.x() - f * d.center_offset_fwd) / (f * d.semi_major);
  const double w = (body.y() - f * d.center_offset_stb) / (f * d.semi_minor);
  return u * u + w * w <= 1.0;
}

/// Smallest f whose scaled domain contains the target, by bisection.
inline double scale_by_bisection(const DomainSpec& d, const LocalPoint& target, const LocalPoint& own,
                                 double tol = 1e-9) {
  double lo = 0.0, hi = 1.0;
  while (!inside_scaled(d, target, own, hi)) {
    hi *= 2.0;
    if (hi > 1e12) return std::numeric_limits<double>::quiet_NaN(); // vessel outside its own domain
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (inside_scaled(d, target, own, mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Literal recursion: SR <- CR + SR (1 - CR), then the grounding term.
inline double alg1_literal(std::span<const double> cr, double gr) {
  double sr = 0.0;
  for (double c : cr) sr = c + sr * (1.0 - c);
  return gr + sr * (1.0 - gr);
}

inline double complement_product(std::span<const double> cr, double gr) {
  double p = 1.0 - gr;
  for (double c : cr) p *= 1.0 - c;
  return 1.0 - p;
}

/// Composite Simpson over [a, b] with n (even) panels.
template <class F>
double simpson(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

inline seamanship::VesselState vessel(double n, double e, double heading_deg, double speed, double length = 50.0,
                                      double t = 0.0) {
  seamanship::VesselState s;
  s.time = t;
  s.position = LocalPoint(n, e);
  s.heading = seamanship::wrap_heading(heading_deg * std::numbers::pi / 180.0);
  s.speed = speed;
  s.length = length;
  return s;
}

/// Constant-velocity track on multiples of dt over [t0, t1].
inline seamanship::VesselTrack straight_track(const std::string& id, double n, double e, double heading_deg,
                                              double speed, double t0, double t1, double dt = 10.0,
                                              double length = 50.0) {
  std::vector<seamanship::VesselState> states;
  const seamanship::VesselState start = vessel(n, e, heading_deg, speed, length, t0);
  for (double t = t0; t <= t1 + 1e-9; t += dt) {
    seamanship::VesselState s = start;
    s.time = t;
    s.position = start.position + speed * (t - t0) * start.direction();
    states.push_back(s);
  }
  return {id, std::move(states), dt};
}

/// Random toy planning scene: a few targets inside about one arena of the
/// own vessel, optionally a square island ahead.
inline seamanship::PlanningScene toy_scene(std::mt19937_64& rng, bool island) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  seamanship::PlanningScene scene;
  scene.ownship = vessel(0.0, 0.0, 0.0, 4.0 + 4.0 * u(rng), 40.0 + 60.0 * u(rng));
  const int n_targets = 1 + static_cast<int>(3 * u(rng));
  for (int k = 0; k < n_targets; ++k) {
    const double range = 300.0 + 1200.0 * u(rng);
    const double bearing = 360.0 * u(rng);
    const double b = bearing * std::numbers::pi / 180.0;
    seamanship::VesselState t =
        vessel(range * std::cos(b), range * std::sin(b), 360.0 * u(rng), 2.0 + 6.0 * u(rng), 30.0 + 90.0 * u(rng));
    scene.targets.push_back(t);
    scene.target_end_times.push_back(1e9);
  }
  if (island) {
    const double n0 = 400.0 + 400.0 * u(rng);
    const double e0 = -300.0 + 400.0 * u(rng);
    seamanship::Ring ring{LocalPoint(n0, e0), LocalPoint(n0, e0 + 200.0), LocalPoint(n0 + 200.0, e0 + 200.0),
                          LocalPoint(n0 + 200.0, e0), LocalPoint(n0, e0)};
    scene.obstacles = seamanship::ObstacleSet({ring}, 50.0);
  }
  return scene;
}

} // namespace oracle
