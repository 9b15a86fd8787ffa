#include "seamanship/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace seamanship {

void RiskParams::validate() const {
  if (!(kappa > 0.0)) throw ConfigError("risk.kappa must be positive");
  if (!(f50 > 0.0)) throw ConfigError("risk.f50 must be positive");
  if (!(horizon_step > 0.0) || !(horizon_step <= horizon_T))
    throw ConfigError("risk horizon requires 0 < horizon_step <= horizon_T");
  if (!(risk_clamp_eps > 0.0 && risk_clamp_eps < 0.5)) throw ConfigError("risk.risk_clamp_eps must lie in (0, 0.5)");
  if (!(arena_radius > 0.0)) throw ConfigError("risk.arena_radius must be positive");
  if (!(obstacle_spacing > 0.0)) throw ConfigError("risk.obstacle_spacing must be positive");
  if (!(channel_gamma > 0.0 && channel_gamma <= 1.0)) throw ConfigError("risk.channel_gamma must lie in (0, 1]");
  if (!(channel_min_fraction > 0.0 && channel_min_fraction <= 1.0))
    throw ConfigError("risk.channel_min_fraction must lie in (0, 1]");
}

double arena_risk(const LocalPoint& own, const LocalPoint& target, const RiskParams& params) {
  return risk_index((target - own).norm() / params.arena_radius, params);
}

namespace {

double unite(double a, double b, UnionMode mode) {
  return mode == UnionMode::Max ? std::max(a, b) : a + b - a * b;
}

// Number of horizon samples including both ends; tolerant to T/step rounding.
std::size_t horizon_samples(const RiskParams& params) {
  return static_cast<std::size_t>(std::floor(params.horizon_T / params.horizon_step + 1e-9)) + 1;
}

} // namespace

double mutual_collision_risk(const VesselState& own, const VesselState& target, double rate,
                             const DomainParams& domain, const RiskParams& params) {
  double worst = 0.0;
  const std::size_t n = horizon_samples(params);
  for (std::size_t i = 0; i < n; ++i) {
    const double tau = static_cast<double>(i) * params.horizon_step;
    const VesselState own_tau = predict_state(own, tau, 0.0);
    const VesselState target_tau = predict_state(target, tau, rate);
    const double r_jk =
        risk_index(scale_factor(make_domain(own_tau, domain), target_tau.position, own_tau.position), params);
    const double r_kj =
        risk_index(scale_factor(make_domain(target_tau, domain), own_tau.position, target_tau.position), params);
    worst = std::max(worst, unite(r_jk, r_kj, params.union_mode));
  }
  return worst;
}

double mutual_collision_risk(const VesselTrack& track_j, const VesselTrack& track_k, double t, double rate,
                             const DomainParams& domain, const RiskParams& params) {
  return mutual_collision_risk(track_j.state_at(t), track_k.state_at(t), rate, domain, params);
}

double overall_collision_risk(const VesselState& own, const VesselState& target, double rate,
                              const DomainParams& domain, const RiskParams& params) {
  const double r_a = arena_risk(own.position, target.position, params);
  if (r_a == 0.0) return 0.0;
  return mutual_collision_risk(own, target, rate, domain, params) * r_a;
}

double overall_collision_risk(const VesselTrack& track_j, const VesselTrack& track_k, double t, double rate,
                              const DomainParams& domain, const RiskParams& params) {
  return overall_collision_risk(track_j.state_at(t), track_k.state_at(t), rate, domain, params);
}

std::vector<ObstaclePoint> discretize_boundaries(const std::vector<Ring>& polygons, double spacing) {
  if (!(spacing > 0.0)) throw ConfigError("obstacle spacing must be positive");
  std::vector<ObstaclePoint> points;
  for (std::size_t p = 0; p < polygons.size(); ++p) {
    const Ring& ring = polygons[p];
    if (ring.size() == 1) points.push_back({ring.front(), p});
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
      const LocalPoint& a = ring[i];
      const LocalPoint& b = ring[i + 1];
      const double length = (b - a).norm();
      const auto segments =
          std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(length / spacing - 1e-9)));
      for (std::size_t s = 0; s < segments; ++s) {
        const double w = static_cast<double>(s) / static_cast<double>(segments);
        points.push_back({a + w * (b - a), p});
      }
    }
  }
  return points;
}

ObstacleSet::ObstacleSet(std::vector<Ring> polygons, double spacing) : spacing_(spacing) {
  for (Ring& ring : polygons) {
    if (ring.empty()) continue;
    if (ring.size() > 1 && ring.front() != ring.back()) ring.push_back(ring.front());
    polygons_.push_back(std::move(ring));
  }
  points_ = discretize_boundaries(polygons_, spacing_);
}

std::vector<LocalPoint> ObstacleSet::points_in_arena(const ArenaSpec& arena) const {
  std::vector<LocalPoint> inside;
  const double r2 = arena.radius * arena.radius;
  for (const ObstaclePoint& p : points_) {
    if ((p.position - arena.center).squaredNorm() < r2) inside.push_back(p.position);
  }
  return inside;
}

bool ObstacleSet::contains(const LocalPoint& point) const {
  return std::any_of(polygons_.begin(), polygons_.end(), [&](const Ring& r) { return point_in_ring(r, point); });
}

bool point_in_ring(const Ring& ring, const LocalPoint& point) {
  if (ring.size() < 3) return false;
  bool inside = false;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    const LocalPoint& a = ring[i];
    const LocalPoint& b = ring[j];
    if ((a.y() > point.y()) != (b.y() > point.y())) {
      const double x = a.x() + (point.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (point.x() < x) inside = !inside;
    }
  }
  return inside;
}

std::vector<LocalPoint> sample_obstacle_points(const std::vector<Ring>& polygons, const ArenaSpec& arena,
                                               double spacing) {
  return ObstacleSet(polygons, spacing).points_in_arena(arena);
}

DomainSpec adjust_domain_for_channel(const DomainSpec& domain, const VesselState& own,
                                     std::span<const LocalPoint> obstacle_points, const RiskParams& params) {
  if (!params.channel_adjust) return domain;
  const double corridor = params.channel_corridor > 0.0 ? params.channel_corridor : domain.semi_major;
  double port = params.arena_radius;
  double starboard = params.arena_radius;
  bool any = false;
  for (const LocalPoint& point : obstacle_points) {
    const Eigen::Vector2d body = to_body_frame<double>(point - own.position, domain.heading);
    if (body.x() < 0.0 || body.x() > corridor) continue;
    any = true;
    if (body.y() >= 0.0)
      starboard = std::min(starboard, body.y());
    else
      port = std::min(port, -body.y());
  }
  const double width = port + starboard;
  if (!any || 2.0 * domain.semi_minor <= width) return domain;

  DomainSpec adjusted = domain;
  const double narrowed =
      std::max(params.channel_gamma * width / 2.0, params.channel_min_fraction * domain.semi_minor);
  if (narrowed >= domain.semi_minor) return domain;
  adjusted.center_offset_stb *= narrowed / domain.semi_minor;
  adjusted.semi_minor = narrowed;
  return adjusted;
}

GroundingRisk grounding_risk(const VesselState& own, std::span<const LocalPoint> obstacle_points,
                             const DomainParams& domain_params, const RiskParams& params) {
  GroundingRisk result;
  if (obstacle_points.empty()) return result;
  result.per_point.reserve(obstacle_points.size());

  const DomainSpec domain = adjust_domain_for_channel(make_domain(own, domain_params), own, obstacle_points, params);
  std::vector<double> domain_index(obstacle_points.size());
  for (std::size_t i = 0; i < obstacle_points.size(); ++i)
    domain_index[i] = risk_index(scale_factor(domain, obstacle_points[i], own.position), params);

  if (params.grounding_horizon) {
    const auto n = static_cast<std::size_t>(std::floor(params.horizon_T / params.horizon_step + 1e-9)) + 1;
    for (std::size_t k = 1; k < n; ++k) {
      const VesselState ahead = predict_state(own, static_cast<double>(k) * params.horizon_step, 0.0);
      const DomainSpec d = adjust_domain_for_channel(make_domain(ahead, domain_params), ahead, obstacle_points, params);
      for (std::size_t i = 0; i < obstacle_points.size(); ++i)
        domain_index[i] = std::max(domain_index[i], risk_index(scale_factor(d, obstacle_points[i], ahead.position), params));
    }
  }

  for (std::size_t i = 0; i < obstacle_points.size(); ++i) {
    const double gr = domain_index[i] * arena_risk(own.position, obstacle_points[i], params);
    result.per_point.push_back(gr);
    result.max = std::max(result.max, gr);
  }
  return result;
}

double compose_scenario_risk(std::span<const double> collision_risks, double gr_max) {
  auto check = [](double r) {
    if (!(r >= 0.0 && r <= 1.0)) throw InputError("risk value outside [0, 1]");
  };
  check(gr_max);
  double sr = 0.0;
  for (double cr : collision_risks) {
    check(cr);
    sr = cr + sr * (1.0 - cr);
  }
  return gr_max + sr * (1.0 - gr_max);
}

ScenarioRisk evaluate_scenario_risk(const VesselState& own, std::span<const VesselState> targets,
                                    const ObstacleSet& obstacles, const DomainParams& domain,
                                    const RiskParams& params) {
  ScenarioRisk out;
  out.collision.reserve(targets.size());
  for (const VesselState& target : targets)
    out.collision.push_back(overall_collision_risk(own, target, 0.0, domain, params));
  const std::vector<LocalPoint> points = obstacles.points_in_arena({params.arena_radius, own.position});
  out.grounding = grounding_risk(own, points, domain, params).max;
  out.scenario = compose_scenario_risk(out.collision, out.grounding);
  return out;
}

void RiskSeries::validate() const {
  const std::size_t n = times.size();
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  auto check_series = [&](const std::vector<double>& s, bool optional) {
    if (optional && s.empty()) return;
    if (s.size() != n) throw InvariantError("risk series length mismatch");
    if (!std::all_of(s.begin(), s.end(), in_unit)) throw InvariantError("risk series value outside [0, 1]");
  };
  if (collision_risk.size() != target_ids.size()) throw InvariantError("collision risk per target mismatch");
  for (const auto& s : collision_risk) check_series(s, false);
  for (const auto& s : collision_risk_wavg) check_series(s, false);
  for (const auto& s : collision_risk_worst) check_series(s, false);
  check_series(grounding_risk, false);
  check_series(scenario_risk, false);
  check_series(sr_star, true);
  check_series(scenario_risk_norm, true);
}

} // namespace seamanship
