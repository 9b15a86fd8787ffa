#pragma once

#include "seamanship/geometry.hpp"
#include "seamanship/types.hpp"

#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace seamanship {

/// How the two directed domain indices of a vessel pair are united.
enum class UnionMode { Max, ProbabilisticOr };

struct RiskParams {
  double kappa = 10.0;        // logistic steepness
  double f50 = 1.0;           // scale factor at which risk is one half
  double horizon_T = 600.0;   // s
  double horizon_step = 30.0; // s
  double arena_radius = 926.0; // m, 1 NM diameter
  double risk_clamp_eps = 1e-6;
  UnionMode union_mode = UnionMode::Max;
  /// Grounding domain index maximised over the horizon instead of instantaneous.
  bool grounding_horizon = false;
  double obstacle_spacing = 50.0; // m
  bool channel_adjust = true;
  double channel_gamma = 0.8;
  /// Channel adjustment never shrinks the beam axis below this fraction.
  double channel_min_fraction = 0.1;
  /// Forward look corridor for channel width; <= 0 means the semi-major axis.
  double channel_corridor = 0.0;

  void validate() const;
};

/// Logistic risk 1 / (1 + exp(kappa (f - f50))), evaluated without overflow.
template <typename Scalar>
Scalar risk_index(Scalar f, Scalar kappa, Scalar f50) {
  using std::exp;
  const Scalar z = kappa * (f - f50);
  if (z > Scalar(0)) {
    const Scalar e = exp(-z);
    return e / (Scalar(1) + e);
  }
  return Scalar(1) / (Scalar(1) + exp(z));
}

inline double risk_index(double f, const RiskParams& params) {
  return risk_index<double>(f, params.kappa, params.f50);
}

/// Risk of `target` being inside `own`'s arena: the logistic index of
/// distance / arena radius.
double arena_risk(const LocalPoint& own, const LocalPoint& target, const RiskParams& params);

/// Maximum over the horizon of the united directed domain indices. The own
/// vessel keeps its speed, the target changes speed at `rate`.
double mutual_collision_risk(const VesselState& own, const VesselState& target, double rate,
                             const DomainParams& domain, const RiskParams& params);
double mutual_collision_risk(const VesselTrack& track_j, const VesselTrack& track_k, double t, double rate,
                             const DomainParams& domain, const RiskParams& params);

/// Mutual risk times the instantaneous arena index.
double overall_collision_risk(const VesselState& own, const VesselState& target, double rate,
                              const DomainParams& domain, const RiskParams& params);
double overall_collision_risk(const VesselTrack& track_j, const VesselTrack& track_k, double t, double rate,
                              const DomainParams& domain, const RiskParams& params);

using Ring = std::vector<LocalPoint>;

struct ObstaclePoint {
  LocalPoint position;
  std::size_t polygon = 0;
};

/// Static obstacles: closed rings plus their boundary discretisation.
class ObstacleSet {
public:
  ObstacleSet() = default;
  /// Rings are closed if needed; boundaries sampled at `spacing`.
  ObstacleSet(std::vector<Ring> polygons, double spacing);

  const std::vector<Ring>& polygons() const { return polygons_; }
  const std::vector<ObstaclePoint>& sampled_points() const { return points_; }
  double spacing() const { return spacing_; }
  bool empty() const { return polygons_.empty(); }

  std::vector<LocalPoint> points_in_arena(const ArenaSpec& arena) const;
  /// True when the point lies inside any polygon (even-odd rule).
  bool contains(const LocalPoint& point) const;

private:
  std::vector<Ring> polygons_;
  std::vector<ObstaclePoint> points_;
  double spacing_ = 50.0;
};

bool point_in_ring(const Ring& ring, const LocalPoint& point);

/// Boundary points at most `spacing` apart, one polygon at a time, starting
/// at each vertex. Closing vertex of a ring is not repeated.
std::vector<ObstaclePoint> discretize_boundaries(const std::vector<Ring>& polygons, double spacing);

std::vector<LocalPoint> sample_obstacle_points(const std::vector<Ring>& polygons, const ArenaSpec& arena,
                                               double spacing);

struct GroundingRisk {
  std::vector<double> per_point;
  double max = 0.0;
};

GroundingRisk grounding_risk(const VesselState& own, std::span<const LocalPoint> obstacle_points,
                             const DomainParams& domain, const RiskParams& params);

/// Narrows the beam axis to gamma * W / 2 when the domain is wider than the
/// channel W measured across the forward corridor.
DomainSpec adjust_domain_for_channel(const DomainSpec& domain, const VesselState& own,
                                     std::span<const LocalPoint> obstacle_points, const RiskParams& params);

/// SR = 1 - (1 - gr_max) * prod(1 - CR_k), evaluated as the recursive union.
double compose_scenario_risk(std::span<const double> collision_risks, double gr_max);

struct ScenarioRisk {
  std::vector<double> collision; // one per target
  double grounding = 0.0;
  double scenario = 0.0;
};

/// Deterministic collision risk against every target plus the maximum
/// grounding risk over obstacle points inside the arena.
ScenarioRisk evaluate_scenario_risk(const VesselState& own, std::span<const VesselState> targets,
                                    const ObstacleSet& obstacles, const DomainParams& domain,
                                    const RiskParams& params);

/// Per-timestep risks of one vessel.
struct RiskSeries {
  std::string vessel_id;
  std::vector<double> times;
  std::vector<std::string> target_ids;
  std::vector<std::vector<double>> collision_risk;       // [target][time]
  std::vector<std::vector<double>> collision_risk_wavg;  // empty without a speed model
  std::vector<std::vector<double>> collision_risk_worst; // empty without a speed model
  std::vector<double> grounding_risk;
  std::vector<double> scenario_risk;
  std::vector<double> sr_star;          // empty when not computed
  std::vector<double> scenario_risk_norm;

  void validate() const;
};

} // namespace seamanship
