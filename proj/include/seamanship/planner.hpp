#pragma once

#include "seamanship/geometry.hpp"
#include "seamanship/risk.hpp"
#include "seamanship/scenario.hpp"
#include "seamanship/types.hpp"

#include <map>
#include <optional>
#include <span>
#include <vector>

namespace seamanship {

struct KinodynamicParams {
  /// Swing rate per meter travelled at full rudder is 1 / (c L), i.e. the
  /// tightest turning radius is c ship lengths.
  double swing_rate_coeff = 3.0;
  double v_min = 0.0; // m/s
  double v_max = 0.0; // m/s
  /// When set, the speed range is [lo, hi] times the own vessel's speed at
  /// the planning time and v_min/v_max are filled in by resolve_for().
  bool speed_relative = true;
  double speed_factor_lo = 0.5;
  double speed_factor_hi = 1.5;

  double swing_rate(double length) const { return 1.0 / (swing_rate_coeff * length); }
  KinodynamicParams resolve_for(double own_speed) const;
  void validate() const;
};

/// How N samples are placed on [lo, hi].
enum class GridSpacing {
  /// lo + (k-1)(hi-lo)/N for k = 1..N: the upper end is never reached.
  HalfOpen,
  /// Evenly spaced including both ends; N = 1 picks the midpoint.
  Inclusive,
};

struct Hyperparameters {
  int n_t = 2;
  int n_alpha = 12;
  int n_v = 3;
  double horizon_T = 600.0; // s
  double tie_eps = 1e-9;
  std::size_t beam_width = 64;
  GridSpacing spacing = GridSpacing::HalfOpen;
  /// Children whose arc enters an obstacle polygon get risk 1.
  bool land_check = true;

  void validate() const;
};

std::vector<double> action_grid(int n, double lo, double hi, GridSpacing spacing);
/// Speed grid; collapses to one speed when v_min == v_max.
std::vector<double> speed_grid(const Hyperparameters& hyper, const KinodynamicParams& kin);
std::vector<double> alpha_grid(const Hyperparameters& hyper);

/// Advances along a constant-curvature arc for dt at the current speed, then
/// sets the speed to v_cmd for the next segment.
VesselState step_kinodynamics(const VesselState& state, double alpha, double v_cmd, double dt,
                              const KinodynamicParams& kin);

/// Samples the arc of one step at most half an obstacle spacing apart and
/// reports whether any sample lies inside an obstacle polygon.
bool arc_enters_obstacle(const ObstacleSet& obstacles, const VesselState& from, double alpha, double v_cmd, double dt,
                         const KinodynamicParams& kin);

struct Decision {
  double alpha = 0.0;
  double speed = 0.0;
};

struct SearchNode {
  VesselState state;
  double scenario_risk = 0.0;
  Decision decision; // action that produced this node; unused for the root
  int parent = -1;
  int depth = 0;
  double turning = 0.0; // sum of |alpha| from the root; breaks ties at the beam cap
};

/// Everything the search needs at the planning time: the own vessel, targets
/// extrapolated at constant velocity, and static obstacles.
struct PlanningScene {
  VesselState ownship;
  double ownship_risk = 0.0; // scenario risk of the recorded state, root of the tree
  std::vector<VesselState> targets;
  std::vector<double> target_end_times; // last recorded time per target
  ObstacleSet obstacles;

  /// Targets predicted to time t.
  std::vector<VesselState> targets_at(double t) const;
};

struct Path {
  std::vector<SearchNode> nodes; // root first
  std::vector<Decision> decisions;
  double path_risk = 0.0;        // max scenario risk over non-root nodes
};

struct PathResult {
  std::vector<Path> paths;
  double sr_star = 0.0;
  std::vector<double> level_min_risk;
  std::size_t nodes_evaluated = 0;
  bool targets_extrapolated = false;
  bool beam_truncated = false;

  const Path& best() const { return paths.front(); }
};

double node_risk(const PlanningScene& scene, const VesselState& state, const DomainParams& domain,
                 const RiskParams& params);

/// Level-synchronous search: every surviving node is expanded over the speed
/// by heading grid; only children within tie_eps of the level minimum
/// survive. Returns all minimum-risk root-to-leaf paths.
PathResult branch_and_bound(const PlanningScene& scene, const Hyperparameters& hyper, const KinodynamicParams& kin,
                            const DomainParams& domain, const RiskParams& params);

/// Scores every action sequence without pruning; the minimum path risk is
/// the exact optimum on the action grid.
PathResult exhaustive_search(const PlanningScene& scene, const Hyperparameters& hyper, const KinodynamicParams& kin,
                             const DomainParams& domain, const RiskParams& params);

PlanningScene make_planning_scene(const Scenario& scenario, const std::string& ownship_id, double t,
                                  const DomainParams& domain, const RiskParams& params);

/// Independent search at each requested time; repeated times are computed once.
std::vector<PathResult> sr_star_series(const Scenario& scenario, const std::string& ownship_id,
                                       std::span<const double> times, const Hyperparameters& hyper,
                                       const KinodynamicParams& kin, const DomainParams& domain,
                                       const RiskParams& params);

/// Re-applies a path's decisions from its root.
std::vector<VesselState> replay(const Path& path, const Hyperparameters& hyper, const KinodynamicParams& kin);

} // namespace seamanship
