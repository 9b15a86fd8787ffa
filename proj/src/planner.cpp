#include "seamanship/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace seamanship {

void KinodynamicParams::validate() const {
  if (!(swing_rate_coeff > 0.0)) throw ConfigError("kinodynamics.swing_rate_coeff must be positive");
  if (speed_relative) {
    if (!(speed_factor_lo >= 0.0) || !(speed_factor_lo <= speed_factor_hi))
      throw ConfigError("kinodynamics speed factors need 0 <= lo <= hi");
  } else if (!(v_min >= 0.0) || !(v_min <= v_max)) {
    throw ConfigError("kinodynamics speeds need 0 <= v_min <= v_max");
  }
}

KinodynamicParams KinodynamicParams::resolve_for(double own_speed) const {
  if (!speed_relative) return *this;
  KinodynamicParams out = *this;
  out.speed_relative = false;
  out.v_min = speed_factor_lo * own_speed;
  out.v_max = speed_factor_hi * own_speed;
  return out;
}

void Hyperparameters::validate() const {
  if (n_t < 1 || n_alpha < 1 || n_v < 1) throw ConfigError("search grid sizes must be at least 1");
  if (!(horizon_T > 0.0)) throw ConfigError("search.horizon_T must be positive");
  if (!(tie_eps >= 0.0)) throw ConfigError("search.tie_eps must be non-negative");
  if (beam_width < 1) throw ConfigError("search.beam_width must be at least 1");
}

std::vector<double> action_grid(int n, double lo, double hi, GridSpacing spacing) {
  if (n < 1) throw ConfigError("action grid needs at least one sample");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    if (spacing == GridSpacing::HalfOpen)
      grid.push_back(lo + static_cast<double>(k) * (hi - lo) / static_cast<double>(n));
    else if (n == 1)
      grid.push_back(0.5 * (lo + hi));
    else
      grid.push_back(lo + static_cast<double>(k) * (hi - lo) / static_cast<double>(n - 1));
  }
  return grid;
}

std::vector<double> speed_grid(const Hyperparameters& hyper, const KinodynamicParams& kin) {
  if (kin.v_min == kin.v_max) return {kin.v_min};
  return action_grid(hyper.n_v, kin.v_min, kin.v_max, hyper.spacing);
}

std::vector<double> alpha_grid(const Hyperparameters& hyper) { return action_grid(hyper.n_alpha, -1.0, 1.0, hyper.spacing); }

VesselState step_kinodynamics(const VesselState& state, double alpha, double v_cmd, double dt,
                              const KinodynamicParams& kin) {
  if (!(dt > 0.0)) throw ConfigError("kinodynamic step needs dt > 0");
  alpha = std::clamp(alpha, -1.0, 1.0);
  const double curvature = alpha * kin.swing_rate(state.length); // rad per meter
  const double distance = state.speed * dt;
  const double turn = distance * curvature;

  Eigen::Vector2d body;
  if (std::abs(turn) < 1e-4) {
    // Series form of the arc; the closed form loses digits as curvature -> 0.
    // Exact at alpha = 0 and continuous through it.
    const double t2 = turn * turn;
    body = {distance * (1.0 - t2 / 6.0 + t2 * t2 / 120.0), distance * turn * (0.5 - t2 / 24.0)};
  } else {
    const double half = std::sin(0.5 * turn);
    body = {std::sin(turn) / curvature, 2.0 * half * half / curvature};
  }

  VesselState next = state;
  next.time = state.time + dt;
  next.position = state.position + from_body_frame<double>(body, state.heading);
  next.heading = wrap_heading(state.heading + turn);
  next.speed = kin.speed_relative ? std::max(v_cmd, 0.0) : std::clamp(v_cmd, kin.v_min, kin.v_max);
  return next;
}

bool arc_enters_obstacle(const ObstacleSet& obstacles, const VesselState& from, double alpha, double v_cmd, double dt,
                         const KinodynamicParams& kin) {
  if (obstacles.empty()) return false;
  const double distance = from.speed * dt;
  const int samples = std::max(1, static_cast<int>(std::ceil(distance / (0.5 * obstacles.spacing()))));
  for (int k = 1; k <= samples; ++k) {
    const double sub = dt * static_cast<double>(k) / samples;
    if (obstacles.contains(step_kinodynamics(from, alpha, v_cmd, sub, kin).position)) return true;
  }
  return false;
}

std::vector<VesselState> PlanningScene::targets_at(double t) const {
  std::vector<VesselState> out;
  out.reserve(targets.size());
  for (const VesselState& target : targets) out.push_back(predict_state(target, std::max(t - target.time, 0.0), 0.0));
  return out;
}

double node_risk(const PlanningScene& scene, const VesselState& state, const DomainParams& domain,
                 const RiskParams& params) {
  const std::vector<VesselState> targets = scene.targets_at(state.time);
  return evaluate_scenario_risk(state, targets, scene.obstacles, domain, params).scenario;
}

namespace {

bool beyond_target_data(const PlanningScene& scene, double t) {
  return std::any_of(scene.target_end_times.begin(), scene.target_end_times.end(),
                     [t](double end) { return t > end + 1e-9; });
}

Path build_path(const std::vector<SearchNode>& arena, int leaf) {
  Path path;
  for (int i = leaf; i >= 0; i = arena[static_cast<std::size_t>(i)].parent) path.nodes.push_back(arena[static_cast<std::size_t>(i)]);
  std::reverse(path.nodes.begin(), path.nodes.end());
  for (std::size_t i = 1; i < path.nodes.size(); ++i) {
    path.decisions.push_back(path.nodes[i].decision);
    path.path_risk = std::max(path.path_risk, path.nodes[i].scenario_risk);
  }
  return path;
}

} // namespace

PathResult branch_and_bound(const PlanningScene& scene, const Hyperparameters& hyper, const KinodynamicParams& kin,
                            const DomainParams& domain, const RiskParams& params) {
  hyper.validate();
  kin.validate();
  const KinodynamicParams bounds = kin.resolve_for(scene.ownship.speed);
  const std::vector<double> speeds = speed_grid(hyper, bounds);
  const std::vector<double> alphas = alpha_grid(hyper);
  const double dt = hyper.horizon_T / hyper.n_t;

  PathResult result;
  std::vector<SearchNode> arena;
  arena.push_back({scene.ownship, scene.ownship_risk, {}, -1, 0});
  std::vector<int> frontier{0};

  for (int level = 1; level <= hyper.n_t; ++level) {
    std::vector<SearchNode> children;
    children.reserve(frontier.size() * speeds.size() * alphas.size());
    for (int parent : frontier) {
      const VesselState& from = arena[static_cast<std::size_t>(parent)].state;
      for (double v : speeds) {
        for (double alpha : alphas) {
          SearchNode child;
          child.state = step_kinodynamics(from, alpha, v, dt, bounds);
          child.scenario_risk = hyper.land_check && arc_enters_obstacle(scene.obstacles, from, alpha, v, dt, bounds)
                                    ? 1.0
                                    : node_risk(scene, child.state, domain, params);
          child.decision = {alpha, v};
          child.parent = parent;
          child.depth = level;
          child.turning = arena[static_cast<std::size_t>(parent)].turning + std::abs(alpha);
          children.push_back(child);
        }
      }
    }
    result.nodes_evaluated += children.size();
    if (beyond_target_data(scene, children.front().state.time)) result.targets_extrapolated = true;

    double level_min = std::numeric_limits<double>::infinity();
    for (const SearchNode& c : children) level_min = std::min(level_min, c.scenario_risk);
    result.level_min_risk.push_back(level_min);

    std::vector<std::size_t> tied;
    for (std::size_t i = 0; i < children.size(); ++i)
      if (children[i].scenario_risk <= level_min + hyper.tie_eps) tied.push_back(i);
    if (tied.size() > hyper.beam_width) {
      // Keep the least manoeuvring survivors; stable so equal effort keeps grid order.
      std::stable_sort(tied.begin(), tied.end(),
                       [&](std::size_t a, std::size_t b) { return children[a].turning < children[b].turning; });
      tied.resize(hyper.beam_width);
      std::sort(tied.begin(), tied.end());
      result.beam_truncated = true;
    }
    frontier.clear();
    for (std::size_t i : tied) {
      frontier.push_back(static_cast<int>(arena.size()));
      arena.push_back(children[i]);
    }
  }

  std::vector<Path> paths;
  for (int leaf : frontier) paths.push_back(build_path(arena, leaf));
  result.sr_star = std::numeric_limits<double>::infinity();
  for (const Path& p : paths) result.sr_star = std::min(result.sr_star, p.path_risk);
  for (Path& p : paths)
    if (p.path_risk <= result.sr_star + hyper.tie_eps) result.paths.push_back(std::move(p));
  return result;
}

namespace {

struct ExhaustiveSearch {
  const PlanningScene& scene;
  const DomainParams& domain;
  const RiskParams& params;
  const KinodynamicParams& bounds;
  const std::vector<double>& speeds;
  const std::vector<double>& alphas;
  double dt;
  int levels;
  bool land_check = true;

  ExhaustiveSearch(const PlanningScene& scene_, const DomainParams& domain_, const RiskParams& params_,
                   const KinodynamicParams& bounds_, const std::vector<double>& speeds_,
                   const std::vector<double>& alphas_, double dt_, int levels_)
      : scene(scene_), domain(domain_), params(params_), bounds(bounds_), speeds(speeds_), alphas(alphas_), dt(dt_),
        levels(levels_) {}

  std::vector<SearchNode> stack;
  double best = std::numeric_limits<double>::infinity();
  std::vector<SearchNode> best_nodes;
  std::size_t evaluated = 0;
  bool extrapolated = false;

  void run(double running_max) {
    const int depth = static_cast<int>(stack.size()) - 1;
    if (depth == levels) {
      if (running_max < best) {
        best = running_max;
        best_nodes = stack;
      }
      return;
    }
    const VesselState from = stack.back().state;
    for (double v : speeds) {
      for (double alpha : alphas) {
        SearchNode child;
        child.state = step_kinodynamics(from, alpha, v, dt, bounds);
        child.scenario_risk = land_check && arc_enters_obstacle(scene.obstacles, from, alpha, v, dt, bounds)
                                  ? 1.0
                                  : node_risk(scene, child.state, domain, params);
        child.decision = {alpha, v};
        child.parent = depth;
        child.depth = depth + 1;
        ++evaluated;
        if (beyond_target_data(scene, child.state.time)) extrapolated = true;
        stack.push_back(child);
        run(std::max(running_max, child.scenario_risk));
        stack.pop_back();
      }
    }
  }
};

} // namespace

PathResult exhaustive_search(const PlanningScene& scene, const Hyperparameters& hyper, const KinodynamicParams& kin,
                             const DomainParams& domain, const RiskParams& params) {
  hyper.validate();
  kin.validate();
  const KinodynamicParams bounds = kin.resolve_for(scene.ownship.speed);
  const std::vector<double> speeds = speed_grid(hyper, bounds);
  const std::vector<double> alphas = alpha_grid(hyper);
  const double branching = static_cast<double>(speeds.size() * alphas.size());
  if (std::pow(branching, hyper.n_t) > 1e6) throw ConfigError("exhaustive search exceeds 1e6 action sequences");

  ExhaustiveSearch search(scene, domain, params, bounds, speeds, alphas, hyper.horizon_T / hyper.n_t, hyper.n_t);
  search.land_check = hyper.land_check;
  search.stack.push_back({scene.ownship, scene.ownship_risk, {}, -1, 0});
  search.run(0.0);

  PathResult result;
  Path path;
  path.nodes = search.best_nodes;
  for (std::size_t i = 1; i < path.nodes.size(); ++i) path.decisions.push_back(path.nodes[i].decision);
  path.path_risk = search.best;
  result.sr_star = search.best;
  result.paths.push_back(std::move(path));
  result.nodes_evaluated = search.evaluated;
  result.targets_extrapolated = search.extrapolated;
  return result;
}

PlanningScene make_planning_scene(const Scenario& scenario, const std::string& ownship_id, double t,
                                  const DomainParams& domain, const RiskParams& params) {
  const VesselTrack& own = scenario.at(ownship_id);
  PlanningScene scene;
  scene.ownship = own.state_at(t);
  for (const VesselTrack& track : scenario.tracks) {
    if (track.id() == ownship_id || !track.covers(t)) continue;
    scene.targets.push_back(track.state_at(t));
    scene.target_end_times.push_back(track.end_time());
  }
  scene.obstacles = scenario.obstacles;
  scene.ownship_risk = evaluate_scenario_risk(scene.ownship, scene.targets, scene.obstacles, domain, params).scenario;
  return scene;
}

std::vector<PathResult> sr_star_series(const Scenario& scenario, const std::string& ownship_id,
                                       std::span<const double> times, const Hyperparameters& hyper,
                                       const KinodynamicParams& kin, const DomainParams& domain,
                                       const RiskParams& params) {
  std::map<double, PathResult> cache;
  std::vector<PathResult> out;
  out.reserve(times.size());
  for (double t : times) {
    auto it = cache.find(t);
    if (it == cache.end()) {
      const PlanningScene scene = make_planning_scene(scenario, ownship_id, t, domain, params);
      it = cache.emplace(t, branch_and_bound(scene, hyper, kin, domain, params)).first;
    }
    out.push_back(it->second);
  }
  return out;
}

std::vector<VesselState> replay(const Path& path, const Hyperparameters& hyper, const KinodynamicParams& kin) {
  std::vector<VesselState> states;
  if (path.nodes.empty()) return states;
  const KinodynamicParams bounds = kin.resolve_for(path.nodes.front().state.speed);
  const double dt = hyper.horizon_T / hyper.n_t;
  states.push_back(path.nodes.front().state);
  for (const Decision& d : path.decisions) states.push_back(step_kinodynamics(states.back(), d.alpha, d.speed, dt, bounds));
  return states;
}

} // namespace seamanship
