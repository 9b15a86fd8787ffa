#include "doctest.h"
#include "oracles.hpp"

#include "seamanship/planner.hpp"

#include <random>

using namespace seamanship;

namespace {

KinodynamicParams fixed_speeds(double lo, double hi) {
  KinodynamicParams k;
  k.speed_relative = false;
  k.v_min = lo;
  k.v_max = hi;
  return k;
}

} // namespace

TEST_CASE("action grids") {
  const auto half = action_grid(4, -1.0, 1.0, GridSpacing::HalfOpen);
  REQUIRE(half.size() == 4);
  CHECK(half[0] == -1.0);
  CHECK(half[1] == -0.5);
  CHECK(half[2] == 0.0);
  CHECK(half[3] == 0.5);

  const auto incl = action_grid(3, -1.0, 1.0, GridSpacing::Inclusive);
  CHECK(incl == std::vector<double>{-1.0, 0.0, 1.0});
  CHECK(action_grid(1, 2.0, 4.0, GridSpacing::Inclusive) == std::vector<double>{3.0});
  CHECK_THROWS_AS(action_grid(0, 0.0, 1.0, GridSpacing::HalfOpen), ConfigError);

  Hyperparameters h;
  h.n_v = 3;
  CHECK(speed_grid(h, fixed_speeds(4.0, 4.0)).size() == 1);
  CHECK(speed_grid(h, fixed_speeds(3.0, 6.0)).size() == 3);
}

TEST_CASE("step_kinodynamics") {
  const KinodynamicParams kin = fixed_speeds(0.0, 10.0);
  const VesselState s = oracle::vessel(100, -50, 37, 6.0, 80.0);

  SUBCASE("straight line") {
    const VesselState n = step_kinodynamics(s, 0.0, 6.0, 50.0, kin);
    CHECK(n.heading == s.heading);
    CHECK((n.position - s.position - 300.0 * s.direction()).norm() < 1e-9);
    CHECK(n.time == 50.0);
  }
  SUBCASE("small turns approach the straight line") {
    const VesselState straight = step_kinodynamics(s, 0.0, 6.0, 100.0, kin);
    // The lateral offset is the arc's d^2 k / 2 all the way down to zero.
    for (double a : {1e-14, -1e-10, 1e-8, 1e-6, -2e-6, 1e-5, 1e-4}) {
      const VesselState n = step_kinodynamics(s, a, 6.0, 100.0, kin);
      const double lateral = 0.5 * 600.0 * 600.0 * std::abs(a) * kin.swing_rate(80.0);
      CHECK((n.position - straight.position).norm() == doctest::Approx(lateral).epsilon(1e-6));
    }
  }
  SUBCASE("arc geometry") {
    for (double a : {-1.0, -0.3, 0.05, 0.7, 1.0}) {
      const double radius = 1.0 / (std::abs(a) * kin.swing_rate(s.length));
      const double turn = 6.0 * 40.0 * a * kin.swing_rate(s.length);
      const VesselState n = step_kinodynamics(s, a, 6.0, 40.0, kin);
      // Chord of an arc of length v dt on a circle of that radius.
      const double chord = 2.0 * radius * std::sin(std::abs(turn) / 2.0);
      CHECK(std::abs((n.position - s.position).norm() - chord) < 1e-9);
      CHECK(std::abs(heading_difference(s.heading, n.heading) - turn) < 1e-12);
      // Positive alpha turns to starboard.
      const Eigen::Vector2d body = to_body_frame<double>(n.position - s.position, s.heading);
      CHECK((body.y() > 0.0) == (a > 0.0));
    }
  }
  SUBCASE("full circle closes") {
    const double radius = 1.0 / kin.swing_rate(s.length);
    const double period = kTwoPi * radius / s.speed;
    const VesselState n = step_kinodynamics(s, 1.0, 6.0, period, kin);
    CHECK((n.position - s.position).norm() < 1e-6 * radius);
    VesselState m = s;
    for (int i = 0; i < 16; ++i) m = step_kinodynamics(m, -1.0, 6.0, period / 16.0, kin);
    CHECK((m.position - s.position).norm() < 1e-6 * radius);
  }
  SUBCASE("speed command applies after the step") {
    const VesselState n = step_kinodynamics(s, 0.0, 3.0, 10.0, kin);
    CHECK(n.speed == 3.0);
    CHECK((n.position - s.position).norm() == doctest::Approx(60.0));
    CHECK(step_kinodynamics(s, 0.0, 30.0, 10.0, kin).speed == 10.0);
  }
  CHECK_THROWS_AS(step_kinodynamics(s, 0.0, 6.0, 0.0, kin), ConfigError);
}

TEST_CASE("arc length of a step equals v dt") {
  const KinodynamicParams kin = fixed_speeds(0.0, 10.0);
  const VesselState s = oracle::vessel(0, 0, 200, 4.5, 60.0);
  for (double a : {-1.0, -0.5, 0.2, 0.9}) {
    // Arc length by fine chords.
    VesselState prev = s;
    double length = 0.0;
    const int m = 20000;
    for (int k = 1; k <= m; ++k) {
      const VesselState cur = step_kinodynamics(s, a, 4.5, 120.0 * k / m, kin);
      length += (cur.position - prev.position).norm();
      prev = cur;
    }
    CHECK(length == doctest::Approx(4.5 * 120.0).epsilon(1e-8));
  }
}

TEST_CASE("search with nothing around is risk free and goes straight") {
  PlanningScene scene;
  scene.ownship = oracle::vessel(0, 0, 0, 5.0, 50.0);
  Hyperparameters h;
  h.n_t = 2;
  h.n_alpha = 4;
  h.n_v = 1;
  const PathResult r = branch_and_bound(scene, h, KinodynamicParams{}, DomainParams{}, RiskParams{});
  CHECK(r.sr_star == 0.0);
  bool straight = false;
  for (const Path& p : r.paths) {
    bool all_zero = true;
    for (const Decision& d : p.decisions) all_zero = all_zero && d.alpha == 0.0;
    straight = straight || all_zero;
  }
  CHECK(straight);
  CHECK(exhaustive_search(scene, h, KinodynamicParams{}, DomainParams{}, RiskParams{}).sr_star == 0.0);
}

TEST_CASE("branch and bound against exhaustive enumeration") {
  std::mt19937_64 rng(2024);
  const DomainParams d;
  const RiskParams p;
  const KinodynamicParams kin;
  int divergent = 0;
  for (int scene_i = 0; scene_i < 8; ++scene_i) {
    const PlanningScene scene = oracle::toy_scene(rng, scene_i % 2 == 1);
    Hyperparameters h;
    h.n_alpha = 3;
    h.n_v = 2;
    h.n_t = 1;
    const PathResult b1 = branch_and_bound(scene, h, kin, d, p);
    const PathResult e1 = exhaustive_search(scene, h, kin, d, p);
    CHECK(b1.sr_star == e1.sr_star);

    h.n_t = 2;
    const PathResult b2 = branch_and_bound(scene, h, kin, d, p);
    const PathResult e2 = exhaustive_search(scene, h, kin, d, p);
    CHECK(e2.nodes_evaluated == 6 + 36);
    CHECK(e2.sr_star <= b2.sr_star);
    if (b2.sr_star != e2.sr_star) ++divergent;

    for (const Path& path : b2.paths) {
      double m = 0.0;
      for (std::size_t i = 1; i < path.nodes.size(); ++i) m = std::max(m, path.nodes[i].scenario_risk);
      CHECK(path.path_risk == m);
      CHECK(path.path_risk >= b2.sr_star);
      const std::vector<VesselState> again = replay(path, h, kin);
      REQUIRE(again.size() == path.nodes.size());
      for (std::size_t i = 0; i < again.size(); ++i)
        CHECK((again[i].position - path.nodes[i].state.position).norm() < 1e-9);
    }
  }
  MESSAGE("N_T = 2 divergent scenes: " << divergent << " of 8");
}

TEST_CASE("refining the action grid by a superset never raises the exhaustive optimum") {
  std::mt19937_64 rng(77);
  const KinodynamicParams kin;
  for (int i = 0; i < 4; ++i) {
    const PlanningScene scene = oracle::toy_scene(rng, i % 2 == 0);
    Hyperparameters coarse;
    coarse.n_t = 2;
    coarse.n_alpha = 3;
    coarse.n_v = 1;
    Hyperparameters fine = coarse;
    fine.n_alpha = 6; // half-open grid of 6 contains the grid of 3
    const double c = exhaustive_search(scene, coarse, kin, DomainParams{}, RiskParams{}).sr_star;
    const double f = exhaustive_search(scene, fine, kin, DomainParams{}, RiskParams{}).sr_star;
    CHECK(f <= c);
  }
}

TEST_CASE("land check keeps paths off obstacles") {
  PlanningScene scene;
  scene.ownship = oracle::vessel(0, 0, 0, 5.0, 50.0);
  // A wall across the track 300 m ahead, too wide to go around in one step.
  scene.obstacles = ObstacleSet({{LocalPoint(300, -5000), LocalPoint(300, 5000), LocalPoint(400, 5000),
                                  LocalPoint(400, -5000)}},
                                50.0);
  Hyperparameters h;
  h.n_t = 1;
  h.n_alpha = 1; // straight ahead only
  h.n_v = 1;
  h.horizon_T = 120.0; // 600 m at 5 m/s, ending beyond the wall
  const PathResult with = branch_and_bound(scene, h, KinodynamicParams{}, DomainParams{}, RiskParams{});
  // HalfOpen n_alpha = 1 is a hard port turn; use the inclusive midpoint to go straight.
  h.spacing = GridSpacing::Inclusive;
  const PathResult straight = branch_and_bound(scene, h, KinodynamicParams{}, DomainParams{}, RiskParams{});
  CHECK(straight.sr_star == 1.0);
  h.land_check = false;
  const PathResult through = branch_and_bound(scene, h, KinodynamicParams{}, DomainParams{}, RiskParams{});
  CHECK(through.sr_star < 1.0);
  CHECK(with.sr_star <= 1.0);
}

TEST_CASE("targets are extrapolated at constant velocity past their data") {
  PlanningScene scene;
  scene.ownship = oracle::vessel(0, 0, 0, 5.0, 50.0, 100.0);
  scene.targets.push_back(oracle::vessel(2000, 0, 180, 4.0, 50.0, 100.0));
  scene.target_end_times.push_back(200.0);
  const std::vector<VesselState> at = scene.targets_at(400.0);
  CHECK(at[0].north() == doctest::Approx(2000.0 - 4.0 * 300.0));
  Hyperparameters h;
  h.n_t = 2;
  h.n_alpha = 2;
  h.n_v = 1;
  CHECK(branch_and_bound(scene, h, KinodynamicParams{}, DomainParams{}, RiskParams{}).targets_extrapolated);
}

TEST_CASE("parameter validation") {
  Hyperparameters h;
  h.n_t = 0;
  CHECK_THROWS_AS(h.validate(), ConfigError);
  KinodynamicParams k = fixed_speeds(5.0, 4.0);
  CHECK_THROWS_AS(k.validate(), ConfigError);
  k.swing_rate_coeff = 0.0;
  CHECK_THROWS_AS(k.validate(), ConfigError);

  PlanningScene scene;
  scene.ownship = oracle::vessel(0, 0, 0, 5.0);
  Hyperparameters big;
  big.n_t = 4;
  big.n_alpha = 12;
  big.n_v = 3;
  CHECK_THROWS_AS(exhaustive_search(scene, big, KinodynamicParams{}, DomainParams{}, RiskParams{}), ConfigError);
}
