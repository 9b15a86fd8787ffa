#include "doctest.h"
#include "oracles.hpp"

#include "seamanship/risk.hpp"

#include <algorithm>
#include <random>

using namespace seamanship;

TEST_CASE("risk_index values") {
  const RiskParams p;
  CHECK(risk_index(1.0, p) == 0.5);
  CHECK(risk_index(0.0, p) == doctest::Approx(1.0 / (1.0 + std::exp(-10.0))).epsilon(1e-15));
  CHECK(risk_index(0.0, p) == doctest::Approx(0.99995).epsilon(1e-5));
  CHECK(risk_index(1.5, p) == doctest::Approx(1.0 / (1.0 + std::exp(5.0))).epsilon(1e-15));
  CHECK(risk_index(1.5, p) == doctest::Approx(0.006693).epsilon(1e-4));
  // No overflow for huge arguments.
  CHECK(risk_index(1e6, p) == 0.0);
  CHECK(risk_index(-1e6, p) == 1.0);
  for (double f = 0.0; f < 10.0; f += 0.01) CHECK(risk_index(f + 0.01, p) < risk_index(f, p));
}

TEST_CASE("arena risk is the logistic of distance over radius") {
  const RiskParams p;
  CHECK(arena_risk(LocalPoint(0, 0), LocalPoint(0, 0), p) == doctest::Approx(risk_index(0.0, p)));
  CHECK(arena_risk(LocalPoint(0, 0), LocalPoint(p.arena_radius, 0), p) == 0.5);
  CHECK(arena_risk(LocalPoint(0, 0), LocalPoint(0, 5 * p.arena_radius), p) < 1e-15);
}

TEST_CASE("mutual and overall collision risk") {
  const DomainParams d;
  const RiskParams p;
  SUBCASE("diverging vessels 20 km apart") {
    const VesselState a = oracle::vessel(0, 0, 180, 5.0);
    const VesselState b = oracle::vessel(20000, 0, 0, 5.0);
    CHECK(mutual_collision_risk(a, b, 0.0, d, p) < 0.01);
    CHECK(overall_collision_risk(a, b, 0.0, d, p) < 1e-12);
  }
  SUBCASE("target inside the domain is bounded below by the instantaneous index") {
    const VesselState a = oracle::vessel(0, 0, 0, 0.0, 100.0);
    // a = 400, offset 100: target 250 m ahead is at f = 0.5 in front of the center.
    const VesselState b = oracle::vessel(250, 0, 90, 0.0, 10.0);
    const double f = scale_factor(make_domain(a, d), b.position, a.position);
    CHECK(f == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mutual_collision_risk(a, b, 0.0, d, p) >= 1.0 / (1.0 + std::exp(-5.0)));
  }
  SUBCASE("symmetry and product bound") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
      const VesselState a = oracle::vessel(0, 0, 360 * u(rng), 8 * u(rng), 20 + 150 * u(rng));
      const VesselState b = oracle::vessel(3000 * u(rng) - 1500, 3000 * u(rng) - 1500, 360 * u(rng), 8 * u(rng),
                                           20 + 150 * u(rng));
      const double r_ab = mutual_collision_risk(a, b, 0.0, d, p);
      CHECK(r_ab == doctest::Approx(mutual_collision_risk(b, a, 0.0, d, p)).epsilon(1e-14));
      const double cr = overall_collision_risk(a, b, 0.0, d, p);
      CHECK(cr <= r_ab);
      CHECK(cr == doctest::Approx(r_ab * arena_risk(a.position, b.position, p)).epsilon(1e-14));
      CHECK(cr >= 0.0);
    }
  }
  SUBCASE("track overloads refuse times outside the tracks") {
    const VesselTrack a = oracle::straight_track("a", 0, 0, 0, 5.0, 0, 100);
    const VesselTrack b = oracle::straight_track("b", 500, 0, 180, 5.0, 0, 100);
    CHECK_NOTHROW(overall_collision_risk(a, b, 50.0, 0.0, d, p));
    CHECK_THROWS_AS(overall_collision_risk(a, b, 150.0, 0.0, d, p), OutOfRangeError);
  }
}

TEST_CASE("probabilistic OR union is never below the max union") {
  const DomainParams d;
  RiskParams max_p, or_p;
  or_p.union_mode = UnionMode::ProbabilisticOr;
  const VesselState a = oracle::vessel(0, 0, 0, 5.0, 80.0);
  const VesselState b = oracle::vessel(900, 60, 180, 5.0, 80.0);
  CHECK(mutual_collision_risk(a, b, 0.0, d, or_p) >= mutual_collision_risk(a, b, 0.0, d, max_p));
}

TEST_CASE("obstacle sampling") {
  const Ring square{LocalPoint(0, 0), LocalPoint(0, 100), LocalPoint(100, 100), LocalPoint(100, 0), LocalPoint(0, 0)};
  ArenaSpec arena;
  arena.radius = 926.0;
  CHECK(sample_obstacle_points({square}, arena, 25.0).size() == 16);
  CHECK(sample_obstacle_points({}, arena, 25.0).empty());

  arena.center = LocalPoint(5000, 5000);
  CHECK(sample_obstacle_points({square}, arena, 25.0).empty());

  // Straddling the arena edge: compare against a point-by-point filter.
  arena.center = LocalPoint(-60, 50);
  arena.radius = 100.0;
  const std::vector<LocalPoint> kept = sample_obstacle_points({square}, arena, 25.0);
  std::size_t expected = 0;
  for (const ObstaclePoint& p : discretize_boundaries({square}, 25.0))
    if ((p.position - arena.center).norm() < arena.radius) ++expected;
  CHECK(kept.size() == expected);
  CHECK(kept.size() > 0);
  CHECK(kept.size() < 16);
  for (const LocalPoint& p : kept) CHECK((p - arena.center).norm() < arena.radius);
}

TEST_CASE("discretised points lie on the ring and are at most one spacing apart") {
  const Ring tri{LocalPoint(0, 0), LocalPoint(0, 130), LocalPoint(75, 40)};
  const ObstacleSet set({tri}, 20.0);
  const Ring& closed = set.polygons().front();
  CHECK(closed.front() == closed.back());
  const auto& pts = set.sampled_points();
  REQUIRE(pts.size() > 3);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const LocalPoint& a = pts[i].position;
    const LocalPoint& b = pts[(i + 1) % pts.size()].position;
    CHECK((b - a).norm() <= 20.0 + 1e-9);
    double best = 1e9;
    for (std::size_t k = 0; k + 1 < closed.size(); ++k) {
      const LocalPoint e = closed[k + 1] - closed[k];
      const double s = std::clamp((a - closed[k]).dot(e) / e.squaredNorm(), 0.0, 1.0);
      best = std::min(best, (closed[k] + s * e - a).norm());
    }
    CHECK(best < 1e-9);
  }
}

TEST_CASE("point in polygon") {
  const ObstacleSet set({{LocalPoint(0, 0), LocalPoint(0, 10), LocalPoint(10, 10), LocalPoint(10, 0)}}, 5.0);
  CHECK(set.contains(LocalPoint(5, 5)));
  CHECK_FALSE(set.contains(LocalPoint(15, 5)));
  CHECK_FALSE(set.contains(LocalPoint(-1, -1)));
  CHECK_FALSE(point_in_ring({}, LocalPoint(0, 0)));
}

TEST_CASE("grounding risk") {
  const DomainParams d;
  const RiskParams p;
  const VesselState own = oracle::vessel(0, 0, 0, 3.0, 60.0);
  CHECK(grounding_risk(own, {}, d, p).max == 0.0);

  const std::vector<LocalPoint> at_own{own.position};
  const GroundingRisk at = grounding_risk(own, at_own, d, p);
  CHECK(at.max == doctest::Approx(risk_index(0.0, p) * risk_index(0.0, p)).epsilon(1e-14));

  // Adding points never lowers the maximum.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-900.0, 900.0);
  std::vector<LocalPoint> pts;
  double prev = 0.0;
  RiskParams no_channel = p;
  no_channel.channel_adjust = false;
  for (int i = 0; i < 60; ++i) {
    pts.emplace_back(u(rng), u(rng));
    const double m = grounding_risk(own, pts, d, no_channel).max;
    CHECK(m >= prev);
    prev = m;
  }
}

TEST_CASE("channel adjustment") {
  const RiskParams p;
  const VesselState own = oracle::vessel(0, 0, 0, 0.0, 100.0);
  const DomainSpec d = make_domain(own, DomainParams{});
  REQUIRE(d.semi_minor == doctest::Approx(160.0));

  const DomainSpec open = adjust_domain_for_channel(d, own, {}, p);
  CHECK(open.semi_minor == d.semi_minor);

  const std::vector<LocalPoint> banks{LocalPoint(50, -100), LocalPoint(50, 100)};
  CHECK(adjust_domain_for_channel(d, own, banks, p).semi_minor == doctest::Approx(80.0).epsilon(1e-14));
  CHECK(adjust_domain_for_channel(d, own, banks, p).semi_major == d.semi_major);

  const std::vector<LocalPoint> wide{LocalPoint(50, -170), LocalPoint(50, 170)};
  CHECK(adjust_domain_for_channel(d, own, wide, p).semi_minor == d.semi_minor);

  // One bank only: the other side counts as open water out to the arena edge.
  const std::vector<LocalPoint> one_side{LocalPoint(50, 10)};
  CHECK(adjust_domain_for_channel(d, own, one_side, p).semi_minor == d.semi_minor);

  // Points astern are outside the forward corridor.
  const std::vector<LocalPoint> astern{LocalPoint(-50, -100), LocalPoint(-50, 100)};
  CHECK(adjust_domain_for_channel(d, own, astern, p).semi_minor == d.semi_minor);

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-400.0, 400.0);
  for (int i = 0; i < 100; ++i) {
    const std::vector<LocalPoint> pts{LocalPoint(u(rng), u(rng)), LocalPoint(u(rng), u(rng))};
    CHECK(adjust_domain_for_channel(d, own, pts, p).semi_minor <= d.semi_minor);
  }
}

TEST_CASE("compose_scenario_risk") {
  const std::vector<double> one{0.3};
  CHECK(compose_scenario_risk(one, 0.0) == doctest::Approx(0.3).epsilon(1e-15));
  const std::vector<double> halves{0.5, 0.5};
  CHECK(compose_scenario_risk(halves, 0.0) == doctest::Approx(0.75).epsilon(1e-15));
  const std::vector<double> mixed{0.3, 0.5};
  CHECK(compose_scenario_risk(mixed, 0.2) == doctest::Approx(0.72).epsilon(1e-14));
  CHECK(compose_scenario_risk({}, 0.0) == 0.0);

  const std::vector<double> bad{0.2, 1.5};
  CHECK_THROWS_AS(compose_scenario_risk(bad, 0.0), InputError);
  CHECK_THROWS_AS(compose_scenario_risk(one, -0.1), InputError);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> cr(1 + i % 7);
    for (double& c : cr) c = u(rng);
    const double gr = u(rng);
    const double sr = compose_scenario_risk(cr, gr);
    CHECK(std::abs(sr - oracle::alg1_literal(cr, gr)) < 1e-12);
    CHECK(sr >= *std::max_element(cr.begin(), cr.end()) - 1e-15);
    CHECK(sr >= gr - 1e-15);
    CHECK(sr <= 1.0);
    std::vector<double> more = cr;
    more.push_back(u(rng));
    CHECK(compose_scenario_risk(more, gr) >= sr - 1e-15);
  }
}

TEST_CASE("evaluate_scenario_risk composes per-target risk and grounding") {
  const DomainParams d;
  const RiskParams p;
  const VesselState own = oracle::vessel(0, 0, 0, 5.0, 60.0);
  const std::vector<VesselState> targets{oracle::vessel(600, 30, 180, 5.0, 60.0),
                                         oracle::vessel(-200, 400, 270, 3.0, 40.0)};
  const ObstacleSet obstacles({{LocalPoint(300, 150), LocalPoint(300, 250), LocalPoint(400, 250),
                                LocalPoint(400, 150)}},
                              50.0);
  const ScenarioRisk r = evaluate_scenario_risk(own, targets, obstacles, d, p);
  REQUIRE(r.collision.size() == 2);
  for (std::size_t k = 0; k < 2; ++k)
    CHECK(r.collision[k] == doctest::Approx(overall_collision_risk(own, targets[k], 0.0, d, p)).epsilon(1e-14));
  ArenaSpec arena;
  arena.radius = p.arena_radius;
  arena.center = own.position;
  const std::vector<LocalPoint> pts = obstacles.points_in_arena(arena);
  CHECK(r.grounding == doctest::Approx(grounding_risk(own, pts, d, p).max).epsilon(1e-14));
  CHECK(r.scenario == doctest::Approx(oracle::complement_product(r.collision, r.grounding)).epsilon(1e-14));
}
