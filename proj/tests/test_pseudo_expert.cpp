#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include <doctest.h>

#include "clover/demo_scenes.hpp"
#include "clover/pseudo_expert.hpp"
#include "clover/rng.hpp"
#include "oracles.hpp"

using namespace clover;
using namespace clover::pe;
using scene::Scene;
using scene::Trajectory;

namespace {

Scene straight_scene() {
  Scene s;
  s.id = "pe_unit";
  s.dt = 0.5;
  s.horizon_steps = 8;
  s.ego.pose = {5.0, 0.0, 0.0};
  s.ego.speed = 6.0;
  s.centerline = scene::Centerline({{0.0, 0.0}, {60.0, 0.0}, {120.0, 0.0}});
  s.drivable = {{{0.0, -5.0}, {120.0, -5.0}, {120.0, 5.0}, {0.0, 5.0}}};
  s.human.dt = 0.5;
  for (int t = 1; t <= 8; ++t) s.human.poses.push_back({5.0 + 3.0 * t, 0.0, 0.0});
  return s;
}

ScoredCandidate synth(int index, double nc, double dac, double ttc, double comfort, double ep,
                      double lat = 0.0) {
  ScoredCandidate sc;
  sc.cand.index = index;
  sc.cand.params.lat_end = lat;
  sc.scores.nc = nc;
  sc.scores.dac = dac;
  sc.scores.ttc = ttc;
  sc.scores.comfort = comfort;
  sc.scores.ep = ep;
  sc.pdms = eval::compose_pdms(sc.scores);
  return sc;
}

std::vector<ScoredCandidate> random_pool(util::Rng& rng, int n) {
  std::vector<ScoredCandidate> pool;
  const double nc_levels[] = {0.0, 0.5, 1.0};
  for (int i = 0; i < n; ++i) {
    pool.push_back(synth(i, nc_levels[rng.uniform_int(0, 2)],
                         rng.bernoulli(0.7) ? 1.0 : 0.0, rng.bernoulli(0.7) ? 1.0 : 0.0,
                         rng.bernoulli(0.7) ? 1.0 : 0.0, rng.uniform(0.0, 1.0)));
  }
  return pool;
}

Trajectory line_traj(double lat, double speed) {
  Trajectory t;
  t.dt = 0.5;
  for (int k = 1; k <= 8; ++k) t.poses.push_back({5.0 + speed * 0.5 * k, lat, 0.0});
  return t;
}

}  // namespace

TEST_CASE("smooth step endpoints and derivatives") {
  CHECK(smooth_step(0.0) == doctest::Approx(0.0));
  CHECK(smooth_step(1.0) == doctest::Approx(1.0));
  CHECK(smooth_step(0.5) == doctest::Approx(0.5));
  CHECK(smooth_step(-0.5) == doctest::Approx(0.0));
  CHECK(smooth_step(1.7) == doctest::Approx(1.0));

  // One-sided boundary stencils: second-order for the first derivative and
  // third-order for the second. The low-order stencils carry O(h) truncation
  // error from the nonzero third derivative and cannot resolve the vanishing
  // endpoint derivatives at this h.
  const double h = 1e-4;
  const auto s = [](double r) { return smooth_step(r); };
  const double d0 = (-3.0 * s(0.0) + 4.0 * s(h) - s(2.0 * h)) / (2.0 * h);
  const double d1 = (3.0 * s(1.0) - 4.0 * s(1.0 - h) + s(1.0 - 2.0 * h)) / (2.0 * h);
  CHECK(std::abs(d0) < 1e-6);
  CHECK(std::abs(d1) < 1e-6);
  const double dd0 = (35.0 * s(0.0) - 104.0 * s(h) + 114.0 * s(2.0 * h) - 56.0 * s(3.0 * h) +
                      11.0 * s(4.0 * h)) /
                     (12.0 * h * h);
  const double dd1 = (35.0 * s(1.0) - 104.0 * s(1.0 - h) + 114.0 * s(1.0 - 2.0 * h) -
                      56.0 * s(1.0 - 3.0 * h) + 11.0 * s(1.0 - 4.0 * h)) /
                     (12.0 * h * h);
  CHECK(std::abs(dd0) < 1e-6);
  CHECK(std::abs(dd1) < 1e-6);
  // Monotone increasing inside the unit interval.
  for (double r = 0.0; r < 1.0; r += 0.05) {
    CHECK(smooth_step(r + 0.05) > smooth_step(r));
  }
}

TEST_CASE("candidate rollout follows the route frame") {
  const Scene s = straight_scene();
  const std::vector<double> speeds(8, 4.0);

  const Trajectory straight = build_candidate(s, speeds, 0.0, 0.0, 1.0);
  REQUIRE(straight.poses.size() == 8);
  for (int k = 0; k < 8; ++k) {
    CHECK(straight.poses[k].x == doctest::Approx(5.0 + 4.0 * 0.5 * (k + 1)));
    CHECK(straight.poses[k].y == doctest::Approx(0.0));
  }

  // Full-portion lateral transition lands exactly on the target offset.
  const Trajectory swerve = build_candidate(s, speeds, 0.0, 2.0, 1.0);
  CHECK(swerve.poses.back().y == doctest::Approx(2.0));
  CHECK(swerve.poses.front().y < 0.5);

  // Shorter portion reaches the target earlier.
  const Trajectory fast = build_candidate(s, speeds, 0.0, 2.0, 0.5);
  CHECK(fast.poses[3].y == doctest::Approx(2.0));
  CHECK(fast.poses.back().y == doctest::Approx(2.0));

  // Explicit lateral profiles pass through unchanged.
  std::vector<double> lats{0.0, 0.5, 1.0, 1.5, 2.0, 2.0, 2.0, 2.0};
  const Trajectory prof = build_candidate_profiles(s, speeds, lats);
  for (int k = 0; k < 8; ++k) CHECK(prof.poses[k].y == doctest::Approx(lats[k]));
}

TEST_CASE("family generation hits the documented counts") {
  const Scene s = straight_scene();
  const FamilyConfig cfg;
  const auto cands = generate_families(s, cfg, 42);
  CHECK(static_cast<int>(cands.size()) == cfg.total_target());
  CHECK(cands.size() == 261);

  std::map<Family, int> per_family;
  for (const Candidate& c : cands) ++per_family[c.family];
  CHECK(per_family[Family::kLateralTransition] == 200);
  CHECK(per_family[Family::kOffRoad] == 12);
  CHECK(per_family[Family::kAccelProfile] == 18);
  CHECK(per_family[Family::kStopGo] == 9);
  CHECK(per_family[Family::kApproachBrake] == 10);
  CHECK(per_family[Family::kOvershoot] == 12);

  // Indices are unique and in enumeration order.
  for (std::size_t i = 0; i + 1 < cands.size(); ++i) {
    CHECK(cands[i].index < cands[i + 1].index);
  }
  for (const Candidate& c : cands) {
    REQUIRE(c.traj.poses.size() == 8);
  }

  // Same seed reproduces the same parameter sequence.
  const auto again = generate_families(s, cfg, 42);
  REQUIRE(again.size() == cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) {
    CHECK(again[i].params.speed == doctest::Approx(cands[i].params.speed));
    CHECK(again[i].params.lat_end == doctest::Approx(cands[i].params.lat_end));
  }
}

TEST_CASE("scoring triage prefers feasible candidates") {
  std::vector<Feasibility> fz;
  for (int i = 0; i < 100; ++i) fz.push_back(Feasibility::kFeasible);
  for (int i = 0; i < 60; ++i) fz.push_back(Feasibility::kNearFeasible);
  for (int i = 0; i < 101; ++i) fz.push_back(Feasibility::kInfeasible);
  FamilyConfig cfg;
  cfg.max_scored = 180;
  const auto picked = select_for_scoring(fz, cfg, 7);
  CHECK(picked.size() == 180);
  int feas = 0;
  int near = 0;
  int inf = 0;
  for (const int i : picked) {
    if (fz[i] == Feasibility::kFeasible) ++feas;
    if (fz[i] == Feasibility::kNearFeasible) ++near;
    if (fz[i] == Feasibility::kInfeasible) ++inf;
  }
  CHECK(feas == 100);
  CHECK(near == 60);
  CHECK(inf == 20);
}

TEST_CASE("coverage selection matches the brute-force oracle") {
  util::Rng rng(1234);
  FamilyConfig cfg;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = rng.uniform_int(20, 60);
    const auto pool = random_pool(rng, n);
    const auto picked = coverage_select(pool, cfg);
    const auto expected = oracle::coverage_brute(pool, cfg);
    REQUIRE(picked.size() == expected.size());
    for (std::size_t i = 0; i < picked.size(); ++i) {
      CHECK(picked[i].cand.index == expected[i]);
    }
    CHECK(picked.size() == std::min<std::size_t>(pool.size(), 50));
  }
}

TEST_CASE("coverage selection spreads across failure keys") {
  FamilyConfig cfg;
  cfg.pool_keep = 4;
  // Fifty near-identical safe candidates plus one of each failure mode.
  std::vector<ScoredCandidate> pool;
  for (int i = 0; i < 50; ++i) pool.push_back(synth(i, 1.0, 1.0, 1.0, 1.0, 0.9));
  pool.push_back(synth(50, 0.0, 1.0, 1.0, 1.0, 0.9));
  pool.push_back(synth(51, 1.0, 0.0, 1.0, 1.0, 0.9));
  const auto picked = coverage_select(pool, cfg);
  REQUIRE(picked.size() == 4);
  // After the first safe pick, the distinct-key failures are cheaper than a
  // second safe candidate.
  bool saw_nc = false;
  bool saw_dac = false;
  for (const auto& sc : picked) {
    if (sc.cand.index == 50) saw_nc = true;
    if (sc.cand.index == 51) saw_dac = true;
  }
  CHECK(saw_nc);
  CHECK(saw_dac);
}

TEST_CASE("training sample matches the brute-force oracle") {
  util::Rng rng(555);
  FamilyConfig cfg;
  const Trajectory human = line_traj(0.0, 6.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = rng.uniform_int(3, 30);
    std::vector<ScoredCandidate> pool;
    for (int i = 0; i < n; ++i) {
      ScoredCandidate sc;
      sc.cand.index = i;
      sc.cand.traj = line_traj(rng.uniform(-3.5, 3.5), rng.uniform(2.0, 10.0));
      sc.pdms = rng.uniform(0.5, 1.0);
      pool.push_back(sc);
    }
    const TrainingSample ts = training_sample(pool, human, cfg);
    const auto expected = oracle::training_brute(pool, human, cfg);
    REQUIRE(ts.sources.size() == expected.size());
    for (std::size_t i = 0; i < ts.sources.size(); ++i) {
      CHECK(ts.sources[i] == expected[i]);
    }
    CHECK(ts.sources.size() <= 8);
  }
}

TEST_CASE("training sample falls back to the human trajectory") {
  FamilyConfig cfg;
  const Trajectory human = line_traj(0.0, 6.0);
  std::vector<ScoredCandidate> pool;
  for (int i = 0; i < 5; ++i) {
    ScoredCandidate sc;
    sc.cand.index = i;
    sc.cand.traj = line_traj(1.0, 4.0);
    sc.pdms = 0.3;
    pool.push_back(sc);
  }
  const TrainingSample ts = training_sample(pool, human, cfg);
  CHECK(ts.human_fallback);
  REQUIRE(ts.sources.size() == 1);
  CHECK(ts.sources[0] == -1);
}

TEST_CASE("training sample appends a distant human") {
  FamilyConfig cfg;
  cfg.training_max = 4;
  const Trajectory human = line_traj(3.0, 6.0);
  std::vector<ScoredCandidate> pool;
  for (int i = 0; i < 2; ++i) {
    ScoredCandidate sc;
    sc.cand.index = i;
    sc.cand.traj = line_traj(-3.0 + 0.1 * i, 6.0);
    sc.pdms = 0.9;
    pool.push_back(sc);
  }
  const TrainingSample ts = training_sample(pool, human, cfg);
  REQUIRE(ts.sources.size() == 3);
  CHECK(ts.sources.back() == -1);
  CHECK_FALSE(ts.human_fallback);

  // A human inside the covered radius is not appended.
  const Trajectory near_human = line_traj(-3.05, 6.0);
  const TrainingSample near_ts = training_sample(pool, near_human, cfg);
  for (const int src : near_ts.sources) CHECK(src != -1);
}

TEST_CASE("boundary interpolation fills large score gaps") {
  const Scene s = straight_scene();
  const FamilyConfig cfg;
  const eval::EvaluatorConfig eval_cfg;
  const eval::SubScores human_scores;

  const auto make_kept = [&](int index, double lat, double pdms) {
    ScoredCandidate sc;
    sc.cand.index = index;
    sc.cand.family = Family::kLateralTransition;
    sc.cand.params.speed = 6.0;
    sc.cand.params.lat_start = 0.0;
    sc.cand.params.lat_end = lat;
    sc.cand.params.portion = 1.0;
    sc.cand.traj = build_candidate(s, std::vector<double>(8, 6.0), 0.0, lat, 1.0);
    sc.pdms = pdms;
    return sc;
  };

  std::vector<ScoredCandidate> kept;
  kept.push_back(make_kept(0, -2.0, 0.10));
  kept.push_back(make_kept(1, -1.0, 0.90));
  kept.push_back(make_kept(2, 0.0, 0.92));
  kept.push_back(make_kept(3, 1.0, 0.20));
  kept.push_back(make_kept(4, 2.0, 0.95));

  const auto extras = boundary_interpolate(s, kept, cfg, eval_cfg, human_scores);
  REQUIRE(extras.size() == 3);
  // Largest gaps first: 0.80 at (-2,-1), 0.75 at (1,2), 0.72 at (0,1).
  CHECK(extras[0].cand.params.lat_end == doctest::Approx(-1.5));
  CHECK(extras[1].cand.params.lat_end == doctest::Approx(1.5));
  CHECK(extras[2].cand.params.lat_end == doctest::Approx(0.5));
  for (const auto& e : extras) {
    CHECK(e.interpolated);
    CHECK(e.cand.index > 4);
    CHECK(e.cand.traj.poses.size() == 8);
  }

  FamilyConfig capped = cfg;
  capped.boundary_max = 1;
  const auto one = boundary_interpolate(s, kept, capped, eval_cfg, human_scores);
  REQUIRE(one.size() == 1);
  CHECK(one[0].cand.params.lat_end == doctest::Approx(-1.5));

  // Small gaps spawn nothing.
  std::vector<ScoredCandidate> flat;
  flat.push_back(make_kept(0, -1.0, 0.90));
  flat.push_back(make_kept(1, 0.0, 0.92));
  CHECK(boundary_interpolate(s, flat, cfg, eval_cfg, human_scores).empty());
}

TEST_CASE("precheck flags collisions and off-road rollouts") {
  Scene s = straight_scene();
  scene::ObstacleTrack wall;
  wall.is_static = true;
  wall.footprints = {{{20.0, -1.5}, {24.0, -1.5}, {24.0, 1.5}, {20.0, 1.5}}};
  s.obstacles.push_back(wall);

  const FamilyConfig cfg;
  const eval::EvaluatorConfig eval_cfg;

  Candidate through;
  through.traj = build_candidate(s, std::vector<double>(8, 6.0), 0.0, 0.0, 1.0);
  CHECK(precheck(s, through, cfg, eval_cfg) == Feasibility::kInfeasible);

  Candidate clear;
  clear.traj = build_candidate(s, std::vector<double>(8, 6.0), 0.0, 3.5, 0.35);
  CHECK(precheck(s, clear, cfg, eval_cfg) != Feasibility::kInfeasible);

  Candidate offroad;
  offroad.traj = build_candidate(s, std::vector<double>(8, 6.0), 0.0, 7.0, 0.35);
  CHECK(precheck(s, offroad, cfg, eval_cfg) == Feasibility::kInfeasible);
}
