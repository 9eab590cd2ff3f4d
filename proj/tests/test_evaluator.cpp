#include <cmath>
#include <filesystem>
#include <vector>

#include <doctest.h>

#include "clover/evaluator.hpp"
#include "clover/scene.hpp"

using namespace clover;
using namespace clover::eval;
using scene::Polygon;
using scene::Pose2D;
using scene::Scene;
using scene::Trajectory;

namespace {

Scene base_scene() {
  Scene s;
  s.id = "eval_unit";
  s.dt = 0.5;
  s.horizon_steps = 8;
  s.ego.pose = {5.0, 0.0, 0.0};
  s.ego.speed = 4.0;
  s.centerline = scene::Centerline({{0.0, 0.0}, {100.0, 0.0}});
  s.drivable = {{{0.0, -5.0}, {100.0, -5.0}, {100.0, 5.0}, {0.0, 5.0}}};
  s.human.dt = 0.5;
  for (int t = 1; t <= 8; ++t) s.human.poses.push_back({5.0 + 2.0 * t, 0.0, 0.0});
  return s;
}

Trajectory traj_from_xs(const std::vector<double>& xs, double y = 0.0) {
  Trajectory t;
  t.dt = 0.5;
  for (const double x : xs) t.poses.push_back({x, y, 0.0});
  return t;
}

Trajectory constant_speed(double v, double y = 0.0) {
  std::vector<double> xs;
  for (int t = 1; t <= 8; ++t) xs.push_back(5.0 + v * 0.5 * t);
  return traj_from_xs(xs, y);
}

scene::ObstacleTrack static_box(double x0, double y0, double x1, double y1) {
  scene::ObstacleTrack track;
  track.is_static = true;
  track.footprints = {{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
  return track;
}

}  // namespace

TEST_CASE("clean trajectory scores all ones") {
  const Scene s = base_scene();
  const SubScores out = compute_subscores(s, constant_speed(4.0), EvaluatorConfig{});
  CHECK(out.nc == doctest::Approx(1.0));
  CHECK(out.dac == doctest::Approx(1.0));
  CHECK(out.ddc == doctest::Approx(1.0));
  CHECK(out.tlc == doctest::Approx(1.0));
  CHECK(out.ep == doctest::Approx(1.0));
  CHECK(out.ttc == doctest::Approx(1.0));
  CHECK(out.lk == doctest::Approx(1.0));
  CHECK(out.comfort == doctest::Approx(1.0));
  CHECK(out.hc == doctest::Approx(1.0));
  CHECK(out.ec == doctest::Approx(1.0));
}

TEST_CASE("length mismatch throws") {
  const Scene s = base_scene();
  CHECK_THROWS_AS(compute_subscores(s, traj_from_xs({6.0, 7.0}), EvaluatorConfig{}),
                  std::invalid_argument);
}

TEST_CASE("progress is the station gain ratio") {
  const Scene s = base_scene();
  // Half the human speed covers half the human station gain.
  const SubScores out = compute_subscores(s, constant_speed(2.0), EvaluatorConfig{});
  CHECK(out.ep == doctest::Approx(0.5));

  // A stationary human floors the denominator, so any progress saturates.
  Scene still = base_scene();
  for (auto& p : still.human.poses) p = {5.0, 0.0, 0.0};
  const SubScores sat = compute_subscores(still, constant_speed(2.0), EvaluatorConfig{});
  CHECK(sat.ep == doctest::Approx(1.0));
}

TEST_CASE("drivable-area compliance checks footprint corners") {
  const Scene s = base_scene();
  // Lateral 4.2 puts the outer corners past the 5 m edge.
  const SubScores off = compute_subscores(s, constant_speed(4.0, 4.2), EvaluatorConfig{});
  CHECK(off.dac == doctest::Approx(0.0));
  CHECK(off.lk == doctest::Approx(0.0));

  // Lateral 2.5 stays drivable but leaves the lane-keeping band.
  const SubScores wide = compute_subscores(s, constant_speed(4.0, 2.5), EvaluatorConfig{});
  CHECK(wide.dac == doctest::Approx(1.0));
  CHECK(wide.lk == doctest::Approx(0.0));

  // Lateral 1.0 passes both.
  const SubScores lane = compute_subscores(s, constant_speed(4.0, 1.0), EvaluatorConfig{});
  CHECK(lane.dac == doctest::Approx(1.0));
  CHECK(lane.lk == doctest::Approx(1.0));
}

TEST_CASE("driving direction tolerates small reversals") {
  const Scene s = base_scene();
  // Forward then 0.25 m per-step backing: 1.75 m total, below the 2 m gate.
  const SubScores mild = compute_subscores(
      s, traj_from_xs({10.0, 9.75, 9.5, 9.25, 9.0, 8.75, 8.5, 8.25}), EvaluatorConfig{});
  CHECK(mild.ddc == doctest::Approx(0.5));

  const SubScores hard = compute_subscores(
      s, traj_from_xs({10.0, 9.5, 9.0, 8.5, 8.0, 7.5, 7.0, 6.5}), EvaluatorConfig{});
  CHECK(hard.ddc == doctest::Approx(0.0));

  const SubScores fwd = compute_subscores(s, constant_speed(4.0), EvaluatorConfig{});
  CHECK(fwd.ddc == doctest::Approx(1.0));
}

TEST_CASE("traffic light zone blocks entry") {
  Scene s = base_scene();
  s.traffic_light_zone = Polygon{{14.0, -5.0}, {18.0, -5.0}, {18.0, 5.0}, {14.0, 5.0}};
  const SubScores run = compute_subscores(s, constant_speed(4.0), EvaluatorConfig{});
  CHECK(run.tlc == doctest::Approx(0.0));

  // Stopping short of the zone keeps compliance.
  const SubScores stop = compute_subscores(
      s, traj_from_xs({7.0, 9.0, 10.5, 11.5, 12.0, 12.0, 12.0, 12.0}), EvaluatorConfig{});
  CHECK(stop.tlc == doctest::Approx(1.0));
}

TEST_CASE("collision severity depends on the obstacle kind") {
  Scene s = base_scene();
  s.obstacles.push_back(static_box(14.0, -1.0, 18.0, 1.0));
  const SubScores parked = compute_subscores(s, constant_speed(4.0), EvaluatorConfig{});
  CHECK(parked.nc == doctest::Approx(0.5));

  Scene moving = base_scene();
  scene::ObstacleTrack track;
  track.is_static = false;
  for (int t = 0; t < 8; ++t) {
    const double x = 40.0 - 3.0 * t;  // oncoming
    track.footprints.push_back({{x, -1.0}, {x + 4.0, -1.0}, {x + 4.0, 1.0}, {x, 1.0}});
  }
  moving.obstacles.push_back(track);
  const SubScores hit = compute_subscores(moving, constant_speed(4.0), EvaluatorConfig{});
  CHECK(hit.nc == doctest::Approx(0.0));

  // The same oncoming car passed at a lateral offset is no collision.
  const SubScores dodge = compute_subscores(moving, constant_speed(4.0, 3.0), EvaluatorConfig{});
  CHECK(dodge.nc == doctest::Approx(1.0));
}

TEST_CASE("time-to-collision projects at constant velocity") {
  Scene s = base_scene();
  s.obstacles.push_back(static_box(19.0, -1.0, 21.0, 1.0));

  // Fast approach that stops short: the 1 s projection of the 8 m/s pose
  // reaches the wall even though the trajectory itself stays clear.
  const SubScores fast = compute_subscores(
      s, traj_from_xs({9.0, 13.0, 15.0, 16.0, 16.0, 16.0, 16.0, 16.0}), EvaluatorConfig{});
  CHECK(fast.nc == doctest::Approx(1.0));
  CHECK(fast.ttc == doctest::Approx(0.0));

  // A slow approach keeps the projection clear.
  const SubScores slow = compute_subscores(s, constant_speed(2.0), EvaluatorConfig{});
  CHECK(slow.nc == doctest::Approx(1.0));
  CHECK(slow.ttc == doctest::Approx(1.0));
}

TEST_CASE("comfort bounds acceleration jerk and yaw rate") {
  const Scene s = base_scene();
  const EvaluatorConfig cfg;

  // Hard launch: 4 -> 8 m/s in one step is 8 m/s^2.
  const SubScores launch = compute_subscores(s, constant_speed(8.0), EvaluatorConfig{});
  CHECK(launch.comfort == doctest::Approx(0.0));
  CHECK(launch.hc == doctest::Approx(0.0));

  // Gentle speedup within the 2.4 m/s^2 and 4 m/s^3 budgets.
  std::vector<double> xs;
  double x = 5.0;
  double v = 4.0;
  for (int t = 0; t < 8; ++t) {
    v += 0.8 * 0.5;
    x += v * 0.5;
    xs.push_back(x);
  }
  const SubScores gentle = compute_subscores(s, traj_from_xs(xs), cfg);
  CHECK(gentle.comfort == doctest::Approx(1.0));

  // A zig-zag heading profile violates the yaw-rate bound.
  Trajectory zig = constant_speed(4.0);
  for (std::size_t k = 0; k < zig.poses.size(); ++k) {
    zig.poses[k].heading = (k % 2 == 0) ? 0.3 : -0.3;
  }
  const SubScores yaw = compute_subscores(s, zig, cfg);
  CHECK(yaw.comfort == doctest::Approx(0.0));
}

TEST_CASE("two-frame consistency") {
  const EvaluatorConfig cfg;
  const Trajectory cur = constant_speed(4.0);

  // A previous frame whose pose k+1 equals the current pose k is perfectly
  // consistent.
  Trajectory prev;
  prev.dt = 0.5;
  prev.poses.push_back({5.0, 0.0, 0.0});
  for (std::size_t k = 0; k + 1 < cur.poses.size(); ++k) prev.poses.push_back(cur.poses[k]);
  CHECK(extended_comfort(prev, cur, cfg) == doctest::Approx(1.0));

  Trajectory shifted = prev;
  for (auto& p : shifted.poses) p.y += 0.6;
  CHECK(extended_comfort(shifted, cur, cfg) == doctest::Approx(0.0));

  const Scene s = base_scene();
  const SubScores with_prev = compute_subscores(s, cur, cfg, &shifted);
  CHECK(with_prev.ec == doctest::Approx(0.0));
  const SubScores without = compute_subscores(s, cur, cfg);
  CHECK(without.ec == doctest::Approx(1.0));
}

TEST_CASE("human score table resolution") {
  Scene s = base_scene();
  const SubScores plain = resolve_human_subscores(s);
  CHECK(plain.comfort == doctest::Approx(1.0));

  s.human_subscores = std::map<std::string, double>{{"comfort", 0.0}, {"ep", 0.7}};
  const SubScores table = resolve_human_subscores(s);
  CHECK(table.comfort == doctest::Approx(0.0));
  CHECK(table.ep == doctest::Approx(0.7));
  CHECK(table.nc == doctest::Approx(1.0));
}

TEST_CASE("batch evaluation equals the single-trajectory path") {
  Scene s = base_scene();
  s.obstacles.push_back(static_box(30.0, 1.0, 34.0, 3.0));
  std::vector<Trajectory> pool;
  for (double v : {0.0, 2.0, 4.0, 6.0}) {
    for (double lat : {-2.0, 0.0, 2.0}) pool.push_back(constant_speed(v, lat));
  }
  const auto batch = evaluate_batch(s, pool, EvaluatorConfig{});
  REQUIRE(batch.size() == pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const SubScores one = compute_subscores(s, pool[i], EvaluatorConfig{});
    for (std::size_t c = 0; c < SubScores::kCount; ++c) {
      CHECK(batch[i].get(c) == doctest::Approx(one.get(c)));
    }
  }
}

TEST_CASE("scored row json round trip") {
  ScoredRow row;
  row.scene_id = "eval_unit";
  row.candidate_id = "cand_0007";
  row.scores.ep = 0.625;
  row.scores.ttc = 0.0;
  row.pdms = compose_pdms(row.scores);
  row.epdms = compose_epdms(row.scores, SubScores{});
  const ScoredRow back = scored_row_from_json(scored_row_to_json(row));
  CHECK(back.scene_id == row.scene_id);
  CHECK(back.candidate_id == row.candidate_id);
  CHECK(back.scores.ep == doctest::Approx(0.625));
  CHECK(back.scores.ttc == doctest::Approx(0.0));
  CHECK(back.pdms == doctest::Approx(row.pdms));
  CHECK(back.epdms == doctest::Approx(row.epdms));
}

TEST_CASE("score cache round trip and hits") {
  ScoreCache cache;
  SubScores s;
  s.ep = 0.25;
  cache.insert("scene_a", 12345u, s);
  cache.insert("scene_b", 777u, SubScores{});
  CHECK(cache.size() == 2);
  CHECK_FALSE(cache.lookup("scene_a", 999u).has_value());
  const auto hit = cache.lookup("scene_a", 12345u);
  REQUIRE(hit.has_value());
  CHECK(hit->ep == doctest::Approx(0.25));
  CHECK(cache.hits() == 1);

  const auto path = std::filesystem::temp_directory_path() / "clover_cache_unit.json";
  cache.save(path);
  const ScoreCache loaded = ScoreCache::load(path);
  CHECK(loaded.size() == 2);
  const auto again = loaded.lookup("scene_a", 12345u);
  REQUIRE(again.has_value());
  CHECK(again->ep == doctest::Approx(0.25));
  std::filesystem::remove(path);
}
