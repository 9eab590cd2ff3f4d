#include "clover/demo_scenes.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "clover/evaluator.hpp"
#include "clover/pseudo_expert.hpp"
#include "clover/subscores.hpp"

namespace clover::cli {

namespace {

using scene::Centerline;
using scene::Polygon;
using scene::Scene;
using scene::Vec2;

constexpr double kDt = 0.5;
constexpr int kHorizon = 8;
constexpr double kHalfWidth = 5.0;

Centerline straight_centerline(double length) {
  return Centerline({{0.0, 0.0}, {length * 0.5, 0.0}, {length, 0.0}});
}

Centerline arc_centerline(double radius, double arc_len, bool left) {
  std::vector<Vec2> pts;
  const int n = std::max(2, static_cast<int>(arc_len / 2.0));
  for (int i = 0; i <= n; ++i) {
    const double theta = arc_len / radius * static_cast<double>(i) / n;
    if (left) {
      pts.push_back({radius * std::sin(theta), radius * (1.0 - std::cos(theta))});
    } else {
      pts.push_back({radius * std::sin(theta), -radius * (1.0 - std::cos(theta))});
    }
  }
  return Centerline(std::move(pts));
}

// Corridor polygon between two stations: right edge forward, left edge back,
// which keeps the winding counterclockwise.
Polygon corridor(const Centerline& cl, double s0, double s1, double half_width) {
  Polygon poly;
  const int n = std::max(2, static_cast<int>((s1 - s0) / 2.0));
  for (int i = 0; i <= n; ++i) {
    const double s = s0 + (s1 - s0) * static_cast<double>(i) / n;
    const auto pose = scene::station_lateral_to_cartesian(cl, s, -half_width);
    poly.push_back({pose.x, pose.y});
  }
  for (int i = n; i >= 0; --i) {
    const double s = s0 + (s1 - s0) * static_cast<double>(i) / n;
    const auto pose = scene::station_lateral_to_cartesian(cl, s, half_width);
    poly.push_back({pose.x, pose.y});
  }
  return poly;
}

Polygon box_on_route(const Centerline& cl, double station, double lateral, double length,
                     double width) {
  return scene::oriented_box(scene::station_lateral_to_cartesian(cl, station, lateral), length,
                             width);
}

// Rolls the route forward with per-step speeds and an optional per-step
// lateral profile; poses use the centerline heading like every candidate.
scene::Trajectory drive(const Centerline& cl, double start_station,
                        const std::vector<double>& speeds,
                        const std::vector<double>& laterals = {}) {
  scene::Trajectory traj;
  traj.dt = kDt;
  double station = start_station;
  for (std::size_t k = 0; k < speeds.size(); ++k) {
    station += speeds[k] * kDt;
    const double lat = laterals.empty() ? 0.0 : laterals[k];
    traj.poses.push_back(scene::station_lateral_to_cartesian(cl, station, lat));
  }
  return traj;
}

std::vector<double> constant_speeds(double v) { return std::vector<double>(kHorizon, v); }

std::vector<double> ramp_speeds(double v0, double dv_per_step, double floor = 0.0) {
  std::vector<double> speeds(kHorizon);
  double v = v0;
  for (int k = 0; k < kHorizon; ++k) {
    v = std::max(floor, v + dv_per_step);
    speeds[static_cast<std::size_t>(k)] = v;
  }
  return speeds;
}

std::vector<double> swerve_laterals(double lat_end, double portion) {
  std::vector<double> lats(kHorizon);
  for (int k = 0; k < kHorizon; ++k) {
    const double r = static_cast<double>(k + 1) / (portion * kHorizon);
    lats[static_cast<std::size_t>(k)] = lat_end * pe::smooth_step(r);
  }
  return lats;
}

scene::ObstacleTrack moving_lead(const Centerline& cl, double start_station,
                                 const std::vector<double>& speeds) {
  scene::ObstacleTrack track;
  track.is_static = false;
  double station = start_station;
  for (int k = 0; k < kHorizon; ++k) {
    station += speeds[static_cast<std::size_t>(k)] * kDt;
    track.footprints.push_back(box_on_route(cl, station, 0.0, 4.6, 1.9));
  }
  return track;
}

scene::ObstacleTrack parked(const Centerline& cl, double station, double lateral,
                            double length = 4.6, double width = 1.9) {
  scene::ObstacleTrack track;
  track.is_static = true;
  track.footprints.push_back(box_on_route(cl, station, lateral, length, width));
  return track;
}

Scene base_scene(std::string id, Centerline cl, double ego_station, double ego_speed) {
  Scene s;
  s.id = std::move(id);
  s.dt = kDt;
  s.horizon_steps = kHorizon;
  s.centerline = cl;
  s.ego.pose = scene::station_lateral_to_cartesian(s.centerline, ego_station, 0.0);
  s.ego.speed = ego_speed;
  s.drivable.push_back(corridor(s.centerline, 0.0, s.centerline.total_length(), kHalfWidth));
  return s;
}

// Self-evaluates the human trajectory, then round-trips the document so the
// bundled scenes pass the same validation as user-provided files.
Scene finalize(Scene s) {
  const eval::EvaluatorConfig cfg;
  const eval::SubScores human_scores = eval::compute_subscores(s, s.human, cfg);
  s.human_subscores = eval::subscores_to_map(human_scores);
  return scene::scene_from_json(scene::scene_to_json(s));
}

Scene straight_scene(int variant) {
  Scene s = base_scene(variant == 0 ? "straight_a" : "straight_b", straight_centerline(120.0),
                       5.0, variant == 0 ? 10.0 : 6.0);
  if (variant == 1) s.obstacles.push_back(parked(s.centerline, 30.0, 3.5));
  s.human = drive(s.centerline, 5.0, constant_speeds(s.ego.speed));
  return finalize(std::move(s));
}

Scene curve_scene(int variant) {
  const bool left = variant == 0;
  Scene s = base_scene(left ? "curve_a" : "curve_b",
                       arc_centerline(left ? 40.0 : 30.0, 100.0, left), 3.0,
                       left ? 8.0 : 6.0);
  s.human = drive(s.centerline, 3.0, constant_speeds(s.ego.speed));
  return finalize(std::move(s));
}

Scene lead_brake_scene(int variant) {
  Scene s = base_scene(variant == 0 ? "lead_brake_a" : "lead_brake_b",
                       straight_centerline(120.0), 5.0, 8.0);
  const double lead_start = variant == 0 ? 30.0 : 23.0;
  const double lead_decel = variant == 0 ? -1.0 : -1.6;
  s.obstacles.push_back(moving_lead(s.centerline, lead_start, ramp_speeds(8.0, lead_decel)));
  s.human = drive(s.centerline, 5.0, ramp_speeds(8.0, variant == 0 ? -0.6 : -0.8));
  return finalize(std::move(s));
}

Scene squeeze_scene(int variant) {
  Scene s = base_scene(variant == 0 ? "squeeze_a" : "squeeze_b", straight_centerline(120.0),
                       5.0, 6.0);
  const double lat = variant == 0 ? 2.8 : 2.6;
  const double gap_station = variant == 0 ? 20.0 : 24.0;
  s.obstacles.push_back(parked(s.centerline, gap_station, lat));
  s.obstacles.push_back(parked(s.centerline, gap_station + (variant == 0 ? 0.0 : 4.0), -lat));
  s.human = drive(s.centerline, 5.0, constant_speeds(6.0));
  return finalize(std::move(s));
}

Scene offroute_bait_scene(int variant) {
  const double side = variant == 0 ? 1.0 : -1.0;
  Scene s = base_scene(variant == 0 ? "offroute_bait_a" : "offroute_bait_b",
                       straight_centerline(120.0), 5.0, 6.0);
  // Wide apron beside the lane: staying on it is drivable yet off the route.
  Polygon apron;
  const double inner = -side * 4.5;
  const double outer = -side * 9.0;
  const auto c0i = scene::station_lateral_to_cartesian(s.centerline, 15.0, inner);
  const auto c1i = scene::station_lateral_to_cartesian(s.centerline, 60.0, inner);
  const auto c0o = scene::station_lateral_to_cartesian(s.centerline, 15.0, outer);
  const auto c1o = scene::station_lateral_to_cartesian(s.centerline, 60.0, outer);
  if (side > 0) {
    apron = {{c0o.x, c0o.y}, {c1o.x, c1o.y}, {c1i.x, c1i.y}, {c0i.x, c0i.y}};
  } else {
    apron = {{c0i.x, c0i.y}, {c1i.x, c1i.y}, {c1o.x, c1o.y}, {c0o.x, c0o.y}};
  }
  s.drivable.push_back(apron);
  s.obstacles.push_back(parked(s.centerline, 25.0, 0.0, 4.0, 1.6));
  s.human = drive(s.centerline, 5.0, constant_speeds(6.0), swerve_laterals(side * 2.5, 0.75));
  return finalize(std::move(s));
}

Scene deadend_scene(int variant) {
  Scene s = base_scene(variant == 0 ? "deadend_a" : "deadend_b", straight_centerline(120.0),
                       5.0, 6.0);
  if (variant == 0) {
    // The corridor stops and a wall spans the road just past its end.
    s.drivable.clear();
    s.drivable.push_back(corridor(s.centerline, 0.0, 19.0, kHalfWidth));
    scene::ObstacleTrack wall;
    wall.is_static = true;
    wall.footprints.push_back({{20.0, -5.0}, {22.0, -5.0}, {22.0, 5.0}, {20.0, 5.0}});
    s.obstacles.push_back(wall);
  } else {
    // Red light: a keep-out zone across the lane ahead of the stop point.
    Polygon zone = {{20.0, -5.0}, {24.0, -5.0}, {24.0, 5.0}, {20.0, 5.0}};
    s.traffic_light_zone = zone;
  }
  s.human = drive(s.centerline, 5.0, ramp_speeds(6.0, -0.8));
  return finalize(std::move(s));
}

}  // namespace

std::vector<Scene> demo_scenes() {
  std::vector<Scene> scenes;
  for (int v = 0; v < 2; ++v) scenes.push_back(straight_scene(v));
  for (int v = 0; v < 2; ++v) scenes.push_back(curve_scene(v));
  for (int v = 0; v < 2; ++v) scenes.push_back(lead_brake_scene(v));
  for (int v = 0; v < 2; ++v) scenes.push_back(squeeze_scene(v));
  for (int v = 0; v < 2; ++v) scenes.push_back(offroute_bait_scene(v));
  for (int v = 0; v < 2; ++v) scenes.push_back(deadend_scene(v));
  return scenes;
}

}  // namespace clover::cli
