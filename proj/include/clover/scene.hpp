#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "clover/centerline.hpp"
#include "clover/geometry.hpp"
#include "clover/trajectory.hpp"

namespace clover::scene {

struct VehicleDims {
  double length = 4.6;
  double width = 1.9;
};

struct EgoState {
  Pose2D pose;
  double speed = 0.0;
};

// One tracked object with a footprint polygon per horizon step. Static
// objects may carry a single footprint, which applies to every step.
struct ObstacleTrack {
  bool is_static = false;
  std::vector<Polygon> footprints;

  const Polygon& footprint_at(std::size_t step) const {
    return footprints.size() == 1 ? footprints[0] : footprints[step];
  }
};

struct Scene {
  std::string id;
  double dt = 0.5;
  int horizon_steps = 8;
  EgoState ego;
  Centerline centerline{{{0.0, 0.0}, {1.0, 0.0}}};
  std::vector<Polygon> drivable;
  std::vector<ObstacleTrack> obstacles;
  Trajectory human;
  std::optional<Polygon> traffic_light_zone;
  // Raw per-metric human scores keyed by metric name; consumers default any
  // missing table to all-ones.
  std::optional<std::map<std::string, double>> human_subscores;

  double horizon_seconds() const { return dt * horizon_steps; }
};

// Vehicle box for a pose, counterclockwise corners. Shared by the ego and
// candidate footprint checks.
Polygon ego_footprint(const Pose2D& pose, const VehicleDims& dims);

// True when the point lies inside (or on the boundary of) any drivable
// polygon.
bool point_in_drivable(const Scene& scene, const Vec2& point);

// Parses and validates a scene document. Validation failures throw
// std::invalid_argument naming the offending field and the scene id.
Scene scene_from_json(const nlohmann::json& j);
Scene load_scene_file(const std::filesystem::path& path);

nlohmann::json scene_to_json(const Scene& scene);
void save_scene_file(const Scene& scene, const std::filesystem::path& path);

}  // namespace clover::scene
