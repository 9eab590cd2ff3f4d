#include "clover/scene.hpp"

#include <cmath>
#include <stdexcept>

#include "clover/jsonio.hpp"

namespace clover::scene {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& scene_id, const std::string& what) {
  throw std::invalid_argument("scene '" + scene_id + "': " + what);
}

Vec2 parse_vec2(const json& j, const std::string& scene_id, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail(scene_id, field + " must be a [x, y] pair");
  }
  const Vec2 v{j[0].get<double>(), j[1].get<double>()};
  if (!std::isfinite(v.x) || !std::isfinite(v.y)) fail(scene_id, field + " is non-finite");
  return v;
}

Polygon parse_polygon(const json& j, const std::string& scene_id, const std::string& field,
                      bool require_ccw) {
  if (!j.is_array() || j.size() < 3) {
    fail(scene_id, field + " must be a polygon with at least 3 vertices");
  }
  Polygon poly;
  poly.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    poly.push_back(parse_vec2(j[i], scene_id, field + "[" + std::to_string(i) + "]"));
  }
  if (polygon_area(poly) <= 0.0) fail(scene_id, field + " has zero area");
  if (require_ccw && signed_area(poly) < 0.0) {
    fail(scene_id, field + " must be counterclockwise");
  }
  return poly;
}

}  // namespace

Polygon ego_footprint(const Pose2D& pose, const VehicleDims& dims) {
  return oriented_box(pose, dims.length, dims.width);
}

bool point_in_drivable(const Scene& scene, const Vec2& point) {
  for (const Polygon& poly : scene.drivable) {
    if (point_in_polygon(point, poly)) return true;
  }
  return false;
}

Scene scene_from_json(const nlohmann::json& j) {
  Scene s;
  if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>().empty()) {
    fail("<unknown>", "id must be a non-empty string");
  }
  s.id = j["id"].get<std::string>();

  auto require_number = [&](const char* key) -> double {
    if (!j.contains(key) || !j[key].is_number()) fail(s.id, std::string(key) + " missing or not a number");
    const double v = j[key].get<double>();
    if (!std::isfinite(v)) fail(s.id, std::string(key) + " is non-finite");
    return v;
  };

  s.dt = require_number("dt");
  if (s.dt <= 0.0) fail(s.id, "dt must be positive");
  if (!j.contains("horizon_steps") || !j["horizon_steps"].is_number_integer()) {
    fail(s.id, "horizon_steps missing or not an integer");
  }
  s.horizon_steps = j["horizon_steps"].get<int>();
  if (s.horizon_steps < 2) fail(s.id, "horizon_steps must be at least 2");

  if (!j.contains("ego") || !j["ego"].is_object()) fail(s.id, "ego missing");
  const json& ego = j["ego"];
  for (const char* key : {"x", "y", "heading", "speed"}) {
    if (!ego.contains(key) || !ego[key].is_number()) {
      fail(s.id, std::string("ego.") + key + " missing or not a number");
    }
  }
  s.ego.pose = Pose2D{ego["x"].get<double>(), ego["y"].get<double>(),
                      wrap_angle(ego["heading"].get<double>())};
  s.ego.speed = ego["speed"].get<double>();
  if (s.ego.speed < 0.0) fail(s.id, "ego.speed must be non-negative");

  if (!j.contains("centerline") || !j["centerline"].is_array() || j["centerline"].size() < 2) {
    fail(s.id, "centerline must list at least 2 vertices");
  }
  std::vector<Vec2> cl_verts;
  for (std::size_t i = 0; i < j["centerline"].size(); ++i) {
    cl_verts.push_back(parse_vec2(j["centerline"][i], s.id,
                                  "centerline[" + std::to_string(i) + "]"));
  }
  try {
    s.centerline = Centerline(std::move(cl_verts));
  } catch (const std::invalid_argument& e) {
    fail(s.id, e.what());
  }

  if (!j.contains("drivable") || !j["drivable"].is_array() || j["drivable"].empty()) {
    fail(s.id, "drivable must list at least one polygon");
  }
  for (std::size_t i = 0; i < j["drivable"].size(); ++i) {
    s.drivable.push_back(
        parse_polygon(j["drivable"][i], s.id, "drivable[" + std::to_string(i) + "]", true));
  }

  if (j.contains("obstacles")) {
    if (!j["obstacles"].is_array()) fail(s.id, "obstacles must be an array");
    for (std::size_t i = 0; i < j["obstacles"].size(); ++i) {
      const json& jo = j["obstacles"][i];
      const std::string field = "obstacles[" + std::to_string(i) + "]";
      if (!jo.is_object() || !jo.contains("static") || !jo["static"].is_boolean() ||
          !jo.contains("footprints") || !jo["footprints"].is_array()) {
        fail(s.id, field + " must have boolean 'static' and array 'footprints'");
      }
      ObstacleTrack track;
      track.is_static = jo["static"].get<bool>();
      for (std::size_t k = 0; k < jo["footprints"].size(); ++k) {
        track.footprints.push_back(parse_polygon(
            jo["footprints"][k], s.id, field + ".footprints[" + std::to_string(k) + "]", false));
      }
      const std::size_t n = track.footprints.size();
      if (n != static_cast<std::size_t>(s.horizon_steps) && !(track.is_static && n == 1)) {
        fail(s.id, field + ".footprints must have horizon_steps entries (or 1 if static)");
      }
      s.obstacles.push_back(std::move(track));
    }
  }

  if (!j.contains("human_trajectory") || !j["human_trajectory"].is_array()) {
    fail(s.id, "human_trajectory missing");
  }
  if (j["human_trajectory"].size() != static_cast<std::size_t>(s.horizon_steps)) {
    fail(s.id, "human_trajectory must have horizon_steps poses");
  }
  s.human.dt = s.dt;
  for (std::size_t t = 0; t < j["human_trajectory"].size(); ++t) {
    const json& jp = j["human_trajectory"][t];
    if (!jp.is_array() || jp.size() != 3) {
      fail(s.id, "human_trajectory[" + std::to_string(t) + "] must be [x, y, heading]");
    }
    s.human.poses.push_back(Pose2D{jp[0].get<double>(), jp[1].get<double>(),
                                   wrap_angle(jp[2].get<double>())});
  }
  try {
    validate_trajectory(s.human);
  } catch (const std::invalid_argument& e) {
    fail(s.id, std::string("human_trajectory: ") + e.what());
  }

  if (j.contains("traffic_light_zone")) {
    s.traffic_light_zone =
        parse_polygon(j["traffic_light_zone"], s.id, "traffic_light_zone", true);
  }

  if (j.contains("human_subscores")) {
    if (!j["human_subscores"].is_object()) fail(s.id, "human_subscores must be an object");
    std::map<std::string, double> table;
    for (const auto& [key, value] : j["human_subscores"].items()) {
      if (!value.is_number()) fail(s.id, "human_subscores." + key + " must be a number");
      const double v = value.get<double>();
      if (v < 0.0 || v > 1.0) fail(s.id, "human_subscores." + key + " must lie in [0, 1]");
      table[key] = v;
    }
    s.human_subscores = std::move(table);
  }

  // The route must extend past the ego so that progress is measurable.
  const StationLateral sl = project_to_centerline(s.centerline, s.ego.pose.position());
  if (sl.station >= s.centerline.total_length()) {
    fail(s.id, "ego projects at or beyond the end of the centerline");
  }
  return s;
}

Scene load_scene_file(const std::filesystem::path& path) {
  return scene_from_json(util::read_json(path));
}

nlohmann::json scene_to_json(const Scene& s) {
  json j;
  j["id"] = s.id;
  j["dt"] = s.dt;
  j["horizon_steps"] = s.horizon_steps;
  j["ego"] = {{"x", s.ego.pose.x},
              {"y", s.ego.pose.y},
              {"heading", s.ego.pose.heading},
              {"speed", s.ego.speed}};
  json cl = json::array();
  for (const Vec2& v : s.centerline.vertices()) cl.push_back({v.x, v.y});
  j["centerline"] = std::move(cl);
  json drv = json::array();
  for (const Polygon& poly : s.drivable) {
    json jp = json::array();
    for (const Vec2& v : poly) jp.push_back({v.x, v.y});
    drv.push_back(std::move(jp));
  }
  j["drivable"] = std::move(drv);
  json obs = json::array();
  for (const ObstacleTrack& track : s.obstacles) {
    json jt;
    jt["static"] = track.is_static;
    json fps = json::array();
    for (const Polygon& poly : track.footprints) {
      json jp = json::array();
      for (const Vec2& v : poly) jp.push_back({v.x, v.y});
      fps.push_back(std::move(jp));
    }
    jt["footprints"] = std::move(fps);
    obs.push_back(std::move(jt));
  }
  j["obstacles"] = std::move(obs);
  json human = json::array();
  for (const Pose2D& p : s.human.poses) human.push_back({p.x, p.y, p.heading});
  j["human_trajectory"] = std::move(human);
  if (s.traffic_light_zone) {
    json jp = json::array();
    for (const Vec2& v : *s.traffic_light_zone) jp.push_back({v.x, v.y});
    j["traffic_light_zone"] = std::move(jp);
  }
  if (s.human_subscores) {
    json hs;
    for (const auto& [key, value] : *s.human_subscores) hs[key] = value;
    j["human_subscores"] = std::move(hs);
  }
  return j;
}

void save_scene_file(const Scene& scene, const std::filesystem::path& path) {
  util::write_json_atomic(path, scene_to_json(scene));
}

}  // namespace clover::scene
