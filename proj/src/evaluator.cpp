#include "clover/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "clover/jsonio.hpp"
#include "clover/parallel.hpp"

namespace clover::eval {

namespace {

using scene::Polygon;
using scene::Pose2D;
using scene::Scene;
using scene::Trajectory;
using scene::Vec2;

double compute_nc(const Scene& s, const std::vector<Polygon>& footprints) {
  bool static_contact = false;
  for (std::size_t t = 0; t < footprints.size(); ++t) {
    for (const scene::ObstacleTrack& track : s.obstacles) {
      if (scene::polygons_intersect(footprints[t], track.footprint_at(t))) {
        if (!track.is_static) return 0.0;
        static_contact = true;
      }
    }
  }
  return static_contact ? 0.5 : 1.0;
}

double compute_dac(const Scene& s, const std::vector<Polygon>& footprints) {
  for (const Polygon& fp : footprints) {
    for (const Vec2& corner : fp) {
      if (!scene::point_in_drivable(s, corner)) return 0.0;
    }
  }
  return 1.0;
}

double compute_ddc(const std::vector<double>& stations, double reverse_tolerance) {
  double reverse = 0.0;
  for (std::size_t t = 0; t + 1 < stations.size(); ++t) {
    reverse += std::max(0.0, stations[t] - stations[t + 1]);
  }
  if (reverse <= 1e-9) return 1.0;
  return reverse < reverse_tolerance ? 0.5 : 0.0;
}

double compute_tlc(const Scene& s, const Trajectory& traj) {
  if (!s.traffic_light_zone) return 1.0;
  for (const Pose2D& p : traj.poses) {
    if (scene::point_in_polygon(p.position(), *s.traffic_light_zone)) return 0.0;
  }
  return 1.0;
}

double compute_ttc(const Scene& s, const Trajectory& traj, const EvaluatorConfig& cfg,
                   const std::vector<double>& speeds) {
  for (std::size_t t = 0; t < traj.poses.size(); ++t) {
    const Pose2D& pose = traj.poses[t];
    const double v = speeds[t];
    if (v <= 0.0) continue;
    for (const double horizon : {0.5 * cfg.ttc_horizon, cfg.ttc_horizon}) {
      const double advance = v * horizon;
      const Pose2D projected{pose.x + advance * std::cos(pose.heading),
                             pose.y + advance * std::sin(pose.heading), pose.heading};
      const Polygon fp = scene::ego_footprint(projected, cfg.dims);
      for (const scene::ObstacleTrack& track : s.obstacles) {
        if (scene::polygons_intersect(fp, track.footprint_at(t))) return 0.0;
      }
    }
  }
  return 1.0;
}

double compute_comfort(const Scene& s, const Trajectory& traj, const EvaluatorConfig& cfg,
                       const std::vector<double>& speeds) {
  // Speed sequence starts with the ego entry speed, so a commanded jump away
  // from the current state is penalized like any other harsh maneuver.
  std::vector<double> v;
  v.reserve(speeds.size() + 1);
  v.push_back(s.ego.speed);
  v.insert(v.end(), speeds.begin(), speeds.end());

  std::vector<double> accel(v.size() > 1 ? v.size() - 1 : 0);
  for (std::size_t k = 0; k + 1 < v.size(); ++k) accel[k] = (v[k + 1] - v[k]) / traj.dt;
  for (const double a : accel) {
    if (std::abs(a) > cfg.accel_max) return 0.0;
  }
  for (std::size_t k = 0; k + 1 < accel.size(); ++k) {
    if (std::abs((accel[k + 1] - accel[k]) / traj.dt) > cfg.jerk_max) return 0.0;
  }

  double prev_heading = s.ego.pose.heading;
  for (const Pose2D& p : traj.poses) {
    const double rate = scene::wrap_angle(p.heading - prev_heading) / traj.dt;
    if (std::abs(rate) > cfg.yaw_rate_max) return 0.0;
    prev_heading = p.heading;
  }
  return 1.0;
}

}  // namespace

double extended_comfort(const Trajectory& prev_frame, const Trajectory& cur_frame,
                        const EvaluatorConfig& cfg) {
  if (prev_frame.poses.size() < 2 || cur_frame.poses.empty()) return 1.0;
  // The previous frame was planned one step earlier: its pose k+1 and the
  // current pose k describe the same wall-clock instant.
  const std::size_t overlap = std::min(prev_frame.poses.size() - 1, cur_frame.poses.size());
  if (overlap == 0) return 1.0;
  double pos_sq = 0.0;
  double head_sq = 0.0;
  for (std::size_t k = 0; k < overlap; ++k) {
    const Pose2D& a = prev_frame.poses[k + 1];
    const Pose2D& b = cur_frame.poses[k];
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    pos_sq += dx * dx + dy * dy;
    const double dh = scene::wrap_angle(a.heading - b.heading);
    head_sq += dh * dh;
  }
  const double pos_rms = std::sqrt(pos_sq / static_cast<double>(overlap));
  const double head_rms = std::sqrt(head_sq / static_cast<double>(overlap));
  return (pos_rms <= cfg.ec_pos_rms_max && head_rms <= cfg.ec_head_rms_max) ? 1.0 : 0.0;
}

SubScores compute_subscores(const Scene& s, const Trajectory& traj, const EvaluatorConfig& cfg,
                            const Trajectory* prev_frame) {
  if (traj.poses.size() != static_cast<std::size_t>(s.horizon_steps)) {
    throw std::invalid_argument("compute_subscores: trajectory length does not match scene '" +
                                s.id + "' horizon");
  }

  std::vector<Polygon> footprints;
  footprints.reserve(traj.poses.size());
  for (const Pose2D& p : traj.poses) footprints.push_back(scene::ego_footprint(p, cfg.dims));

  // Per-step speeds from position differences, seeded by the ego pose.
  std::vector<double> speeds(traj.poses.size());
  Vec2 prev = s.ego.pose.position();
  for (std::size_t t = 0; t < traj.poses.size(); ++t) {
    speeds[t] = scene::distance(prev, traj.poses[t].position()) / traj.dt;
    prev = traj.poses[t].position();
  }

  const double ego_station =
      scene::project_to_centerline(s.centerline, s.ego.pose.position()).station;
  std::vector<double> stations;
  std::vector<double> laterals;
  stations.reserve(traj.poses.size() + 1);
  stations.push_back(ego_station);
  for (const Pose2D& p : traj.poses) {
    const scene::StationLateral sl = scene::project_to_centerline(s.centerline, p.position());
    stations.push_back(sl.station);
    laterals.push_back(sl.lateral);
  }

  SubScores out;
  out.nc = compute_nc(s, footprints);
  out.dac = compute_dac(s, footprints);
  out.ddc = compute_ddc(stations, cfg.reverse_tolerance);
  out.tlc = compute_tlc(s, traj);

  const double human_gain =
      scene::project_to_centerline(s.centerline, s.human.poses.back().position()).station -
      ego_station;
  const double agent_gain = stations.back() - ego_station;
  out.ep = std::clamp(agent_gain / std::max(human_gain, cfg.ep_min_human_gain), 0.0, 1.0);

  out.ttc = compute_ttc(s, traj, cfg, speeds);
  out.comfort = compute_comfort(s, traj, cfg, speeds);
  out.hc = out.comfort;

  out.lk = 1.0;
  for (const double lat : laterals) {
    if (std::abs(lat) > cfg.lane_half_width) {
      out.lk = 0.0;
      break;
    }
  }

  out.ec = prev_frame ? extended_comfort(*prev_frame, traj, cfg) : 1.0;
  return out;
}

SubScores resolve_human_subscores(const scene::Scene& scene) {
  if (!scene.human_subscores) return SubScores{};
  return subscores_from_map(*scene.human_subscores);
}

std::vector<SubScores> evaluate_batch(const Scene& scene,
                                      const std::vector<Trajectory>& trajs,
                                      const EvaluatorConfig& cfg, int jobs) {
  std::vector<SubScores> out(trajs.size());
  util::parallel_for(trajs.size(), jobs,
                     [&](std::size_t i) { out[i] = compute_subscores(scene, trajs[i], cfg); });
  return out;
}

nlohmann::json scored_row_to_json(const ScoredRow& row) {
  nlohmann::json j;
  j["scene_id"] = row.scene_id;
  j["candidate_id"] = row.candidate_id;
  for (std::size_t i = 0; i < SubScores::kCount; ++i) {
    j[SubScores::names()[i]] = row.scores.get(i);
  }
  j["pdms"] = row.pdms;
  j["epdms"] = row.epdms;
  return j;
}

ScoredRow scored_row_from_json(const nlohmann::json& j) {
  ScoredRow row;
  row.scene_id = j.at("scene_id").get<std::string>();
  row.candidate_id = j.at("candidate_id").get<std::string>();
  for (std::size_t i = 0; i < SubScores::kCount; ++i) {
    row.scores.set(i, j.at(SubScores::names()[i]).get<double>());
  }
  row.pdms = j.at("pdms").get<double>();
  row.epdms = j.at("epdms").get<double>();
  return row;
}

ScoreCache ScoreCache::load(const std::filesystem::path& path) {
  ScoreCache cache;
  if (!std::filesystem::exists(path)) return cache;
  for (const nlohmann::json& j : util::read_jsonl(path)) {
    SubScores s;
    for (std::size_t i = 0; i < SubScores::kCount; ++i) {
      s.set(i, j.at("scores").at(SubScores::names()[i]).get<double>());
    }
    std::uint64_t hash = 0;
    std::istringstream in(j.at("traj_hash").get<std::string>());
    in >> std::hex >> hash;
    cache.entries_[{j.at("scene_id").get<std::string>(), hash}] = s;
  }
  return cache;
}

void ScoreCache::save(const std::filesystem::path& path) const {
  std::vector<nlohmann::json> rows;
  rows.reserve(entries_.size());
  for (const auto& [key, scores] : entries_) {
    nlohmann::json j;
    j["scene_id"] = key.first;
    std::ostringstream hex;
    hex << std::hex << key.second;
    j["traj_hash"] = hex.str();
    nlohmann::json js;
    for (std::size_t i = 0; i < SubScores::kCount; ++i) {
      js[SubScores::names()[i]] = scores.get(i);
    }
    j["scores"] = std::move(js);
    rows.push_back(std::move(j));
  }
  util::write_jsonl_atomic(path, rows);
}

std::optional<SubScores> ScoreCache::lookup(const std::string& scene_id,
                                            std::uint64_t traj_hash) const {
  auto it = entries_.find({scene_id, traj_hash});
  if (it == entries_.end()) return std::nullopt;
  ++hits_;
  return it->second;
}

void ScoreCache::insert(const std::string& scene_id, std::uint64_t traj_hash,
                        const SubScores& scores) {
  entries_[{scene_id, traj_hash}] = scores;
}

}  // namespace clover::eval
