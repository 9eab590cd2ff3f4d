#include "clover/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "clover/rng.hpp"

namespace clover::scene {

void validate_trajectory(const Trajectory& traj, double xy_limit) {
  if (traj.poses.empty()) throw std::invalid_argument("trajectory: empty pose list");
  if (!(traj.dt > 0.0)) throw std::invalid_argument("trajectory: dt must be positive");
  for (const Pose2D& p : traj.poses) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.heading)) {
      throw std::invalid_argument("trajectory: non-finite pose");
    }
    if (std::abs(p.x) > xy_limit || std::abs(p.y) > xy_limit) {
      throw std::invalid_argument("trajectory: coordinate outside +-" +
                                  std::to_string(xy_limit) + " box");
    }
  }
}

Trajectory sanitize_trajectory(Trajectory traj, double xy_limit) {
  for (Pose2D& p : traj.poses) {
    p.x = std::clamp(p.x, -xy_limit, xy_limit);
    p.y = std::clamp(p.y, -xy_limit, xy_limit);
    p.heading = wrap_angle(p.heading);
  }
  return traj;
}

double trajectory_l1(const Trajectory& a, const Trajectory& b, double heading_weight) {
  if (a.poses.size() != b.poses.size()) {
    throw std::invalid_argument("trajectory_l1: length mismatch");
  }
  if (a.poses.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t t = 0; t < a.poses.size(); ++t) {
    acc += std::abs(a.poses[t].x - b.poses[t].x) + std::abs(a.poses[t].y - b.poses[t].y) +
           heading_weight * angle_diff(a.poses[t].heading, b.poses[t].heading);
  }
  return acc / static_cast<double>(a.poses.size());
}

std::uint64_t trajectory_hash(const Trajectory& traj) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xffULL;
      h *= 0x100000001b3ULL;
    }
  };
  mix(traj.dt);
  for (const Pose2D& p : traj.poses) {
    mix(p.x);
    mix(p.y);
    mix(p.heading);
  }
  return h;
}

}  // namespace clover::scene
