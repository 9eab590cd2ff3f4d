#pragma once

#include <cstdint>
#include <vector>

#include "clover/geometry.hpp"

namespace clover::scene {

// A fixed-rate pose sequence. Poses exclude the current ego pose; index 0 is
// the state dt seconds ahead.
struct Trajectory {
  std::vector<Pose2D> poses;
  double dt = 0.5;

  std::size_t size() const { return poses.size(); }
  double duration() const { return dt * static_cast<double>(poses.size()); }
};

// Validates finiteness and the coordinate box |x|,|y| <= xy_limit.
void validate_trajectory(const Trajectory& traj, double xy_limit = 100.0);

// Clamps coordinates into the box; generation paths sanitize before emitting.
Trajectory sanitize_trajectory(Trajectory traj, double xy_limit = 100.0);

// Mean per-pose L1 distance: |dx| + |dy| + heading_weight * |wrap(dhead)|,
// averaged over steps. Lengths must match.
double trajectory_l1(const Trajectory& a, const Trajectory& b, double heading_weight = 1.0);

// Content hash over dt and raw pose bits, for the score cache.
std::uint64_t trajectory_hash(const Trajectory& traj);

}  // namespace clover::scene
