#pragma once

#include <vector>

#include "clover/geometry.hpp"

namespace clover::scene {

struct StationLateral {
  double station = 0.0;
  double lateral = 0.0;
};

// Piecewise-linear route reference. Stations accumulate arc length from the
// first vertex; headings are constant per segment with a linear blend over a
// 0.5 m window centered at interior vertices (shrunk near short segments) so
// the heading field is continuous. Positive lateral offsets point left.
class Centerline {
 public:
  explicit Centerline(std::vector<Vec2> vertices);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<double>& stations() const { return stations_; }
  double total_length() const { return stations_.back(); }

  // Stations outside [0, total_length] clamp to the nearest endpoint.
  Vec2 position_at(double station) const;
  double heading_at(double station) const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<double> stations_;
  std::vector<double> seg_headings_;

  std::size_t segment_index(double station) const;
};

// Maps route coordinates to a world pose:
//   x = x_cl(d) - lateral * sin(h_cl(d))
//   y = y_cl(d) + lateral * cos(h_cl(d))
//   heading = h_cl(d)
Pose2D station_lateral_to_cartesian(const Centerline& cl, double station, double lateral);

// Inverse mapping. Starts from the nearest-segment projection and refines the
// station by root finding so that station_lateral_to_cartesian(project(p))
// returns p (within 1e-6 m) whenever the projection falls strictly inside the
// polyline. Stations clamp to [0, total_length].
StationLateral project_to_centerline(const Centerline& cl, const Vec2& point);

}  // namespace clover::scene
