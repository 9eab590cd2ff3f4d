#include "clover/centerline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace clover::scene {

namespace {
constexpr double kBlendHalfWindow = 0.25;
constexpr double kMinVertexSpacing = 1e-9;
}  // namespace

Centerline::Centerline(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 2) {
    throw std::invalid_argument("centerline: needs at least 2 vertices");
  }
  stations_.reserve(vertices_.size());
  stations_.push_back(0.0);
  seg_headings_.reserve(vertices_.size() - 1);
  for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) {
    if (!std::isfinite(vertices_[i].x) || !std::isfinite(vertices_[i].y)) {
      throw std::invalid_argument("centerline: non-finite vertex");
    }
    const Vec2 d = vertices_[i + 1] - vertices_[i];
    const double len = d.norm();
    if (len < kMinVertexSpacing) {
      throw std::invalid_argument("centerline: duplicate consecutive vertices");
    }
    stations_.push_back(stations_.back() + len);
    seg_headings_.push_back(std::atan2(d.y, d.x));
  }
}

std::size_t Centerline::segment_index(double station) const {
  auto it = std::upper_bound(stations_.begin(), stations_.end(), station);
  const std::size_t idx = static_cast<std::size_t>(it - stations_.begin());
  if (idx == 0) return 0;
  return std::min(idx - 1, seg_headings_.size() - 1);
}

Vec2 Centerline::position_at(double station) const {
  const double s = std::clamp(station, 0.0, total_length());
  const std::size_t i = segment_index(s);
  const double seg_len = stations_[i + 1] - stations_[i];
  const double t = (s - stations_[i]) / seg_len;
  return vertices_[i] + (vertices_[i + 1] - vertices_[i]) * t;
}

double Centerline::heading_at(double station) const {
  const double s = std::clamp(station, 0.0, total_length());
  const std::size_t i = segment_index(s);
  const double h = seg_headings_[i];
  // Blend across the vertex shared with the previous or next segment.
  const double seg_len = stations_[i + 1] - stations_[i];
  if (i > 0) {
    const double prev_len = stations_[i] - stations_[i - 1];
    const double w = std::min({kBlendHalfWindow, 0.5 * prev_len, 0.5 * seg_len});
    if (w > 0.0 && s < stations_[i] + w) {
      const double h0 = seg_headings_[i - 1];
      const double r = (s - (stations_[i] - w)) / (2.0 * w);
      return wrap_angle(h0 + r * wrap_angle(h - h0));
    }
  }
  if (i + 1 < seg_headings_.size()) {
    const double next_len = stations_[i + 2] - stations_[i + 1];
    const double w = std::min({kBlendHalfWindow, 0.5 * seg_len, 0.5 * next_len});
    if (w > 0.0 && s > stations_[i + 1] - w) {
      const double h1 = seg_headings_[i + 1];
      const double r = (s - (stations_[i + 1] - w)) / (2.0 * w);
      return wrap_angle(h + r * wrap_angle(h1 - h));
    }
  }
  return h;
}

Pose2D station_lateral_to_cartesian(const Centerline& cl, double station, double lateral) {
  const double h = cl.heading_at(station);
  const Vec2 p = cl.position_at(station);
  return Pose2D{p.x - lateral * std::sin(h), p.y + lateral * std::cos(h), h};
}

namespace {

// Signed tangential residual: zero exactly where the point sits on the normal
// ray of the (blended-heading) frame at station d.
double tangential_residual(const Centerline& cl, const Vec2& point, double d) {
  const double h = cl.heading_at(d);
  const Vec2 c = cl.position_at(d);
  return (point.x - c.x) * std::cos(h) + (point.y - c.y) * std::sin(h);
}

double coarse_nearest_station(const Centerline& cl, const Vec2& point) {
  const auto& verts = cl.vertices();
  const auto& stations = cl.stations();
  double best_d2 = std::numeric_limits<double>::max();
  double best_station = 0.0;
  for (std::size_t i = 0; i + 1 < verts.size(); ++i) {
    const Vec2 ab = verts[i + 1] - verts[i];
    const double len2 = ab.dot(ab);
    const double t = std::clamp(ab.dot(point - verts[i]) / len2, 0.0, 1.0);
    const Vec2 q = verts[i] + ab * t;
    const double d2 = (point - q).dot(point - q);
    if (d2 < best_d2) {
      best_d2 = d2;
      best_station = stations[i] + t * std::sqrt(len2);
    }
  }
  return best_station;
}

}  // namespace

StationLateral project_to_centerline(const Centerline& cl, const Vec2& point) {
  const double total = cl.total_length();
  double station = coarse_nearest_station(cl, point);

  // Refine by bisection on the tangential residual; the coarse estimate is
  // exact away from vertex blend windows, so a small expanding bracket
  // suffices.
  double window = 0.6;
  bool bracketed = false;
  double lo = station, hi = station;
  for (int attempt = 0; attempt < 4; ++attempt) {
    lo = std::max(0.0, station - window);
    hi = std::min(total, station + window);
    if (tangential_residual(cl, point, lo) >= 0.0 && tangential_residual(cl, point, hi) <= 0.0) {
      bracketed = true;
      break;
    }
    window *= 2.0;
  }
  if (bracketed) {
    for (int iter = 0; iter < 80; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (tangential_residual(cl, point, mid) >= 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    station = 0.5 * (lo + hi);
  }

  station = std::clamp(station, 0.0, total);
  const double h = cl.heading_at(station);
  const Vec2 c = cl.position_at(station);
  const double lateral = -(point.x - c.x) * std::sin(h) + (point.y - c.y) * std::cos(h);
  return StationLateral{station, lateral};
}

}  // namespace clover::scene
