#include "clover/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace clover::scene {

namespace {

constexpr double kOnBoundaryEps = 1e-12;

void require_polygon(const Polygon& poly, const char* who) {
  if (poly.size() < 3) {
    throw std::invalid_argument(std::string(who) + ": polygon needs at least 3 vertices");
  }
  if (polygon_area(poly) <= 0.0) {
    throw std::invalid_argument(std::string(who) + ": polygon has zero area");
  }
}

bool point_on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const Vec2 ap = p - a;
  if (std::abs(ab.cross(ap)) > kOnBoundaryEps * std::max(1.0, ab.norm())) return false;
  const double t = ab.dot(ap);
  return t >= -kOnBoundaryEps && t <= ab.dot(ab) + kOnBoundaryEps;
}

int orientation_sign(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double v = (b - a).cross(c - a);
  if (v > kOnBoundaryEps) return 1;
  if (v < -kOnBoundaryEps) return -1;
  return 0;
}

// Separating-axis test for convex polygons; touching counts as overlap.
bool convex_intersect_sat(const Polygon& a, const Polygon& b) {
  const Polygon* polys[2] = {&a, &b};
  for (const Polygon* poly : polys) {
    const std::size_t n = poly->size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 edge = (*poly)[(i + 1) % n] - (*poly)[i];
      const Vec2 axis{-edge.y, edge.x};
      double min_a = std::numeric_limits<double>::max(), max_a = -min_a;
      for (const Vec2& v : a) {
        const double d = axis.dot(v);
        min_a = std::min(min_a, d);
        max_a = std::max(max_a, d);
      }
      double min_b = std::numeric_limits<double>::max(), max_b = -min_b;
      for (const Vec2& v : b) {
        const double d = axis.dot(v);
        min_b = std::min(min_b, d);
        max_b = std::max(max_b, d);
      }
      if (max_a < min_b - kOnBoundaryEps || max_b < min_a - kOnBoundaryEps) return false;
    }
  }
  return true;
}

}  // namespace

double wrap_angle(double a) {
  double y = std::fmod(a + M_PI, 2.0 * M_PI);
  if (y <= 0.0) y += 2.0 * M_PI;
  return y - M_PI;
}

double angle_diff(double a, double b) { return std::abs(wrap_angle(a - b)); }

double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

double signed_area(const Polygon& poly) {
  double acc = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    acc += poly[i].cross(poly[(i + 1) % n]);
  }
  return 0.5 * acc;
}

double polygon_area(const Polygon& poly) { return std::abs(signed_area(poly)); }

bool polygon_is_convex(const Polygon& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  int sign = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int s = orientation_sign(poly[i], poly[(i + 1) % n], poly[(i + 2) % n]);
    if (s == 0) continue;
    if (sign == 0) {
      sign = s;
    } else if (s != sign) {
      return false;
    }
  }
  return true;
}

bool point_in_polygon(const Vec2& p, const Polygon& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (point_on_segment(p, poly[i], poly[(i + 1) % n])) return true;
  }
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    const bool crosses = (a.y > p.y) != (b.y > p.y);
    if (crosses && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) {
      inside = !inside;
    }
  }
  return inside;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.dot(ab);
  if (len2 <= 0.0) return distance(p, a);
  const double t = std::clamp(ab.dot(p - a) / len2, 0.0, 1.0);
  return distance(p, a + ab * t);
}

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const int o1 = orientation_sign(a, b, c);
  const int o2 = orientation_sign(a, b, d);
  const int o3 = orientation_sign(c, d, a);
  const int o4 = orientation_sign(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && point_on_segment(c, a, b)) return true;
  if (o2 == 0 && point_on_segment(d, a, b)) return true;
  if (o3 == 0 && point_on_segment(a, c, d)) return true;
  if (o4 == 0 && point_on_segment(b, c, d)) return true;
  return false;
}

double segment_segment_distance(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  if (segments_intersect(a, b, c, d)) return 0.0;
  double best = point_segment_distance(a, c, d);
  best = std::min(best, point_segment_distance(b, c, d));
  best = std::min(best, point_segment_distance(c, a, b));
  best = std::min(best, point_segment_distance(d, a, b));
  return best;
}

bool polygons_intersect(const Polygon& a, const Polygon& b) {
  require_polygon(a, "polygons_intersect");
  require_polygon(b, "polygons_intersect");
  if (polygon_is_convex(a) && polygon_is_convex(b)) {
    return convex_intersect_sat(a, b);
  }
  const std::size_t na = a.size(), nb = b.size();
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      if (segments_intersect(a[i], a[(i + 1) % na], b[j], b[(j + 1) % nb])) return true;
    }
  }
  return point_in_polygon(a[0], b) || point_in_polygon(b[0], a);
}

double polygon_distance(const Polygon& a, const Polygon& b) {
  require_polygon(a, "polygon_distance");
  require_polygon(b, "polygon_distance");
  if (polygons_intersect(a, b)) return 0.0;
  double best = std::numeric_limits<double>::max();
  const std::size_t na = a.size(), nb = b.size();
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      best = std::min(best, segment_segment_distance(a[i], a[(i + 1) % na], b[j],
                                                     b[(j + 1) % nb]));
    }
  }
  return best;
}

Polygon convex_hull(std::vector<Vec2> points) {
  std::sort(points.begin(), points.end(), [](const Vec2& p, const Vec2& q) {
    return p.x < q.x || (p.x == q.x && p.y < q.y);
  });
  points.erase(std::unique(points.begin(), points.end(),
                           [](const Vec2& p, const Vec2& q) {
                             return p.x == q.x && p.y == q.y;
                           }),
               points.end());
  const std::size_t n = points.size();
  if (n < 3) return points;
  std::vector<Vec2> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && (hull[k - 1] - hull[k - 2]).cross(points[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = points[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    while (k >= lower && (hull[k - 1] - hull[k - 2]).cross(points[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return hull;
}

Polygon oriented_box(const Pose2D& pose, double length, double width) {
  if (length <= 0.0 || width <= 0.0) {
    throw std::invalid_argument("oriented_box: length and width must be positive");
  }
  const double c = std::cos(pose.heading);
  const double s = std::sin(pose.heading);
  const double hl = 0.5 * length;
  const double hw = 0.5 * width;
  auto corner = [&](double dx, double dy) {
    return Vec2{pose.x + dx * c - dy * s, pose.y + dx * s + dy * c};
  };
  return {corner(hl, hw), corner(-hl, hw), corner(-hl, -hw), corner(hl, -hw)};
}

}  // namespace clover::scene
