#pragma once

#include <cmath>
#include <vector>

namespace clover::scene {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double k) const { return {x * k, y * k}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
};

struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;

  Vec2 position() const { return {x, y}; }
};

using Polygon = std::vector<Vec2>;

// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

// Absolute wrapped difference |wrap(a - b)|.
double angle_diff(double a, double b);

double distance(const Vec2& a, const Vec2& b);

double signed_area(const Polygon& poly);

double polygon_area(const Polygon& poly);

bool polygon_is_convex(const Polygon& poly);

// Boundary-inclusive point containment for a simple polygon (ray casting).
bool point_in_polygon(const Vec2& p, const Polygon& poly);

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

double segment_segment_distance(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

// Overlap test for simple polygons. Convex pairs go through a separating-axis
// test; the general path combines edge-pair intersection with mutual
// containment. Touching boundaries count as intersecting. Polygons must have
// at least three vertices and nonzero area.
bool polygons_intersect(const Polygon& a, const Polygon& b);

// Minimum distance between polygon boundaries; 0 when they overlap or touch.
double polygon_distance(const Polygon& a, const Polygon& b);

// Counterclockwise convex hull (monotone chain). Collinear inputs collapse
// to fewer than three vertices.
Polygon convex_hull(std::vector<Vec2> points);

// Axis-aligned vehicle box of size length x width centered on the pose,
// rotated to its heading. Corners are returned counterclockwise starting at
// the front-left corner.
Polygon oriented_box(const Pose2D& pose, double length, double width);

}  // namespace clover::scene
