#pragma once

#include <cmath>
#include <numbers>
#include <optional>

namespace assist::sim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr bool operator==(const Vec2&) const = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }
// Counter-clockwise perpendicular.
constexpr Vec2 left_normal(Vec2 a) { return {-a.y, a.x}; }

// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

struct Segment {
  Vec2 a;
  Vec2 b;
};

// Closest point on segment [a, b] to p.
Vec2 closest_point(const Segment& s, Vec2 p);

// Distance along the ray (origin + t * dir, |dir| = 1) to the segment, if hit.
std::optional<double> ray_segment(Vec2 origin, Vec2 dir, const Segment& s);

// Nearest non-negative ray parameter at which the ray enters the circle.
std::optional<double> ray_circle(Vec2 origin, Vec2 dir, Vec2 center, double radius);

// Oriented rectangle (vehicle footprint).
struct OrientedBox {
  Vec2 center;
  double yaw = 0.0;
  double half_length = 0.0;
  double half_width = 0.0;

  Vec2 to_local(Vec2 p) const;
};

bool box_intersects_segment(const OrientedBox& box, const Segment& s);
bool box_intersects_circle(const OrientedBox& box, Vec2 center, double radius);

}  // namespace assist::sim
