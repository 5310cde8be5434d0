#include "assist/sim/geometry.hpp"

#include <algorithm>

namespace assist::sim {

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

Vec2 closest_point(const Segment& s, Vec2 p) {
  const Vec2 d = s.b - s.a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return s.a;
  const double t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
  return s.a + d * t;
}

std::optional<double> ray_segment(Vec2 origin, Vec2 dir, const Segment& s) {
  const Vec2 e = s.b - s.a;
  const double denom = cross(dir, e);
  if (std::abs(denom) < 1e-14) return std::nullopt;
  const Vec2 w = s.a - origin;
  const double t = cross(w, e) / denom;
  const double u = cross(w, dir) / denom;
  if (t < 0.0 || u < 0.0 || u > 1.0) return std::nullopt;
  return t;
}

std::optional<double> ray_circle(Vec2 origin, Vec2 dir, Vec2 center, double radius) {
  const Vec2 oc = origin - center;
  const double b = dot(oc, dir);
  const double c = dot(oc, oc) - radius * radius;
  const double disc = b * b - c;
  if (disc < 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  const double t0 = -b - sq;
  if (t0 >= 0.0) return t0;
  // Origin inside the circle: the surface is hit on the way out.
  const double t1 = -b + sq;
  if (t1 >= 0.0) return t1;
  return std::nullopt;
}

Vec2 OrientedBox::to_local(Vec2 p) const {
  const Vec2 d = p - center;
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  return {c * d.x + s * d.y, -s * d.x + c * d.y};
}

bool box_intersects_segment(const OrientedBox& box, const Segment& seg) {
  // Liang-Barsky clip of the segment against the box in its local frame.
  const Vec2 p0 = box.to_local(seg.a);
  const Vec2 p1 = box.to_local(seg.b);
  const Vec2 d = p1 - p0;
  double t0 = 0.0;
  double t1 = 1.0;
  const double p[4] = {-d.x, d.x, -d.y, d.y};
  const double q[4] = {p0.x + box.half_length, box.half_length - p0.x,
                       p0.y + box.half_width, box.half_width - p0.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0.0) {
      t0 = std::max(t0, r);
    } else {
      t1 = std::min(t1, r);
    }
    if (t0 > t1) return false;
  }
  return true;
}

bool box_intersects_circle(const OrientedBox& box, Vec2 center, double radius) {
  const Vec2 c = box.to_local(center);
  const double qx = std::clamp(c.x, -box.half_length, box.half_length);
  const double qy = std::clamp(c.y, -box.half_width, box.half_width);
  const double dx = c.x - qx;
  const double dy = c.y - qy;
  return dx * dx + dy * dy <= radius * radius;
}

}  // namespace assist::sim
