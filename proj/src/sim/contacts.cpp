#include "assist/sim/contacts.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace assist::sim {

const char* to_string(CrashKind kind) { return kind == CrashKind::Frontal ? "frontal" : "side"; }

std::vector<ContactEvent> detect_contacts(const VehicleState& state, const TerrainGeometry& terrain,
                                          const VehicleSpec& vehicle) {
  const OrientedBox box = footprint(state, vehicle);
  const double reach = std::hypot(box.half_length, box.half_width);
  std::vector<int> items;
  terrain.query(state.position - Vec2{reach, reach}, state.position + Vec2{reach, reach}, items);

  // Key: body kind, obstacle index (or -1 for walls). Value: distance from the
  // vehicle center, contact point, and surface normal pointing into the body.
  struct Touch {
    double distance;
    Vec2 point;
    Vec2 normal;
  };
  std::map<std::pair<int, int>, Touch> touching;
  auto record = [&](std::pair<int, int> key, Vec2 point, Vec2 normal) {
    const Touch t{norm(point - state.position), point, normal};
    auto [it, inserted] = touching.try_emplace(key, t);
    if (!inserted && t.distance < it->second.distance) it->second = t;
  };

  for (int item : items) {
    if (terrain.is_obstacle_item(item)) {
      const std::size_t j = static_cast<std::size_t>(item) - terrain.walls().size();
      const Obstacle& o = terrain.spec().obstacles[j];
      if (!box_intersects_circle(box, o.center, o.radius)) continue;
      // Normal from the nearest footprint point toward the obstacle center.
      const Vec2 local = box.to_local(o.center);
      const Vec2 near{std::clamp(local.x, -box.half_length, box.half_length),
                      std::clamp(local.y, -box.half_width, box.half_width)};
      const Vec2 fwd = unit(state.yaw);
      const Vec2 near_world = state.position + fwd * near.x + left_normal(fwd) * near.y;
      Vec2 normal = o.center - near_world;
      if (norm(normal) == 0.0) normal = o.center - state.position;
      const double len = norm(normal);
      record({static_cast<int>(Body::Obstacle), static_cast<int>(j)},
             len > 0.0 ? o.center - normal * (o.radius / len) : o.center, normal);
    } else {
      const WallSegment& w = terrain.walls()[static_cast<std::size_t>(item)];
      if (!box_intersects_segment(box, w.seg)) continue;
      const Vec2 point = closest_point(w.seg, state.position);
      Vec2 normal = left_normal(w.seg.b - w.seg.a);
      if (dot(normal, point - state.position) < 0.0) normal = normal * -1.0;
      record({static_cast<int>(w.body), -1}, point, normal);
    }
  }

  std::vector<ContactEvent> events;
  events.reserve(touching.size());
  for (const auto& [key, t] : touching) {
    ContactEvent ev;
    ev.contact_point = t.point;
    ev.normal_angle = std::abs(wrap_angle(std::atan2(t.normal.y, t.normal.x) - state.yaw));
    ev.kind = ev.normal_angle <= kFrontalHalfAngle ? CrashKind::Frontal : CrashKind::Side;
    events.push_back(ev);
  }
  return events;
}

std::vector<ContactEvent> ContactMonitor::update(int tick, const std::vector<ContactEvent>& contacts) {
  std::vector<ContactEvent> out;
  if (contacts.empty()) {
    ++clear_ticks_;
    return out;
  }
  if (clear_ticks_ >= debounce_) {
    // Frontal outranks side when both happen in the same tick.
    auto pick = std::find_if(contacts.begin(), contacts.end(),
                             [](const ContactEvent& e) { return e.kind == CrashKind::Frontal; });
    ContactEvent ev = pick != contacts.end() ? *pick : contacts.front();
    ev.tick = tick;
    out.push_back(ev);
  }
  clear_ticks_ = 0;
  return out;
}

}  // namespace assist::sim
