#pragma once

#include <vector>

#include "assist/sim/terrain_geometry.hpp"
#include "assist/sim/vehicle.hpp"

namespace assist::sim {

enum class CrashKind { Frontal, Side };

const char* to_string(CrashKind kind);

struct ContactEvent {
  int tick = 0;
  Vec2 contact_point;
  // Angle between the heading and the surface normal at the contact, taken
  // pointing into the struck body, in [0, pi].
  double normal_angle = 0.0;
  CrashKind kind = CrashKind::Side;

  bool operator==(const ContactEvent&) const = default;
};

// A contact is frontal when the struck surface lies within this angle of the heading.
inline constexpr double kFrontalHalfAngle = std::numbers::pi / 4.0;

// One contact per touching body (left wall, right wall, start cap, each
// obstacle) for the footprint at `state`. Tick is left at 0.
std::vector<ContactEvent> detect_contacts(const VehicleState& state, const TerrainGeometry& terrain,
                                          const VehicleSpec& vehicle = {});

// Groups per-tick contacts into episodes: an event is emitted on the first
// contact tick and again only after at least `debounce_ticks` contact-free ticks.
class ContactMonitor {
 public:
  explicit ContactMonitor(int debounce_ticks = 5) : debounce_(debounce_ticks) {}

  // `contacts` are the contacts seen during `tick`; returns the events to record.
  std::vector<ContactEvent> update(int tick, const std::vector<ContactEvent>& contacts);

 private:
  int debounce_;
  int clear_ticks_ = 1 << 20;
};

}  // namespace assist::sim
