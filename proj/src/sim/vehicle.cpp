#include "assist/sim/vehicle.hpp"

#include <algorithm>

namespace assist::sim {
namespace {

void advance_pose(VehicleState& s, double dt, const VehicleSpec& spec) {
  const double v = s.speed;
  const double omega = v * std::tan(s.steer_angle) / spec.wheelbase;
  if (std::abs(omega) > 1e-12) {
    const double yaw1 = s.yaw + omega * dt;
    s.position = s.position + Vec2{v / omega * (std::sin(yaw1) - std::sin(s.yaw)),
                                   -v / omega * (std::cos(yaw1) - std::cos(s.yaw))};
    s.yaw = wrap_angle(yaw1);
  } else {
    s.position = s.position + unit(s.yaw) * (v * dt);
  }
}

}  // namespace

Control clamp_control(Control ci) {
  return {std::clamp(ci.steer, -1.0, 1.0), std::clamp(ci.pedal, -1.0, 1.0)};
}

VehicleState step_vehicle(const VehicleState& state, Control ci, double dt, const VehicleSpec& spec) {
  ci = clamp_control(ci);
  VehicleState next = state;
  advance_pose(next, dt, spec);

  const double target = ci.steer * spec.max_steer_angle;
  const double max_delta = spec.steer_rate * dt;
  next.steer_angle += std::clamp(target - state.steer_angle, -max_delta, max_delta);

  const double v = std::max(state.speed, 0.0);
  double accel = ci.pedal >= 0.0 ? ci.pedal * spec.accel_limit : ci.pedal * spec.brake_limit;
  if (v > 0.0) accel -= spec.rolling_drag + spec.aero_drag * v * v;
  next.speed = std::clamp(v + accel * dt, 0.0, spec.max_speed);
  return next;
}

VehicleState step_reverse(const VehicleState& state, double dt, const VehicleSpec& spec) {
  VehicleState next = state;
  next.speed = -spec.reverse_speed;
  next.steer_angle = 0.0;
  advance_pose(next, dt, spec);
  return next;
}

OrientedBox footprint(const VehicleState& state, const VehicleSpec& spec) {
  return {state.position, state.yaw, 0.5 * spec.length, 0.5 * spec.width};
}

}  // namespace assist::sim
