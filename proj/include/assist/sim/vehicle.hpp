#pragma once

#include "assist/sim/geometry.hpp"

namespace assist::sim {

// Pickup-truck platform. Footprint is fixed; the remaining values are
// plausible for a vehicle of this class.
struct VehicleSpec {
  double width = 1.86;
  double length = 4.5;
  double wheelbase = 2.8;
  double max_speed = 30.0;
  double max_steer_angle = 0.55;
  double steer_rate = 1.0;   // rad/s
  double accel_limit = 3.0;  // m/s^2 at full throttle
  double brake_limit = 6.0;  // m/s^2 at full brake
  double rolling_drag = 0.05;
  double aero_drag = 0.0005;  // per (m/s)^2
  double reverse_speed = 1.5;
};

// Physical control input: steer and combined pedal, both in [-1, 1].
struct Control {
  double steer = 0.0;
  double pedal = 0.0;

  bool operator==(const Control&) const = default;
};

Control clamp_control(Control ci);

struct VehicleState {
  Vec2 position;
  double yaw = 0.0;  // (-pi, pi]
  // Non-negative except while the platform reverses after a frontal crash.
  double speed = 0.0;
  double steer_angle = 0.0;
  double station = 0.0;

  bool operator==(const VehicleState&) const = default;
};

// Kinematic bicycle step. The pose advances along the exact arc implied by the
// speed and steer angle at the start of the step; steering then slews toward
// the commanded angle and speed integrates the pedal through the accel/brake
// limits. Forward speed is clamped to [0, max_speed]. Station is not touched.
VehicleState step_vehicle(const VehicleState& state, Control ci, double dt, const VehicleSpec& spec);

// Reverse creep used after a frontal crash: fixed negative speed, wheels straight.
VehicleState step_reverse(const VehicleState& state, double dt, const VehicleSpec& spec);

OrientedBox footprint(const VehicleState& state, const VehicleSpec& spec);

}  // namespace assist::sim
