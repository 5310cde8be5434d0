#pragma once

#include <vector>

#include "assist/sim/terrain_geometry.hpp"
#include "assist/sim/vehicle.hpp"

namespace assist::drivers {

struct SkilledConfig {
  // Lookahead = clamp(base + gain * speed, min, max).
  double lookahead_base = 4.0;
  double lookahead_gain = 0.5;
  double lookahead_min = 6.0;
  double lookahead_max = 20.0;
  double max_speed = 15.0;      // straight-line target, m/s
  double lateral_accel = 2.0;   // curvature law: v <= sqrt(a_lat / kappa)
  double comfort_decel = 2.0;   // m/s^2 used to brake ahead of tight sections
  double speed_gain = 0.3;      // pedal per m/s of speed error
  double preview_seconds = 0.5; // the speed target is read this far ahead
  double wall_margin = 1.6;     // keep this much between the vehicle side and a wall
  double obstacle_margin = 1.2;
  double avoid_ramp = 25.0;     // stations over which the path eases around an obstacle
};

// Pure-pursuit steering toward a clear-channel path plus a curvature-limited
// speed governor. The path and speed profile are precomputed per terrain.
class SkilledDriver {
 public:
  SkilledDriver(sim::TerrainPtr terrain, sim::VehicleSpec vehicle = {}, SkilledConfig config = {});

  sim::Control control(const sim::VehicleState& state) const;

  // Lateral offset of the planned path and its target speed at a station.
  double path_offset(double station) const;
  double target_speed(double station) const;
  sim::Vec2 path_point(double station) const;

  const SkilledConfig& config() const { return config_; }
  const sim::TerrainGeometry& terrain() const { return *terrain_; }

 private:
  double sample(const std::vector<double>& values, double station) const;

  sim::TerrainPtr terrain_;
  sim::VehicleSpec vehicle_;
  SkilledConfig config_;
  std::vector<double> offset_;  // per centerline sample
  std::vector<double> speed_;
};

// Front-wheel angle that puts a point at angle alpha and distance lookahead on
// the vehicle's arc.
double pure_pursuit_angle(double alpha, double lookahead, double wheelbase);

}  // namespace assist::drivers
