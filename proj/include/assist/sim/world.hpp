#pragma once

#include <span>
#include <vector>

#include "assist/sim/contacts.hpp"
#include "assist/sim/lidar.hpp"
#include "assist/sim/terrain_geometry.hpp"
#include "assist/sim/vehicle.hpp"

namespace assist::sim {

struct WorldConfig {
  double tick_seconds = 0.1;
  int substeps = 5;
  int reverse_ticks = 10;
  double side_contact_speed_factor = 0.5;
  int debounce_ticks = 5;
  // A tick spent in contact that advances less than this is blocked: the
  // platform cannot continue, so the contact counts as frontal and reverses.
  double blocked_distance = 0.02;
  double start_station = 5.0;
  double finish_margin = 5.0;
  // Run the LiDAR on the same 64-channel spec the scans are downsampled from.
  LidarSpec lidar = {};
};

struct TickResult {
  int tick = 0;
  VehicleState state;
  bool in_contact = false;                // any contact during the tick
  std::vector<ContactEvent> events;       // debounced crash events
  std::vector<Control> applied;           // control actually applied per substep
  bool reversing = false;
};

// One platform in one canyon. Each tick covers tick_seconds split into
// `substeps` integration steps; a crash never leaves the footprint
// overlapping a surface: the offending substep is rolled back. A frontal crash
// stops the platform and reverses it for `reverse_ticks` ticks; a side contact
// scrubs speed. A side contact that leaves the platform wedged is treated as
// frontal.
class World {
 public:
  explicit World(TerrainPtr terrain, VehicleSpec vehicle = {}, WorldConfig config = {});

  const VehicleState& state() const { return state_; }
  const TerrainGeometry& terrain() const { return *terrain_; }
  const TerrainPtr& terrain_ptr() const { return terrain_; }
  const VehicleSpec& vehicle() const { return vehicle_; }
  const WorldConfig& config() const { return config_; }
  int tick() const { return tick_; }
  double odometer() const { return odometer_; }
  bool reversing() const { return reverse_left_ > 0; }
  bool finished() const;

  LidarScan scan(int channels) const;

  // `profile` holds one control per substep (the interpolated command).
  TickResult step(std::span<const Control> profile);
  TickResult step(Control ci);

  // Places the platform; used by tests and scripted scenarios.
  void reset(const VehicleState& state);

 private:
  TerrainPtr terrain_;
  VehicleSpec vehicle_;
  WorldConfig config_;
  VehicleState state_;
  ContactMonitor monitor_;
  int tick_ = 0;
  int reverse_left_ = 0;
  double odometer_ = 0.0;
};

struct LateralOffset {
  double geometric = 0.0;  // centerline offset, positive to the left
  double lidar = 0.0;      // (right clearance - left clearance) / 2

  bool operator==(const LateralOffset&) const = default;
};

// Clearances from the horizontal channel: nearest return within +-45 degrees
// of each side.
double lidar_lateral_offset(const LidarScan& scan);

// Uses the global projection, so it signals an ambiguous station.
LateralOffset lateral_offset(const VehicleState& state, const TerrainGeometry& terrain,
                             const LidarSpec& lidar = {});

}  // namespace assist::sim
