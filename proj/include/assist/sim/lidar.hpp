#pragma once

#include <cstddef>
#include <vector>

#include "assist/sim/terrain_geometry.hpp"
#include "assist/sim/vehicle.hpp"

namespace assist::sim {

// 64-channel spinning LiDAR. Channel c has elevation top - c * step degrees,
// so channel 4 is horizontal and every fourth channel survives downsampling.
struct LidarSpec {
  int channels = 64;
  int azimuth_bins = 360;
  double top_elevation_deg = 2.0;
  double elevation_step_deg = 0.5;
  double mount_height = 1.8;
  double max_range = 120.0;
};

// Azimuth bin j points j degrees counter-clockwise from the vehicle's heading.
// Misses read max_range with height 0.
struct LidarScan {
  std::vector<double> elevation_deg;  // one per channel
  int azimuth_bins = 360;
  double max_range = 120.0;
  std::vector<double> ranges;   // channel-major, slant range in meters
  std::vector<double> heights;  // height of the return above ground

  int channels() const { return static_cast<int>(elevation_deg.size()); }
  std::size_t index(int channel, int azimuth) const {
    return static_cast<std::size_t>(channel) * azimuth_bins + azimuth;
  }
  double range(int channel, int azimuth) const { return ranges[index(channel, azimuth)]; }
  double height(int channel, int azimuth) const { return heights[index(channel, azimuth)]; }

  bool operator==(const LidarScan&) const = default;
};

// Casts every (channel, azimuth) ray against the canyon walls (vertical
// surfaces) and obstacles (vertical cylinders) from the sensor mounted on the
// vehicle. channels must be 64 or 16; the 16-channel scan is exactly the
// 64-channel scan with channels 0, 4, ..., 60 kept. Azimuths run in parallel.
LidarScan cast_lidar(const VehicleState& state, const TerrainGeometry& terrain, int channels,
                     const LidarSpec& spec = {});

// Serial reference: no spatial grid, no early termination.
LidarScan cast_lidar_reference(const VehicleState& state, const TerrainGeometry& terrain, int channels,
                               const LidarSpec& spec = {});

}  // namespace assist::sim
