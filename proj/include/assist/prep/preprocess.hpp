#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "assist/sim/lidar.hpp"
#include "assist/sim/vehicle.hpp"

namespace assist::prep {

inline constexpr std::size_t kControlSize = 2;
inline constexpr std::size_t kStateSize = 4;
inline constexpr std::size_t kDistanceSize = 180;
inline constexpr std::size_t kInputSize = kControlSize + kStateSize + kDistanceSize;  // 186

// Layout of a model input row: control, then state, then distances.
inline constexpr std::size_t kControlOffset = 0;
inline constexpr std::size_t kStateOffset = kControlOffset + kControlSize;
inline constexpr std::size_t kDistanceOffset = kStateOffset + kStateSize;

inline constexpr double kMaxSpeed = 30.0;     // m/s
inline constexpr double kMaxDistance = 50.0;  // m
inline constexpr double kObstacleMinHeight = 0.3;  // m above the ground plane

using ControlVector = std::array<double, kControlSize>;    // (steer, pedal) in [0, 1]
using StateVector = std::array<double, kStateSize>;        // (speed, yaw, pitch, roll) in [0, 1]
using DistanceVector = std::array<double, kDistanceSize>;  // nearest obstacle / 50 m
using DistanceMeters = std::array<double, kDistanceSize>;
using ModelInput = std::array<double, kInputSize>;

// (x + 1) / 2 on each entry after clamping to [-1, 1].
ControlVector normalize_ci(sim::Control ci);
sim::Control denormalize_ci(const ControlVector& c);

// Speed / 30 (clamped to [0, 30] first); angles are wrapped to (-pi, pi] and
// mapped to (0, 1].
StateVector normalize_state(double speed, double yaw, double pitch = 0.0, double roll = 0.0);

// Keeps channels 0, 4, ..., 60. Throws std::invalid_argument unless the scan
// has 64 channels.
sim::LidarScan downsample_channels(const sim::LidarScan& scan64);

// Entry i covers azimuth i - 90 degrees relative to the heading (0 = full
// right, 90 = dead ahead, 179 = full left). A return counts as an obstacle
// when it sits at least 0.3 m above the ground; the entry is the smallest
// horizontal distance of those returns, clamped to 50 m.
DistanceMeters obstacle_distances(const sim::LidarScan& scan);
DistanceVector normalize_distances(const DistanceMeters& meters);
DistanceVector pointcloud_to_distance_vector(const sim::LidarScan& scan16);

ModelInput assemble_input(const ControlVector& c, const StateVector& s, const DistanceVector& d);
// Checked variant for runtime-sized components; throws std::invalid_argument
// on wrong lengths.
ModelInput assemble_input(std::span<const double> c, std::span<const double> s, std::span<const double> d);

}  // namespace assist::prep
