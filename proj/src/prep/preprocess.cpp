#include "assist/prep/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace assist::prep {

ControlVector normalize_ci(sim::Control ci) {
  const sim::Control c = sim::clamp_control(ci);
  return {(c.steer + 1.0) / 2.0, (c.pedal + 1.0) / 2.0};
}

sim::Control denormalize_ci(const ControlVector& c) { return {2.0 * c[0] - 1.0, 2.0 * c[1] - 1.0}; }

StateVector normalize_state(double speed, double yaw, double pitch, double roll) {
  auto angle = [](double a) { return (sim::wrap_angle(a) + std::numbers::pi) / (2.0 * std::numbers::pi); };
  return {std::clamp(speed, 0.0, kMaxSpeed) / kMaxSpeed, angle(yaw), angle(pitch), angle(roll)};
}

sim::LidarScan downsample_channels(const sim::LidarScan& scan64) {
  if (scan64.channels() != 64) throw std::invalid_argument("downsample_channels: expected a 64-channel scan");
  sim::LidarScan out;
  out.azimuth_bins = scan64.azimuth_bins;
  out.max_range = scan64.max_range;
  const auto bins = static_cast<std::size_t>(scan64.azimuth_bins);
  for (int c = 0; c < 64; c += 4) {
    out.elevation_deg.push_back(scan64.elevation_deg[c]);
    const auto first = scan64.index(c, 0);
    out.ranges.insert(out.ranges.end(), scan64.ranges.begin() + first, scan64.ranges.begin() + first + bins);
    out.heights.insert(out.heights.end(), scan64.heights.begin() + first, scan64.heights.begin() + first + bins);
  }
  return out;
}

DistanceMeters obstacle_distances(const sim::LidarScan& scan) {
  DistanceMeters out;
  out.fill(kMaxDistance);
  for (int c = 0; c < scan.channels(); ++c) {
    const double cos_e = std::cos(scan.elevation_deg[c] * std::numbers::pi / 180.0);
    for (int a = 0; a < scan.azimuth_bins; ++a) {
      double deg = a * 360.0 / scan.azimuth_bins;
      if (deg > 180.0) deg -= 360.0;
      const long i = std::lround(deg) + 90;
      if (i < 0 || i >= static_cast<long>(kDistanceSize)) continue;
      if (scan.height(c, a) < kObstacleMinHeight) continue;
      const double horizontal = std::min(scan.range(c, a) * cos_e, kMaxDistance);
      auto& slot = out[static_cast<std::size_t>(i)];
      slot = std::min(slot, horizontal);
    }
  }
  return out;
}

DistanceVector normalize_distances(const DistanceMeters& meters) {
  DistanceVector out;
  for (std::size_t i = 0; i < kDistanceSize; ++i) out[i] = std::clamp(meters[i], 0.0, kMaxDistance) / kMaxDistance;
  return out;
}

DistanceVector pointcloud_to_distance_vector(const sim::LidarScan& scan16) {
  return normalize_distances(obstacle_distances(scan16));
}

ModelInput assemble_input(const ControlVector& c, const StateVector& s, const DistanceVector& d) {
  return assemble_input(std::span<const double>(c), std::span<const double>(s), std::span<const double>(d));
}

ModelInput assemble_input(std::span<const double> c, std::span<const double> s, std::span<const double> d) {
  if (c.size() != kControlSize || s.size() != kStateSize || d.size() != kDistanceSize)
    throw std::invalid_argument("assemble_input: component lengths must be 2/4/180");
  ModelInput x{};
  std::copy(c.begin(), c.end(), x.begin() + kControlOffset);
  std::copy(s.begin(), s.end(), x.begin() + kStateOffset);
  std::copy(d.begin(), d.end(), x.begin() + kDistanceOffset);
  return x;
}

}  // namespace assist::prep
