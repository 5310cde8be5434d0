#include "assist/sim/lidar.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace assist::sim {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

LidarScan empty_scan(int channels, const LidarSpec& spec) {
  if (channels != 64 && channels != 16) throw std::invalid_argument("lidar: channels must be 64 or 16");
  const int stride = spec.channels / channels;
  LidarScan scan;
  scan.azimuth_bins = spec.azimuth_bins;
  scan.max_range = spec.max_range;
  for (int c = 0; c < channels; ++c) {
    scan.elevation_deg.push_back(spec.top_elevation_deg - (c * stride) * spec.elevation_step_deg);
  }
  const std::size_t n = static_cast<std::size_t>(channels) * spec.azimuth_bins;
  scan.ranges.assign(n, spec.max_range);
  scan.heights.assign(n, 0.0);
  return scan;
}

// Resolves one channel against the sorted horizontal hits of its azimuth.
void resolve_channel(LidarScan& scan, int channel, int azimuth, const std::vector<RayHit>& hits,
                     const LidarSpec& spec) {
  const double e = scan.elevation_deg[channel] * kDeg;
  const double tan_e = std::tan(e);
  const double cos_e = std::cos(e);
  const double ground = e < 0.0 ? spec.mount_height / -tan_e : std::numeric_limits<double>::infinity();
  const std::size_t idx = scan.index(channel, azimuth);
  for (const RayHit& h : hits) {
    if (h.distance > ground) break;
    const double z = spec.mount_height + h.distance * tan_e;
    if (z <= h.height) {
      const double slant = h.distance / cos_e;
      if (slant <= spec.max_range) {
        scan.ranges[idx] = slant;
        scan.heights[idx] = z;
      }
      return;
    }
  }
  if (std::isfinite(ground)) {
    const double slant = ground / cos_e;
    if (slant <= spec.max_range) {
      scan.ranges[idx] = slant;
      scan.heights[idx] = 0.0;
    }
  }
}

LidarScan cast_parallel(const VehicleState& state, const TerrainGeometry& terrain, int channels, const LidarSpec& spec) {
  LidarScan scan = empty_scan(channels, spec);
  const double block_slope = std::tan(spec.top_elevation_deg * kDeg);
#pragma omp parallel
  {
    std::vector<RayHit> hits;
#pragma omp for schedule(static)
    for (int a = 0; a < spec.azimuth_bins; ++a) {
      const Vec2 dir = unit(state.yaw + a * (360.0 / spec.azimuth_bins) * kDeg);
      terrain.cast_ray(state.position, dir, spec.max_range, spec.mount_height, block_slope, hits);
      for (int c = 0; c < channels; ++c) resolve_channel(scan, c, a, hits, spec);
    }
  }
  return scan;
}

}  // namespace

LidarScan cast_lidar(const VehicleState& state, const TerrainGeometry& terrain, int channels, const LidarSpec& spec) {
  return cast_parallel(state, terrain, channels, spec);
}

LidarScan cast_lidar_reference(const VehicleState& state, const TerrainGeometry& terrain, int channels,
                               const LidarSpec& spec) {
  LidarScan scan = empty_scan(channels, spec);
  std::vector<RayHit> hits;
  for (int a = 0; a < spec.azimuth_bins; ++a) {
    const Vec2 dir = unit(state.yaw + a * (360.0 / spec.azimuth_bins) * kDeg);
    terrain.cast_ray_brute(state.position, dir, spec.max_range, hits);
    for (int c = 0; c < channels; ++c) resolve_channel(scan, c, a, hits, spec);
  }
  return scan;
}

}  // namespace assist::sim
