#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "assist/sim/geometry.hpp"

namespace assist::sim {

struct Obstacle {
  Vec2 center;
  double radius = 0.0;

  bool operator==(const Obstacle&) const = default;
};

// Procedural canyon: a centerline sampled at fixed arc-length spacing, a
// corridor half-width per centerline point, and circular obstacles.
struct TerrainSpec {
  std::uint64_t seed = 0;
  std::vector<Vec2> centerline;
  std::vector<double> half_width;
  std::vector<Obstacle> obstacles;
  double total_length = 0.0;

  bool operator==(const TerrainSpec&) const = default;
};

struct WidthRange {
  double min = 9.0;
  double max = 15.0;
};

struct TerrainOptions {
  // Mean along-track distance between obstacles; <= 0 disables obstacles.
  double obstacle_spacing = 120.0;
  double sample_spacing = 1.0;
  // Used only to validate the requested width range.
  double vehicle_width = 1.86;
};

// Throws std::invalid_argument for length_m <= 100, min >= max, or a minimum
// width that leaves less than 1 m of clearance around the vehicle.
TerrainSpec generate_terrain(std::uint64_t seed, double length_m = 1600.0,
                             WidthRange widths = {}, const TerrainOptions& options = {});

// Text export consumed by the browser client. Layout, one record per line:
//   assist-terrain 1
//   seed <u64>
//   total_length <m>
//   centerline <N>
//   <x> <y> <half_width>        (N lines)
//   obstacles <M>
//   <x> <y> <radius>            (M lines)
void write_terrain(std::ostream& os, const TerrainSpec& spec);
TerrainSpec read_terrain(std::istream& is);

}  // namespace assist::sim
