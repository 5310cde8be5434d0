#pragma once

#include <cmath>

#include "assist/sim/terrain.hpp"
#include "assist/sim/terrain_geometry.hpp"

namespace assist::test {

// Straight corridor along +x from x = 0 to x = length, constant half-width,
// optional obstacles.
inline sim::TerrainSpec straight_corridor(double length, double half_width,
                                          std::vector<sim::Obstacle> obstacles = {}) {
  sim::TerrainSpec spec;
  spec.seed = 0;
  const int n = static_cast<int>(std::lround(length)) + 1;
  for (int i = 0; i < n; ++i) {
    spec.centerline.push_back({static_cast<double>(i), 0.0});
    spec.half_width.push_back(half_width);
  }
  spec.obstacles = std::move(obstacles);
  spec.total_length = static_cast<double>(n - 1);
  return spec;
}

}  // namespace assist::test
