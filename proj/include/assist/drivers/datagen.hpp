#pragma once

#include <vector>

#include "assist/drivers/dataset.hpp"
#include "assist/drivers/skilled.hpp"
#include "assist/sim/terrain.hpp"
#include "assist/sim/world.hpp"

namespace assist::drivers {

struct DatagenConfig {
  std::vector<std::uint64_t> seeds;
  double minutes = 82.0;  // total across all seeds at 10 Hz
  SkilledConfig skilled;
  sim::WidthRange widths;
  sim::TerrainOptions terrain;
  sim::VehicleSpec vehicle;
  sim::WorldConfig world;
};

// Terrain long enough that the skilled driver cannot run out of road within
// `ticks` at its top speed.
double terrain_length_for(int ticks, const SkilledConfig& skilled, const sim::WorldConfig& world);

// Records the skilled driver for `ticks` ticks (fewer if it reaches the end).
// Throws std::runtime_error if the vehicle touches anything.
Session record_session(std::uint64_t seed, int ticks, const DatagenConfig& config);

// Ticks recorded per seed: minutes at 10 Hz split evenly across seeds.
int session_ticks(const DatagenConfig& config);

// One session per seed.
Dataset generate_dataset(const DatagenConfig& config);

}  // namespace assist::drivers
