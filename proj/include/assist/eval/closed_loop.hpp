#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "assist/dae/params.hpp"
#include "assist/drivers/unskilled.hpp"
#include "assist/eval/metrics.hpp"
#include "assist/sim/terrain.hpp"

namespace assist::eval {

struct ClosedLoopConfig {
  drivers::SkilledConfig skilled;
  drivers::UnskilledConfig driver = drivers::kEvaluationDriver;
  double terrain_length = 1600.0;
  sim::WidthRange widths;
  sim::TerrainOptions terrain;
  sim::VehicleSpec vehicle;
  sim::WorldConfig world;
  int max_ticks = 6000;
};

// Drives one terrain with the unskilled driver, seeded by driver_seed. With assist on the driver's
// control goes through the assistance pipeline; otherwise it is applied as is.
// Stops at the end of the terrain or after max_ticks.
DriveLog closed_loop_run(std::shared_ptr<const dae::ModelParams> params, std::uint64_t terrain_seed,
                         const ClosedLoopConfig& config, bool assist);

struct PairedRuns {
  std::vector<std::uint64_t> seeds;
  std::vector<MetricsReport> unassisted;
  std::vector<MetricsReport> assisted;
};

// Both conditions on every seed. Seeds run on OpenMP threads.
PairedRuns run_paired(std::shared_ptr<const dae::ModelParams> params, const std::vector<std::uint64_t>& seeds,
                      const ClosedLoopConfig& config);
// Same results computed one run at a time.
PairedRuns run_paired_serial(std::shared_ptr<const dae::ModelParams> params, const std::vector<std::uint64_t>& seeds,
                             const ClosedLoopConfig& config);

}  // namespace assist::eval
