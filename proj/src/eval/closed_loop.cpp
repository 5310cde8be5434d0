#include "assist/eval/closed_loop.hpp"

#include <exception>

#include "assist/service/pipeline.hpp"
#include "assist/sim/world.hpp"

namespace assist::eval {

DriveLog closed_loop_run(std::shared_ptr<const dae::ModelParams> params, std::uint64_t terrain_seed,
                         const ClosedLoopConfig& cfg, bool assist) {
  auto terrain = sim::make_terrain(sim::generate_terrain(terrain_seed, cfg.terrain_length, cfg.widths, cfg.terrain));
  auto skilled = std::make_shared<const drivers::SkilledDriver>(terrain, cfg.vehicle, cfg.skilled);
  drivers::UnskilledDriver driver(skilled, cfg.driver, drivers::driver_seed(terrain_seed));
  sim::World world(terrain, cfg.vehicle, cfg.world);
  service::AssistPipeline pipeline(assist ? std::move(params) : nullptr, assist, cfg.world.substeps);

  DriveLog log;
  log.terrain_seed = terrain_seed;
  log.assist = assist;
  log.tick_seconds = cfg.world.tick_seconds;
  for (int t = 0; t < cfg.max_ticks && !world.finished(); ++t) {
    LogRecord rec;
    rec.tick = world.tick();
    rec.state = world.state();
    const sim::LidarScan scan = world.scan(16);
    rec.offset = {terrain->project(rec.state.position).offset, sim::lidar_lateral_offset(scan)};
    rec.raw = driver.control(rec.state);
    const service::PipelineOutput out =
        world.reversing() ? pipeline.bypass(rec.raw) : pipeline.process(rec.raw, rec.state, scan);
    rec.assisted = prep::denormalize_ci(out.assisted);
    const sim::TickResult r = world.step(out.profile);
    rec.applied = r.applied.back();
    rec.in_contact = r.in_contact;
    rec.events = r.events;
    log.records.push_back(std::move(rec));
  }
  log.finished = world.finished();
  log.distance = world.odometer();
  return log;
}

namespace {

PairedRuns prepare(const std::vector<std::uint64_t>& seeds) {
  PairedRuns out;
  out.seeds = seeds;
  out.unassisted.resize(seeds.size());
  out.assisted.resize(seeds.size());
  return out;
}

}  // namespace

PairedRuns run_paired(std::shared_ptr<const dae::ModelParams> params, const std::vector<std::uint64_t>& seeds,
                      const ClosedLoopConfig& cfg) {
  PairedRuns out = prepare(seeds);
  const long jobs = static_cast<long>(2 * seeds.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1)
  for (long j = 0; j < jobs; ++j) {
    try {
      const auto i = static_cast<std::size_t>(j / 2);
      const bool assist = j % 2 == 1;
      const MetricsReport m = compute_metrics(closed_loop_run(params, seeds[i], cfg, assist));
      (assist ? out.assisted : out.unassisted)[i] = m;
    } catch (...) {
#pragma omp critical(assist_closed_loop_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

PairedRuns run_paired_serial(std::shared_ptr<const dae::ModelParams> params, const std::vector<std::uint64_t>& seeds,
                             const ClosedLoopConfig& cfg) {
  PairedRuns out = prepare(seeds);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    out.unassisted[i] = compute_metrics(closed_loop_run(params, seeds[i], cfg, false));
    out.assisted[i] = compute_metrics(closed_loop_run(params, seeds[i], cfg, true));
  }
  return out;
}

}  // namespace assist::eval
