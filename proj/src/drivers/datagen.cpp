#include "assist/drivers/datagen.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace assist::drivers {

double terrain_length_for(int ticks, const SkilledConfig& skilled, const sim::WorldConfig& world) {
  return std::max(200.0, ticks * world.tick_seconds * skilled.max_speed * 1.1 + 2.0 * world.finish_margin + 50.0);
}

Session record_session(std::uint64_t seed, int ticks, const DatagenConfig& config) {
  if (ticks < 1) throw std::invalid_argument("record_session: ticks must be positive");
  const double length = terrain_length_for(ticks, config.skilled, config.world);
  auto terrain = sim::make_terrain(sim::generate_terrain(seed, length, config.widths, config.terrain));
  const SkilledDriver driver(terrain, config.vehicle, config.skilled);
  sim::World world(terrain, config.vehicle, config.world);

  Session session{seed, {}};
  session.steps.reserve(static_cast<std::size_t>(ticks));
  for (int t = 0; t < ticks && !world.finished(); ++t) {
    const sim::VehicleState& s = world.state();
    Step step;
    step.tick = world.tick();
    step.ci = driver.control(s);
    step.speed = s.speed;
    step.yaw = s.yaw;
    step.distances = prep::obstacle_distances(world.scan(16));
    const sim::TickResult r = world.step(step.ci);
    if (r.in_contact)
      throw std::runtime_error("skilled driver touched the terrain (seed " + std::to_string(seed) + ", tick " +
                               std::to_string(r.tick) + ")");
    session.steps.push_back(step);
  }
  return session;
}

int session_ticks(const DatagenConfig& config) {
  if (config.seeds.empty()) throw std::invalid_argument("generate_dataset: at least one seed required");
  if (!(config.minutes > 0.0)) throw std::invalid_argument("generate_dataset: minutes must be positive");
  const double total_ticks = config.minutes * 60.0 / config.world.tick_seconds;
  return static_cast<int>(std::lround(total_ticks / static_cast<double>(config.seeds.size())));
}

Dataset generate_dataset(const DatagenConfig& config) {
  const int per_seed = session_ticks(config);
  Dataset data;
  for (std::uint64_t seed : config.seeds) data.sessions.push_back(record_session(seed, per_seed, config));
  return data;
}

}  // namespace assist::drivers
