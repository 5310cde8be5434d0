#include "assist/drivers/unskilled.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace assist::drivers {

NoiseMode parse_noise_mode(std::string_view name) {
  if (name == "white") return NoiseMode::White;
  if (name == "correlated") return NoiseMode::Correlated;
  throw std::invalid_argument("unknown noise mode: " + std::string(name));
}

std::string_view to_string(NoiseMode mode) { return mode == NoiseMode::White ? "white" : "correlated"; }

NoiseProcess::NoiseProcess(const UnskilledConfig& config, std::uint64_t seed) : config_(config), rng_(seed) {
  if (config_.sigma_steer < 0.0 || config_.sigma_pedal < 0.0) throw std::invalid_argument("noise sigma must be >= 0");
  if (config_.mode == NoiseMode::Correlated) {
    if (!(config_.tau > 0.0) || !(config_.dt > 0.0)) throw std::invalid_argument("noise tau and dt must be positive");
    rho_ = std::exp(-config_.dt / config_.tau);
    state_ = {config_.sigma_steer * normal_(rng_), config_.sigma_pedal * normal_(rng_)};
  }
}

sim::Control NoiseProcess::next() {
  const double xs = normal_(rng_);
  const double xp = normal_(rng_);
  if (config_.mode == NoiseMode::White) return {config_.sigma_steer * xs, config_.sigma_pedal * xp};
  const double innovation = std::sqrt(1.0 - rho_ * rho_);
  state_.steer = rho_ * state_.steer + config_.sigma_steer * innovation * xs;
  state_.pedal = rho_ * state_.pedal + config_.sigma_pedal * innovation * xp;
  return state_;
}

UnskilledDriver::UnskilledDriver(std::shared_ptr<const SkilledDriver> skilled, const UnskilledConfig& config,
                                 std::uint64_t seed)
    : skilled_(std::move(skilled)), noise_(config, seed) {
  if (!skilled_) throw std::invalid_argument("unskilled driver: null skilled driver");
}

sim::Control UnskilledDriver::control(const sim::VehicleState& state) {
  const sim::Control base = skilled_->control(state);
  const sim::Control n = noise_.next();
  return sim::clamp_control({base.steer + n.steer, base.pedal + n.pedal});
}

std::uint64_t driver_seed(std::uint64_t terrain_seed) {
  std::uint64_t z = terrain_seed + 0x632BE59BD9B4E019ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace assist::drivers
