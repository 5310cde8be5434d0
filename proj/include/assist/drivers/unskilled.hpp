#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string_view>

#include "assist/drivers/skilled.hpp"

namespace assist::drivers {

enum class NoiseMode { White, Correlated };

NoiseMode parse_noise_mode(std::string_view name);  // "white" | "correlated"
std::string_view to_string(NoiseMode mode);

// Noise in physical control units ([-1, 1] scale).
struct UnskilledConfig {
  NoiseMode mode = NoiseMode::White;
  double sigma_steer = 0.1;
  double sigma_pedal = 0.4;
  double tau = 1.0;  // correlation time of the mean-reverting mode, seconds
  double dt = 0.1;
};

// Driver used for closed-loop evaluation and synthetic service sessions:
// correlated noise strong enough that unassisted runs crash now and then.
inline constexpr UnskilledConfig kEvaluationDriver{NoiseMode::Correlated, 0.15, 0.4, 1.0, 0.1};

// White mode draws independent N(0, sigma^2) per tick. Correlated mode is an
// Ornstein-Uhlenbeck process sampled exactly at dt with the same stationary
// variance, started from its stationary distribution.
class NoiseProcess {
 public:
  NoiseProcess(const UnskilledConfig& config, std::uint64_t seed);

  sim::Control next();

 private:
  UnskilledConfig config_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  double rho_ = 0.0;
  sim::Control state_;
};

// Skilled control plus noise, clamped to the physical range.
class UnskilledDriver {
 public:
  UnskilledDriver(std::shared_ptr<const SkilledDriver> skilled, const UnskilledConfig& config, std::uint64_t seed);

  sim::Control control(const sim::VehicleState& state);
  const SkilledDriver& skilled() const { return *skilled_; }

 private:
  std::shared_ptr<const SkilledDriver> skilled_;
  NoiseProcess noise_;
};

// Noise seed of the synthetic driver on a terrain; assisted and unassisted
// runs on the same terrain share it, so they see the same noise sequence.
std::uint64_t driver_seed(std::uint64_t terrain_seed);

}  // namespace assist::drivers
