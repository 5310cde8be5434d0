#pragma once

#include <random>
#include <span>
#include <utility>
#include <vector>

#include "assist/dae/batch_kernel.hpp"
#include "assist/drivers/dataset.hpp"

namespace assist::train {

// Standard deviations in normalized control units.
struct NoiseSpec {
  double sigma_steer = 0.05;
  double sigma_pedal = 0.2;
};

// Adds N(0, sigma^2) to a normalized control pair and clamps to [0, 1].
// Steer is drawn before pedal.
class NoiseInjector {
 public:
  explicit NoiseInjector(NoiseSpec spec = {}) : spec_(spec) {}

  void apply(double& steer, double& pedal, std::mt19937_64& rng);
  // The unclamped (steer, pedal) perturbation that apply would add.
  std::pair<double, double> draw(std::mt19937_64& rng);
  const NoiseSpec& spec() const { return spec_; }

 private:
  NoiseSpec spec_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Noise on the control entries of the last row only.
dae::WindowInput inject_noise(const dae::WindowInput& window, NoiseInjector& noise, std::mt19937_64& rng);
dae::WindowInput inject_noise(const dae::WindowInput& window, const NoiseSpec& spec, std::mt19937_64& rng);

// Clean model inputs of one or more sessions, with one window per position
// t >= k - 1 inside each session.
class WindowSet {
 public:
  WindowSet(std::span<const drivers::Session* const> sessions, int window);
  WindowSet(const drivers::Dataset& data, int window);

  std::size_t size() const { return ends_.size(); }
  int window() const { return window_; }

  dae::WindowInput input(std::size_t i) const;
  prep::ControlVector target(std::size_t i) const;

  // Copies the selected windows into a step-major batch. With a noise
  // injector, the last step's control entries are corrupted (in index order).
  void fill_batch(std::span<const std::size_t> indices, NoiseInjector* noise, std::mt19937_64* rng,
                  dae::Batch& batch) const;

 private:
  void add(const drivers::Session& s);

  int window_;
  dae::Matrix frames_;  // input x frame count
  std::vector<std::size_t> ends_;
};

using WindowPair = std::pair<dae::WindowInput, prep::ControlVector>;
// Explicit (window, clean target) list, mainly for inspection and tests.
std::vector<WindowPair> make_windows(const drivers::Dataset& data, int window);

}  // namespace assist::train
