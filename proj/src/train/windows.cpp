#include "assist/train/windows.hpp"

#include <algorithm>
#include <stdexcept>

namespace assist::train {

std::pair<double, double> NoiseInjector::draw(std::mt19937_64& rng) {
  const double ns = spec_.sigma_steer * normal_(rng);
  const double np = spec_.sigma_pedal * normal_(rng);
  return {ns, np};
}

void NoiseInjector::apply(double& steer, double& pedal, std::mt19937_64& rng) {
  const auto [ns, np] = draw(rng);
  steer = std::clamp(steer + ns, 0.0, 1.0);
  pedal = std::clamp(pedal + np, 0.0, 1.0);
}

dae::WindowInput inject_noise(const dae::WindowInput& window, NoiseInjector& noise, std::mt19937_64& rng) {
  if (window.rows() < 1 || window.cols() < static_cast<Eigen::Index>(prep::kControlSize))
    throw std::invalid_argument("inject_noise: empty window");
  dae::WindowInput out = window;
  const Eigen::Index last = out.rows() - 1;
  noise.apply(out(last, 0), out(last, 1), rng);
  return out;
}

dae::WindowInput inject_noise(const dae::WindowInput& window, const NoiseSpec& spec, std::mt19937_64& rng) {
  NoiseInjector noise(spec);
  return inject_noise(window, noise, rng);
}

WindowSet::WindowSet(std::span<const drivers::Session* const> sessions, int window) : window_(window) {
  if (window < 1) throw std::invalid_argument("make_windows: k must be >= 1");
  std::size_t frames = 0;
  for (const auto* s : sessions) frames += s->steps.size();
  frames_.resize(static_cast<Eigen::Index>(prep::kInputSize), static_cast<Eigen::Index>(frames));
  std::size_t col = 0;
  for (const auto* s : sessions) {
    const std::size_t first = col;
    for (const auto& st : s->steps) {
      const prep::ModelInput x = drivers::model_input(st);
      frames_.col(static_cast<Eigen::Index>(col++)) = Eigen::Map<const dae::Vector>(x.data(), x.size());
    }
    for (std::size_t t = first + window - 1; t < col; ++t) ends_.push_back(t);
  }
}

namespace {
std::vector<const drivers::Session*> all_sessions(const drivers::Dataset& data) {
  std::vector<const drivers::Session*> out;
  for (const auto& s : data.sessions) out.push_back(&s);
  return out;
}
}  // namespace

WindowSet::WindowSet(const drivers::Dataset& data, int window) : WindowSet(all_sessions(data), window) {}

dae::WindowInput WindowSet::input(std::size_t i) const {
  const std::size_t first = ends_.at(i) + 1 - window_;
  dae::WindowInput w(window_, frames_.rows());
  for (int t = 0; t < window_; ++t) w.row(t) = frames_.col(static_cast<Eigen::Index>(first + t)).transpose();
  return w;
}

prep::ControlVector WindowSet::target(std::size_t i) const {
  const auto col = static_cast<Eigen::Index>(ends_.at(i));
  return {frames_(0, col), frames_(1, col)};
}

void WindowSet::fill_batch(std::span<const std::size_t> indices, NoiseInjector* noise, std::mt19937_64* rng,
                           dae::Batch& batch) const {
  const auto n = static_cast<Eigen::Index>(indices.size());
  batch.inputs.resize(frames_.rows(), window_ * n);
  batch.targets.resize(static_cast<Eigen::Index>(prep::kControlSize), n);
  for (Eigen::Index b = 0; b < n; ++b) {
    const std::size_t end = ends_.at(indices[static_cast<std::size_t>(b)]);
    const std::size_t first = end + 1 - window_;
    for (int t = 0; t < window_; ++t) batch.inputs.col(t * n + b) = frames_.col(static_cast<Eigen::Index>(first + t));
    batch.targets(0, b) = frames_(0, static_cast<Eigen::Index>(end));
    batch.targets(1, b) = frames_(1, static_cast<Eigen::Index>(end));
    if (noise) {
      const Eigen::Index col = (window_ - 1) * n + b;
      noise->apply(batch.inputs(0, col), batch.inputs(1, col), *rng);
    }
  }
}

std::vector<WindowPair> make_windows(const drivers::Dataset& data, int window) {
  const WindowSet set(data, window);
  std::vector<WindowPair> out;
  out.reserve(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) out.emplace_back(set.input(i), set.target(i));
  return out;
}

}  // namespace assist::train
