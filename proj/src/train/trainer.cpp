#include "assist/train/trainer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "assist/dae/batch_kernel.hpp"

namespace assist::train {
namespace {

constexpr std::size_t kEvalBatch = 256;

std::vector<const drivers::Session*> pointers(const std::vector<drivers::Session>& sessions) {
  std::vector<const drivers::Session*> out;
  for (const auto& s : sessions) out.push_back(&s);
  return out;
}

// Independent streams derived from the one user seed.
std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

double lr_schedule(int epoch, const TrainConfig& config) {
  if (epoch < 0) throw std::invalid_argument("lr_schedule: epoch must be >= 0");
  return config.lr0 * std::pow(config.lr_decay, epoch / config.decay_every);
}

DataSplit split_sessions(const drivers::Dataset& data, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("validation fraction must be in (0, 1)");
  DataSplit split;
  const std::size_t n = data.sessions.size();
  if (n >= 5) {
    const auto held = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
    split.train.assign(data.sessions.begin(), data.sessions.end() - static_cast<std::ptrdiff_t>(held));
    split.validation.assign(data.sessions.end() - static_cast<std::ptrdiff_t>(held), data.sessions.end());
    return split;
  }
  for (const auto& s : data.sessions) {
    const auto held = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(s.steps.size())));
    const auto cut = s.steps.begin() + static_cast<std::ptrdiff_t>(s.steps.size() - held);
    split.train.push_back({s.id, {s.steps.begin(), cut}});
    split.validation.push_back({s.id, {cut, s.steps.end()}});
  }
  return split;
}

double evaluate_mse(const dae::ModelParams& params, const WindowSet& windows, const dae::Matrix& noisy_last_ci) {
  if (noisy_last_ci.cols() != static_cast<Eigen::Index>(windows.size()))
    throw std::invalid_argument("evaluate_mse: one noisy control pair per window required");
  dae::BatchKernel kernel(params.dims);
  dae::Batch batch;
  std::vector<std::size_t> idx;
  double sum = 0.0;
  const int k = windows.window();
  for (std::size_t start = 0; start < windows.size(); start += kEvalBatch) {
    const std::size_t count = std::min(kEvalBatch, windows.size() - start);
    idx.resize(count);
    std::iota(idx.begin(), idx.end(), start);
    windows.fill_batch(idx, nullptr, nullptr, batch);
    const auto n = static_cast<Eigen::Index>(count);
    for (Eigen::Index b = 0; b < n; ++b)
      batch.inputs.block(0, (k - 1) * n + b, 2, 1) = noisy_last_ci.col(static_cast<Eigen::Index>(start) + b);
    const dae::Matrix pred = kernel.predict_ci(params, batch.inputs);
    sum += (pred - batch.targets).squaredNorm();
  }
  return sum / (2.0 * static_cast<double>(windows.size()));
}

TrainResult train(const drivers::Dataset& data, const TrainConfig& cfg, const EpochCallback& on_epoch) {
  if (cfg.batch_size < 1 || cfg.epochs < 1 || cfg.decay_every < 1 || !(cfg.lr0 > 0.0))
    throw std::invalid_argument("train: invalid configuration");
  if (data.step_count() == 0) throw std::invalid_argument("train: empty dataset");
  const int k = cfg.dims.window;
  const DataSplit split = split_sessions(data, cfg.validation_fraction);
  const auto train_ptrs = pointers(split.train);
  const auto val_ptrs = pointers(split.validation);
  const WindowSet train_set(train_ptrs, k);
  const WindowSet val_set(val_ptrs, k);
  if (train_set.size() < static_cast<std::size_t>(cfg.batch_size))
    throw std::invalid_argument("train: fewer training windows than one batch");
  if (val_set.size() == 0) throw std::invalid_argument("train: no validation windows");

  TrainResult result;
  result.train_windows = train_set.size();
  result.val_windows = val_set.size();

  // Fixed corruption of the held-out set so epochs are comparable.
  std::mt19937_64 val_rng(derive(cfg.seed, 1));
  NoiseInjector val_noise(cfg.noise);
  dae::Matrix noisy_val(2, static_cast<Eigen::Index>(val_set.size()));
  double noisy_sum = 0.0;
  for (std::size_t i = 0; i < val_set.size(); ++i) {
    const auto clean = val_set.target(i);
    double s = clean[0], p = clean[1];
    val_noise.apply(s, p, val_rng);
    noisy_val(0, static_cast<Eigen::Index>(i)) = s;
    noisy_val(1, static_cast<Eigen::Index>(i)) = p;
    noisy_sum += (s - clean[0]) * (s - clean[0]) + (p - clean[1]) * (p - clean[1]);
  }
  result.noisy_val_mse = noisy_sum / (2.0 * static_cast<double>(val_set.size()));

  dae::ModelParams params = dae::ModelParams::glorot(cfg.dims, cfg.seed);
  Adam adam(cfg.dims, cfg.adam);
  dae::BatchKernel kernel(cfg.dims);
  dae::Batch batch;
  dae::ModelParams grad = dae::ModelParams::zeros(cfg.dims);
  std::mt19937_64 rng(derive(cfg.seed, 2));
  NoiseInjector noise(cfg.noise);
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = lr_schedule(epoch, cfg);
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t count = std::min(static_cast<std::size_t>(cfg.batch_size), order.size() - start);
      train_set.fill_batch(std::span(order).subspan(start, count), &noise, &rng, batch);
      const double loss = kernel.loss_and_grad(params, batch, grad);
      if (!std::isfinite(loss) || !grad.all_finite())
        throw std::runtime_error("train: non-finite loss at epoch " + std::to_string(epoch + 1));
      adam.step(params, grad, lr);
      loss_sum += loss * static_cast<double>(count);
    }
    EpochRecord rec{epoch + 1, lr, loss_sum / static_cast<double>(order.size()), evaluate_mse(params, val_set, noisy_val)};
    if (!std::isfinite(rec.val_mse)) throw std::runtime_error("train: non-finite validation loss");
    result.history.push_back(rec);
    if (result.best_epoch < 0 || rec.val_mse < result.best_val_mse) {
      result.best = params;
      result.best_epoch = rec.epoch;
      result.best_val_mse = rec.val_mse;
    }
    if (on_epoch) on_epoch(rec);
  }
  return result;
}

void write_history(std::ostream& out, const std::vector<EpochRecord>& history) {
  auto num = [](double v) {
    char buf[32];
    return std::string(buf, std::to_chars(buf, buf + sizeof(buf), v).ptr);
  };
  out << "epoch,lr,train_mse,val_mse\n";
  for (const auto& r : history)
    out << r.epoch << ',' << num(r.lr) << ',' << num(r.train_mse) << ',' << num(r.val_mse) << '\n';
}

}  // namespace assist::train
