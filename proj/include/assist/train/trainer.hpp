#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "assist/dae/params.hpp"
#include "assist/drivers/dataset.hpp"
#include "assist/train/adam.hpp"
#include "assist/train/windows.hpp"

namespace assist::train {

struct TrainConfig {
  dae::ModelDims dims;  // dims.window is k
  int batch_size = 64;
  double lr0 = 0.005;
  double lr_decay = 0.1;
  int decay_every = 20;
  int epochs = 50;
  NoiseSpec noise;
  AdamConfig adam;
  std::uint64_t seed = 1;
  double validation_fraction = 0.1;
};

// lr0 * decay^floor(epoch / decay_every)
double lr_schedule(int epoch, const TrainConfig& config);

struct DataSplit {
  std::vector<drivers::Session> train;
  std::vector<drivers::Session> validation;
};

// With five or more sessions the last ceil(fraction * n) whole sessions are
// held out. With fewer, each session's trailing fraction of steps is held out.
DataSplit split_sessions(const drivers::Dataset& data, double validation_fraction);

struct EpochRecord {
  int epoch = 0;  // 1-based
  double lr = 0.0;
  double train_mse = 0.0;  // mean minibatch loss on noisy windows
  double val_mse = 0.0;    // MSE(denoised, clean) on the held-out windows
};

struct TrainResult {
  dae::ModelParams best;
  int best_epoch = -1;
  double best_val_mse = 0.0;
  // MSE(noisy, clean) of the held-out control inputs under the same noise draw
  // as val_mse.
  double noisy_val_mse = 0.0;
  std::size_t train_windows = 0;
  std::size_t val_windows = 0;
  std::vector<EpochRecord> history;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

// Minibatch Adam on freshly corrupted windows each epoch. Throws
// std::invalid_argument when there are fewer training windows than one batch
// or no validation windows, and std::runtime_error on a non-finite loss.
TrainResult train(const drivers::Dataset& data, const TrainConfig& config, const EpochCallback& on_epoch = {});

// Mean squared control error of the model on fixed noisy copies of `windows`.
double evaluate_mse(const dae::ModelParams& params, const WindowSet& windows, const dae::Matrix& noisy_last_ci);

// Comma-separated table: epoch,lr,train_mse,val_mse
void write_history(std::ostream& out, const std::vector<EpochRecord>& history);

}  // namespace assist::train
