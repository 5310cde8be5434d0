#pragma once

#include "assist/dae/network.hpp"

namespace assist::dae {

// A minibatch of windows stored step-major: column t * size() + b holds step t
// of window b. Targets are control x size().
struct Batch {
  Matrix inputs;
  Matrix targets;

  int size() const { return static_cast<int>(targets.cols()); }
  WindowInput window(int b, int window_length) const;

  static Batch from_windows(const std::vector<WindowInput>& windows, const Matrix& targets);
};

// Batched forward/backward built on matrix products over all windows of a
// batch at once. Elementwise stages are split across OpenMP threads by column.
// Scratch buffers are reused between calls, so one kernel per thread.
class BatchKernel {
 public:
  explicit BatchKernel(const ModelDims& dims);

  // Mean loss over the batch; grad is overwritten with the gradient of that mean.
  double loss_and_grad(const ModelParams& params, const Batch& batch, ModelParams& grad);
  double loss(const ModelParams& params, const Batch& batch);

  // Control slice of the reconstruction for each window, control x B.
  Matrix predict_ci(const ModelParams& params, const Matrix& inputs);

 private:
  void forward(const ModelParams& params, const Matrix& inputs, int batch);

  ModelDims dims_;
  int batch_ = 0;
  Matrix a_, r_, enc_in_, gates_, c_, tanh_c_, h_;
  Matrix dec_gates_, c_dec_, tanh_c_dec_, h_dec_, pre1_, v_, y_;
};

// Serial reference: per-window loss_and_grad averaged over the batch.
LossAndGrad reference_batch_loss_and_grad(const ModelParams& params, const Batch& batch);

}  // namespace assist::dae
