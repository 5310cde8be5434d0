#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace assist::dae {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Layer widths. The defaults are the production network: 186 inputs, a
// 128-wide integration layer, 64-unit encoder/decoder LSTMs, a 128-wide
// output hidden layer, and a 10-step window.
struct ModelDims {
  int input = 186;
  int integration = 128;
  int hidden = 64;
  int output_hidden = 128;
  int window = 10;
  int control = 2;  // leading output entries that carry the control input

  int lstm_input() const { return hidden + integration; }
  bool operator==(const ModelDims&) const = default;
};

// Gate blocks are stacked row-wise in the LSTM matrices in the order
// input, forget, output, candidate; each block is hidden x (hidden + integration)
// acting on [h_prev; r].
enum Gate { kInputGate = 0, kForgetGate = 1, kOutputGate = 2, kCandidate = 3 };

struct ModelParams {
  ModelDims dims;
  Matrix w_m;    // integration x input
  Vector b_m;
  Matrix w_enc;  // 4*hidden x (hidden + integration)
  Vector b_enc;
  Matrix w_dec;
  Vector b_dec;
  Matrix w_d1;   // output_hidden x hidden
  Vector b_d1;
  Matrix w_d2;   // input x output_hidden
  Vector b_d2;

  static ModelParams zeros(const ModelDims& dims = {});
  // Each weight matrix (each LSTM gate block separately) is drawn uniformly
  // from +-sqrt(6 / (fan_in + fan_out)); biases start at zero.
  static ModelParams glorot(const ModelDims& dims, std::uint64_t seed);

  std::size_t parameter_count() const;
  bool all_finite() const;

  // Raw storage of every tensor; order is stable but unrelated to the
  // checkpoint layout.
  std::vector<std::span<double>> tensors();
  std::vector<std::span<const double>> tensors() const;

  // Checkpoint-order view: LSTM matrices split per gate, each entry row-major.
  // Gate blocks are not contiguous in storage, so this returns copies via
  // flatten() / assign().
  std::vector<double> flatten() const;
  void assign(std::span<const double> flat);

  void set_zero();
  // this += scale * other
  void axpy(double scale, const ModelParams& other);

  bool operator==(const ModelParams& other) const;
};

// Number of parameters implied by the dimensions.
std::size_t parameter_count(const ModelDims& dims);

}  // namespace assist::dae
