#pragma once

#include <span>

#include "assist/dae/params.hpp"

namespace assist::dae {

// k x input, oldest row first.
using WindowInput = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Exact GELU, x * Phi(x) with the erf-based normal CDF.
double gelu(double x);
double gelu_derivative(double x);
Vector gelu(const Vector& x);
double sigmoid(double x);

// r = GELU(W_m x + b_m).
Vector integrate(const Vector& x, const ModelParams& params);

// Encoder LSTM state after a step: h and c are the newest hidden and cell
// states; h_prev is the hidden state one step older, which becomes the skip
// source of the following step.
struct EncoderState {
  Vector h;
  Vector c;
  Vector h_prev;

  static EncoderState zeros(int hidden);
};

// Standard LSTM gates on [prev.h; r], then h = o * tanh(c) + prev.h_prev.
EncoderState encoder_step(const Vector& r, const EncoderState& prev, const ModelParams& params);

// One decoder LSTM step seeded with the encoder's final (h, c), no skip term,
// then x_hat = sigmoid(W_d2 GELU(W_d1 h_dec + b_d1) + b_d2).
Vector decode(const Vector& r, const EncoderState& enc, const ModelParams& params);

struct ForwardResult {
  Vector reconstruction;  // all `input` entries, each in (0, 1)
  Vector control;         // leading `control` entries of the reconstruction
};

// Throws std::invalid_argument unless the window is window x input.
ForwardResult forward_window(const WindowInput& window, const ModelParams& params);

struct LossAndGrad {
  double loss = 0.0;
  ModelParams grad;
};

// Mean squared error over the control slice only, with the exact gradient by
// backpropagation through time (including the identity path of the skip
// connection). Output entries outside the control slice get no gradient.
LossAndGrad loss_and_grad(const WindowInput& window, std::span<const double> target, const ModelParams& params);
double loss(const WindowInput& window, std::span<const double> target, const ModelParams& params);

}  // namespace assist::dae
