#include "assist/dae/batch_kernel.hpp"

#include <stdexcept>

namespace assist::dae {
namespace {

using Eigen::Index;

void apply_gelu(const Matrix& in, Matrix& out) {
  out.resize(in.rows(), in.cols());
  const Index cols = in.cols();
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < in.rows(); ++i) out(i, j) = gelu(in(i, j));
}

// Rows [0, 3H) sigmoid, rows [3H, 4H) tanh, in place on columns [col0, col0 + n).
void activate_gates(Matrix& z, Index col0, Index n, Index hidden) {
#pragma omp parallel for schedule(static)
  for (Index j = col0; j < col0 + n; ++j) {
    for (Index i = 0; i < 3 * hidden; ++i) z(i, j) = sigmoid(z(i, j));
    for (Index i = 3 * hidden; i < 4 * hidden; ++i) z(i, j) = std::tanh(z(i, j));
  }
}

void check(const ModelDims& d, const ModelParams& p) {
  if (!(d == p.dims)) throw std::invalid_argument("BatchKernel: parameter dims mismatch");
}

}  // namespace

WindowInput Batch::window(int b, int k) const {
  WindowInput w(k, inputs.rows());
  for (int t = 0; t < k; ++t) w.row(t) = inputs.col(static_cast<Index>(t) * size() + b).transpose();
  return w;
}

Batch Batch::from_windows(const std::vector<WindowInput>& windows, const Matrix& targets) {
  if (windows.empty() || static_cast<Index>(windows.size()) != targets.cols())
    throw std::invalid_argument("Batch: window count must match target columns");
  const Index k = windows.front().rows();
  const Index m = windows.front().cols();
  const Index n = static_cast<Index>(windows.size());
  Batch out;
  out.inputs.resize(m, k * n);
  out.targets = targets;
  for (Index b = 0; b < n; ++b) {
    if (windows[b].rows() != k || windows[b].cols() != m) throw std::invalid_argument("Batch: ragged windows");
    for (Index t = 0; t < k; ++t) out.inputs.col(t * n + b) = windows[b].row(t).transpose();
  }
  return out;
}

BatchKernel::BatchKernel(const ModelDims& dims) : dims_(dims) {}

void BatchKernel::forward(const ModelParams& p, const Matrix& x, int batch) {
  const Index k = dims_.window, h = dims_.hidden, nr = dims_.integration, nc = dims_.control;
  const Index n = batch;
  if (x.rows() != dims_.input || x.cols() != k * n) throw std::invalid_argument("BatchKernel: input shape mismatch");
  batch_ = batch;

  a_.noalias() = p.w_m * x;
  a_.colwise() += p.b_m;
  apply_gelu(a_, r_);

  // Input-side gate contributions for every step in one product.
  enc_in_.noalias() = p.w_enc.rightCols(nr) * r_;
  enc_in_.colwise() += p.b_enc;

  gates_.resize(4 * h, k * n);
  c_.resize(h, k * n);
  tanh_c_.resize(h, k * n);
  h_.resize(h, k * n);
  const auto w_hh = p.w_enc.leftCols(h);
  for (Index t = 0; t < k; ++t) {
    auto z = gates_.middleCols(t * n, n);
    z = enc_in_.middleCols(t * n, n);
    if (t >= 1) z.noalias() += w_hh * h_.middleCols((t - 1) * n, n);
    activate_gates(gates_, t * n, n, h);
#pragma omp parallel for schedule(static)
    for (Index b = 0; b < n; ++b) {
      const Index j = t * n + b;
      for (Index i = 0; i < h; ++i) {
        const double c_prev = t >= 1 ? c_(i, j - n) : 0.0;
        const double c = gates_(h + i, j) * c_prev + gates_(i, j) * gates_(3 * h + i, j);
        const double tc = std::tanh(c);
        c_(i, j) = c;
        tanh_c_(i, j) = tc;
        h_(i, j) = gates_(2 * h + i, j) * tc + (t >= 2 ? h_(i, j - 2 * n) : 0.0);
      }
    }
  }

  const Index last = (k - 1) * n;
  dec_gates_.noalias() = p.w_dec.leftCols(h) * h_.middleCols(last, n);
  dec_gates_.noalias() += p.w_dec.rightCols(nr) * r_.middleCols(last, n);
  dec_gates_.colwise() += p.b_dec;
  activate_gates(dec_gates_, 0, n, h);
  c_dec_.resize(h, n);
  tanh_c_dec_.resize(h, n);
  h_dec_.resize(h, n);
#pragma omp parallel for schedule(static)
  for (Index b = 0; b < n; ++b) {
    for (Index i = 0; i < h; ++i) {
      const double c = dec_gates_(h + i, b) * c_(i, last + b) + dec_gates_(i, b) * dec_gates_(3 * h + i, b);
      c_dec_(i, b) = c;
      tanh_c_dec_(i, b) = std::tanh(c);
      h_dec_(i, b) = dec_gates_(2 * h + i, b) * tanh_c_dec_(i, b);
    }
  }
  pre1_.noalias() = p.w_d1 * h_dec_;
  pre1_.colwise() += p.b_d1;
  apply_gelu(pre1_, v_);
  y_.noalias() = p.w_d2.topRows(nc) * v_;
  y_.colwise() += p.b_d2.head(nc);
  y_ = y_.unaryExpr([](double s) { return sigmoid(s); });
}

Matrix BatchKernel::predict_ci(const ModelParams& p, const Matrix& inputs) {
  check(dims_, p);
  if (inputs.cols() % dims_.window != 0) throw std::invalid_argument("BatchKernel: input columns not a multiple of window");
  forward(p, inputs, static_cast<int>(inputs.cols() / dims_.window));
  return y_;
}

double BatchKernel::loss(const ModelParams& p, const Batch& batch) {
  check(dims_, p);
  forward(p, batch.inputs, batch.size());
  return (y_ - batch.targets).squaredNorm() / (static_cast<double>(dims_.control) * batch.size());
}

double BatchKernel::loss_and_grad(const ModelParams& p, const Batch& batch, ModelParams& g) {
  check(dims_, p);
  if (batch.targets.rows() != dims_.control) throw std::invalid_argument("BatchKernel: target rows mismatch");
  const Index k = dims_.window, h = dims_.hidden, nr = dims_.integration, nc = dims_.control;
  const Index n = batch.size();
  forward(p, batch.inputs, batch.size());

  if (!(g.dims == dims_) || g.parameter_count() != parameter_count(dims_)) g = ModelParams::zeros(dims_);
  const Matrix diff = y_ - batch.targets;
  const double loss = diff.squaredNorm() / (static_cast<double>(nc) * n);

  const Matrix dy = (2.0 / (static_cast<double>(nc) * n)) * diff.cwiseProduct(y_.cwiseProduct((1.0 - y_.array()).matrix()));
  g.w_d2.setZero();
  g.b_d2.setZero();
  g.w_d2.topRows(nc).noalias() = dy * v_.transpose();
  g.b_d2.head(nc) = dy.rowwise().sum();

  Matrix dpre1 = p.w_d2.topRows(nc).transpose() * dy;
#pragma omp parallel for schedule(static)
  for (Index b = 0; b < n; ++b)
    for (Index i = 0; i < dpre1.rows(); ++i) dpre1(i, b) *= gelu_derivative(pre1_(i, b));
  g.w_d1.noalias() = dpre1 * h_dec_.transpose();
  g.b_d1 = dpre1.rowwise().sum();
  const Matrix dh_dec = p.w_d1.transpose() * dpre1;

  // Decoder LSTM.
  const Index last = (k - 1) * n;
  Matrix dz_dec(4 * h, n);
  Matrix dc(h, k * n), dh(h, k * n);
  dc.setZero();
  dh.setZero();
#pragma omp parallel for schedule(static)
  for (Index b = 0; b < n; ++b) {
    for (Index i = 0; i < h; ++i) {
      const double gi = dec_gates_(i, b), gf = dec_gates_(h + i, b), go = dec_gates_(2 * h + i, b),
                   gg = dec_gates_(3 * h + i, b);
      const double tc = tanh_c_dec_(i, b);
      const double dcv = dh_dec(i, b) * go * (1.0 - tc * tc);
      dz_dec(i, b) = dcv * gg * gi * (1.0 - gi);
      dz_dec(h + i, b) = dcv * c_(i, last + b) * gf * (1.0 - gf);
      dz_dec(2 * h + i, b) = dh_dec(i, b) * tc * go * (1.0 - go);
      dz_dec(3 * h + i, b) = dcv * gi * (1.0 - gg * gg);
      dc(i, last + b) = dcv * gf;
    }
  }
  g.w_dec.leftCols(h).noalias() = dz_dec * h_.middleCols(last, n).transpose();
  g.w_dec.rightCols(nr).noalias() = dz_dec * r_.middleCols(last, n).transpose();
  g.b_dec = dz_dec.rowwise().sum();
  dh.middleCols(last, n).noalias() = p.w_dec.leftCols(h).transpose() * dz_dec;
  Matrix dr(nr, k * n);
  dr.setZero();
  dr.middleCols(last, n).noalias() = p.w_dec.rightCols(nr).transpose() * dz_dec;

  // Encoder, newest step first.
  Matrix dz(4 * h, k * n);
  const auto w_hh = p.w_enc.leftCols(h);
  for (Index t = k - 1; t >= 0; --t) {
    const Index col = t * n;
    if (t >= 2) dh.middleCols(col - 2 * n, n) += dh.middleCols(col, n);
#pragma omp parallel for schedule(static)
    for (Index b = 0; b < n; ++b) {
      const Index j = col + b;
      for (Index i = 0; i < h; ++i) {
        const double gi = gates_(i, j), gf = gates_(h + i, j), go = gates_(2 * h + i, j), gg = gates_(3 * h + i, j);
        const double tc = tanh_c_(i, j);
        const double dct = dc(i, j) + dh(i, j) * go * (1.0 - tc * tc);
        const double c_prev = t >= 1 ? c_(i, j - n) : 0.0;
        dz(i, j) = dct * gg * gi * (1.0 - gi);
        dz(h + i, j) = dct * c_prev * gf * (1.0 - gf);
        dz(2 * h + i, j) = dh(i, j) * tc * go * (1.0 - go);
        dz(3 * h + i, j) = dct * gi * (1.0 - gg * gg);
        if (t >= 1) dc(i, j - n) += dct * gf;
      }
    }
    if (t >= 1) dh.middleCols(col - n, n).noalias() += w_hh.transpose() * dz.middleCols(col, n);
  }
  g.w_enc.leftCols(h).noalias() = dz.rightCols((k - 1) * n) * h_.leftCols((k - 1) * n).transpose();
  g.w_enc.rightCols(nr).noalias() = dz * r_.transpose();
  g.b_enc = dz.rowwise().sum();
  dr.noalias() += p.w_enc.rightCols(nr).transpose() * dz;

  // Integration layer.
  const Index cols = k * n;
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < nr; ++i) dr(i, j) *= gelu_derivative(a_(i, j));
  g.w_m.noalias() = dr * batch.inputs.transpose();
  g.b_m = dr.rowwise().sum();
  return loss;
}

LossAndGrad reference_batch_loss_and_grad(const ModelParams& p, const Batch& batch) {
  LossAndGrad out;
  out.grad = ModelParams::zeros(p.dims);
  const int n = batch.size();
  for (int b = 0; b < n; ++b) {
    const Vector target = batch.targets.col(b);
    const LossAndGrad one = loss_and_grad(batch.window(b, p.dims.window), {target.data(), static_cast<std::size_t>(target.size())}, p);
    out.loss += one.loss / n;
    out.grad.axpy(1.0 / n, one.grad);
  }
  return out;
}

}  // namespace assist::dae
