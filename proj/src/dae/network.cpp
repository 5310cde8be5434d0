#include "assist/dae/network.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace assist::dae {

double gelu(double x) { return 0.5 * x * std::erfc(-x / std::numbers::sqrt2); }

double gelu_derivative(double x) {
  const double cdf = 0.5 * std::erfc(-x / std::numbers::sqrt2);
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  return cdf + x * pdf;
}

Vector gelu(const Vector& x) { return x.unaryExpr([](double v) { return gelu(v); }); }

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

namespace {

void check_input(const Vector& x, const ModelParams& p) {
  if (x.size() != p.dims.input) throw std::invalid_argument("integrate: input width mismatch");
}

void check_window(const WindowInput& w, const ModelParams& p) {
  if (w.rows() != p.dims.window) throw std::invalid_argument("forward: window length mismatch");
  if (w.cols() != p.dims.input) throw std::invalid_argument("forward: input width mismatch");
}

Vector concat(const Vector& a, const Vector& b) {
  Vector u(a.size() + b.size());
  u << a, b;
  return u;
}

struct LstmGates {
  Vector i, f, o, g;
};

LstmGates gates(const Matrix& w, const Vector& b, const Vector& u, int hidden) {
  const Vector z = w * u + b;
  LstmGates out;
  out.i = z.segment(kInputGate * hidden, hidden).unaryExpr([](double v) { return sigmoid(v); });
  out.f = z.segment(kForgetGate * hidden, hidden).unaryExpr([](double v) { return sigmoid(v); });
  out.o = z.segment(kOutputGate * hidden, hidden).unaryExpr([](double v) { return sigmoid(v); });
  out.g = z.segment(kCandidate * hidden, hidden).array().tanh().matrix();
  return out;
}

// Gradient of the stacked pre-activations given gate-output gradients.
Vector gate_preactivation_grad(const LstmGates& gt, const Vector& di, const Vector& df, const Vector& dout,
                               const Vector& dg, int hidden) {
  Vector dz(4 * hidden);
  dz.segment(kInputGate * hidden, hidden) = di.cwiseProduct(gt.i.cwiseProduct((1.0 - gt.i.array()).matrix()));
  dz.segment(kForgetGate * hidden, hidden) = df.cwiseProduct(gt.f.cwiseProduct((1.0 - gt.f.array()).matrix()));
  dz.segment(kOutputGate * hidden, hidden) = dout.cwiseProduct(gt.o.cwiseProduct((1.0 - gt.o.array()).matrix()));
  dz.segment(kCandidate * hidden, hidden) = dg.cwiseProduct((1.0 - gt.g.array().square()).matrix());
  return dz;
}

}  // namespace

Vector integrate(const Vector& x, const ModelParams& p) {
  check_input(x, p);
  return gelu(Vector(p.w_m * x + p.b_m));
}

EncoderState EncoderState::zeros(int hidden) {
  return {Vector::Zero(hidden), Vector::Zero(hidden), Vector::Zero(hidden)};
}

EncoderState encoder_step(const Vector& r, const EncoderState& prev, const ModelParams& p) {
  const int h = p.dims.hidden;
  const LstmGates gt = gates(p.w_enc, p.b_enc, concat(prev.h, r), h);
  EncoderState next;
  next.c = gt.f.cwiseProduct(prev.c) + gt.i.cwiseProduct(gt.g);
  next.h = gt.o.cwiseProduct(next.c.array().tanh().matrix()) + prev.h_prev;
  next.h_prev = prev.h;
  return next;
}

Vector decode(const Vector& r, const EncoderState& enc, const ModelParams& p) {
  const int h = p.dims.hidden;
  const LstmGates gt = gates(p.w_dec, p.b_dec, concat(enc.h, r), h);
  const Vector c = gt.f.cwiseProduct(enc.c) + gt.i.cwiseProduct(gt.g);
  const Vector h_dec = gt.o.cwiseProduct(c.array().tanh().matrix());
  const Vector v = gelu(Vector(p.w_d1 * h_dec + p.b_d1));
  return (p.w_d2 * v + p.b_d2).unaryExpr([](double y) { return sigmoid(y); });
}

ForwardResult forward_window(const WindowInput& window, const ModelParams& p) {
  check_window(window, p);
  EncoderState enc = EncoderState::zeros(p.dims.hidden);
  Vector r;
  for (int t = 0; t < p.dims.window; ++t) {
    r = integrate(window.row(t).transpose(), p);
    enc = encoder_step(r, enc, p);
  }
  ForwardResult out;
  out.reconstruction = decode(r, enc, p);
  out.control = out.reconstruction.head(p.dims.control);
  return out;
}

double loss(const WindowInput& window, std::span<const double> target, const ModelParams& p) {
  if (static_cast<int>(target.size()) != p.dims.control) throw std::invalid_argument("loss: target size mismatch");
  const Vector c = forward_window(window, p).control;
  double sum = 0.0;
  for (int j = 0; j < p.dims.control; ++j) sum += (c[j] - target[j]) * (c[j] - target[j]);
  return sum / p.dims.control;
}

LossAndGrad loss_and_grad(const WindowInput& window, std::span<const double> target, const ModelParams& p) {
  check_window(window, p);
  if (static_cast<int>(target.size()) != p.dims.control) throw std::invalid_argument("loss: target size mismatch");
  const int k = p.dims.window;
  const int h = p.dims.hidden;
  const int nr = p.dims.integration;
  const int nc = p.dims.control;

  // Forward with caches.
  std::vector<Vector> x(k), a(k), r(k), u(k), c(k), tanh_c(k), hs(k);
  std::vector<LstmGates> gt(k);
  const Vector zero = Vector::Zero(h);
  for (int t = 0; t < k; ++t) {
    x[t] = window.row(t).transpose();
    a[t] = p.w_m * x[t] + p.b_m;
    r[t] = gelu(a[t]);
    const Vector& h_prev = t >= 1 ? hs[t - 1] : zero;
    const Vector& c_prev = t >= 1 ? c[t - 1] : zero;
    const Vector& h_skip = t >= 2 ? hs[t - 2] : zero;
    u[t] = concat(h_prev, r[t]);
    gt[t] = gates(p.w_enc, p.b_enc, u[t], h);
    c[t] = gt[t].f.cwiseProduct(c_prev) + gt[t].i.cwiseProduct(gt[t].g);
    tanh_c[t] = c[t].array().tanh().matrix();
    hs[t] = gt[t].o.cwiseProduct(tanh_c[t]) + h_skip;
  }
  const int last = k - 1;
  const Vector u_dec = concat(hs[last], r[last]);
  const LstmGates gd = gates(p.w_dec, p.b_dec, u_dec, h);
  const Vector c_dec = gd.f.cwiseProduct(c[last]) + gd.i.cwiseProduct(gd.g);
  const Vector tanh_c_dec = c_dec.array().tanh().matrix();
  const Vector h_dec = gd.o.cwiseProduct(tanh_c_dec);
  const Vector pre1 = p.w_d1 * h_dec + p.b_d1;
  const Vector v = gelu(pre1);
  const Vector y = p.w_d2.topRows(nc) * v + p.b_d2.head(nc);

  LossAndGrad out;
  out.grad = ModelParams::zeros(p.dims);
  ModelParams& g = out.grad;

  // Loss on the control slice: mean of squared errors.
  Vector dy(nc);
  for (int j = 0; j < nc; ++j) {
    const double yhat = sigmoid(y[j]);
    const double diff = yhat - target[j];
    out.loss += diff * diff;
    dy[j] = (2.0 / nc) * diff * yhat * (1.0 - yhat);
  }
  out.loss /= nc;

  // Output layers.
  g.w_d2.topRows(nc) = dy * v.transpose();
  g.b_d2.head(nc) = dy;
  const Vector dv = p.w_d2.topRows(nc).transpose() * dy;
  const Vector dpre1 = dv.cwiseProduct(pre1.unaryExpr([](double s) { return gelu_derivative(s); }));
  g.w_d1 = dpre1 * h_dec.transpose();
  g.b_d1 = dpre1;
  const Vector dh_dec = p.w_d1.transpose() * dpre1;

  // Decoder LSTM.
  const Vector dc_dec = dh_dec.cwiseProduct(gd.o).cwiseProduct((1.0 - tanh_c_dec.array().square()).matrix());
  const Vector dz_dec = gate_preactivation_grad(gd, dc_dec.cwiseProduct(gd.g), dc_dec.cwiseProduct(c[last]),
                                                dh_dec.cwiseProduct(tanh_c_dec), dc_dec.cwiseProduct(gd.i), h);
  g.w_dec = dz_dec * u_dec.transpose();
  g.b_dec = dz_dec;
  const Vector du_dec = p.w_dec.transpose() * dz_dec;

  std::vector<Vector> dh(k, Vector::Zero(h)), dc(k, Vector::Zero(h)), dr(k, Vector::Zero(nr));
  dh[last] += du_dec.head(h);
  dr[last] += du_dec.tail(nr);
  dc[last] += dc_dec.cwiseProduct(gd.f);

  // Encoder, newest step first.
  for (int t = last; t >= 0; --t) {
    if (t >= 2) dh[t - 2] += dh[t];  // skip connection is an identity path
    const Vector& c_prev = t >= 1 ? c[t - 1] : zero;
    const Vector dct = dc[t] + dh[t].cwiseProduct(gt[t].o).cwiseProduct((1.0 - tanh_c[t].array().square()).matrix());
    const Vector dz = gate_preactivation_grad(gt[t], dct.cwiseProduct(gt[t].g), dct.cwiseProduct(c_prev),
                                              dh[t].cwiseProduct(tanh_c[t]), dct.cwiseProduct(gt[t].i), h);
    g.w_enc.noalias() += dz * u[t].transpose();
    g.b_enc += dz;
    const Vector du = p.w_enc.transpose() * dz;
    if (t >= 1) {
      dh[t - 1] += du.head(h);
      dc[t - 1] += dct.cwiseProduct(gt[t].f);
    }
    dr[t] += du.tail(nr);
  }

  // Integration layer.
  for (int t = 0; t < k; ++t) {
    const Vector da = dr[t].cwiseProduct(a[t].unaryExpr([](double s) { return gelu_derivative(s); }));
    g.w_m.noalias() += da * x[t].transpose();
    g.b_m += da;
  }
  return out;
}

}  // namespace assist::dae
