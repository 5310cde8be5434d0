#pragma once

// Independent scalar implementations used as test oracles. They read the
// parameter matrices entry by entry and never call into the library's math.

#include <cmath>
#include <random>
#include <vector>

#include "assist/dae/network.hpp"
#include "assist/dae/params.hpp"

namespace assist::test {

using Vec = std::vector<double>;

inline double oracle_gelu(double x) {
  const long double lx = x;
  return static_cast<double>(0.5L * lx * std::erfc(-lx / std::sqrt(2.0L)));
}

inline double oracle_sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// W x + b with rows [row0, row0 + rows) of W and b.
inline Vec matvec(const dae::Matrix& w, const dae::Vector& b, const Vec& x, int row0 = 0, int rows = -1) {
  if (rows < 0) rows = static_cast<int>(w.rows());
  Vec y(static_cast<std::size_t>(rows));
  for (int i = 0; i < rows; ++i) {
    double s = b(row0 + i);
    for (int j = 0; j < static_cast<int>(x.size()); ++j) s += w(row0 + i, j) * x[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = s;
  }
  return y;
}

inline Vec oracle_integrate(const Vec& x, const dae::ModelParams& p) {
  Vec r = matvec(p.w_m, p.b_m, x);
  for (double& v : r) v = oracle_gelu(v);
  return r;
}

struct OracleState {
  Vec h, c, h_prev;
};

inline OracleState oracle_zero_state(int hidden) {
  const auto n = static_cast<std::size_t>(hidden);
  return {Vec(n, 0.0), Vec(n, 0.0), Vec(n, 0.0)};
}

// Textbook LSTM cell on [h; r], gate blocks in the order input, forget,
// output, candidate. Returns (h, c) without any skip term.
inline std::pair<Vec, Vec> textbook_lstm(const dae::Matrix& w, const dae::Vector& b, const Vec& h, const Vec& c,
                                         const Vec& r) {
  const int n = static_cast<int>(h.size());
  Vec u = h;
  u.insert(u.end(), r.begin(), r.end());
  Vec h_out(h.size()), c_out(h.size());
  for (int j = 0; j < n; ++j) {
    double zi = b(j), zf = b(n + j), zo = b(2 * n + j), zg = b(3 * n + j);
    for (int q = 0; q < static_cast<int>(u.size()); ++q) {
      const double v = u[static_cast<std::size_t>(q)];
      zi += w(j, q) * v;
      zf += w(n + j, q) * v;
      zo += w(2 * n + j, q) * v;
      zg += w(3 * n + j, q) * v;
    }
    const double ig = oracle_sigmoid(zi), fg = oracle_sigmoid(zf), og = oracle_sigmoid(zo), gg = std::tanh(zg);
    const auto k = static_cast<std::size_t>(j);
    c_out[k] = fg * c[k] + ig * gg;
    h_out[k] = og * std::tanh(c_out[k]);
  }
  return {h_out, c_out};
}

inline OracleState oracle_encoder_step(const Vec& r, const OracleState& prev, const dae::ModelParams& p,
                                       bool skip = true) {
  auto [h, c] = textbook_lstm(p.w_enc, p.b_enc, prev.h, prev.c, r);
  if (skip)
    for (std::size_t j = 0; j < h.size(); ++j) h[j] += prev.h_prev[j];
  return {h, c, prev.h};
}

inline Vec oracle_decode(const Vec& r, const OracleState& enc, const dae::ModelParams& p) {
  const auto hc = textbook_lstm(p.w_dec, p.b_dec, enc.h, enc.c, r);
  Vec v = matvec(p.w_d1, p.b_d1, hc.first);
  for (double& x : v) x = oracle_gelu(x);
  Vec y = matvec(p.w_d2, p.b_d2, v);
  for (double& x : y) x = oracle_sigmoid(x);
  return y;
}

inline Vec oracle_forward(const dae::WindowInput& w, const dae::ModelParams& p) {
  OracleState s = oracle_zero_state(p.dims.hidden);
  Vec r;
  for (int t = 0; t < w.rows(); ++t) {
    Vec x(static_cast<std::size_t>(w.cols()));
    for (int j = 0; j < w.cols(); ++j) x[static_cast<std::size_t>(j)] = w(t, j);
    r = oracle_integrate(x, p);
    s = oracle_encoder_step(r, s, p);
  }
  return oracle_decode(r, s, p);
}

inline Vec to_vec(const dae::Vector& v) { return Vec(v.data(), v.data() + v.size()); }

inline dae::Vector to_eigen(const Vec& v) {
  return Eigen::Map<const dae::Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Every parameter, biases included, uniform in [-scale, scale].
inline dae::ModelParams random_params(const dae::ModelDims& dims, std::uint64_t seed, double scale = 0.5) {
  dae::ModelParams p = dae::ModelParams::zeros(dims);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  for (auto t : p.tensors())
    for (double& v : t) v = u(rng);
  return p;
}

inline dae::WindowInput random_window(const dae::ModelDims& dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  dae::WindowInput w(dims.window, dims.input);
  for (int t = 0; t < dims.window; ++t)
    for (int j = 0; j < dims.input; ++j) w(t, j) = u(rng);
  return w;
}

// Central finite differences of the loss for every parameter; returns the
// largest relative error |a - n| / max(|a|, |n|, floor).
inline double max_gradient_error(const dae::WindowInput& w, const Vec& target, const dae::ModelParams& params,
                                 double eps = 1e-5, double floor = 1e-6) {
  const dae::LossAndGrad lg = dae::loss_and_grad(w, target, params);
  const Vec analytic = lg.grad.flatten();
  Vec flat = params.flatten();
  dae::ModelParams probe = params;
  double worst = 0.0;
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const double keep = flat[i];
    flat[i] = keep + eps;
    probe.assign(flat);
    const double up = dae::loss(w, target, probe);
    flat[i] = keep - eps;
    probe.assign(flat);
    const double down = dae::loss(w, target, probe);
    flat[i] = keep;
    const double numeric = (up - down) / (2.0 * eps);
    const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), floor});
    worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
  }
  return worst;
}

inline dae::ModelDims micro_dims() {
  dae::ModelDims d;
  d.input = 186;
  d.integration = 8;
  d.hidden = 4;
  d.output_hidden = 8;
  d.window = 10;
  return d;
}

}  // namespace assist::test
