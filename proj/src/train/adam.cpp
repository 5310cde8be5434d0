#include "assist/train/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace assist::train {

Adam::Adam(const dae::ModelDims& dims, AdamConfig config)
    : config_(config), m_(dae::ModelParams::zeros(dims)), v_(dae::ModelParams::zeros(dims)) {}

void Adam::step(dae::ModelParams& params, const dae::ModelParams& grad, double lr) {
  if (!(params.dims == m_.dims) || !(grad.dims == m_.dims)) throw std::invalid_argument("adam: dimension mismatch");
  ++t_;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  auto p = params.tensors();
  auto g = grad.tensors();
  auto m = m_.tensors();
  auto v = v_.tensors();
  for (std::size_t k = 0; k < p.size(); ++k) {
    for (std::size_t i = 0; i < p[k].size(); ++i) {
      m[k][i] = b1 * m[k][i] + (1.0 - b1) * g[k][i];
      v[k][i] = b2 * v[k][i] + (1.0 - b2) * g[k][i] * g[k][i];
      p[k][i] -= lr * (m[k][i] / c1) / (std::sqrt(v[k][i] / c2) + config_.epsilon);
    }
  }
}

}  // namespace assist::train
