#include "assist/dae/params.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace assist::dae {
namespace {

// Visits every tensor in checkpoint order as (matrix, row range) blocks.
template <typename Params, typename Fn>
void for_each_block(Params& p, Fn&& fn) {
  const Eigen::Index h = p.dims.hidden;
  fn(p.w_m, 0, p.w_m.rows());
  fn(p.b_m, 0, p.b_m.rows());
  for (Eigen::Index g = 0; g < 4; ++g) fn(p.w_enc, g * h, h);
  for (Eigen::Index g = 0; g < 4; ++g) fn(p.b_enc, g * h, h);
  for (Eigen::Index g = 0; g < 4; ++g) fn(p.w_dec, g * h, h);
  for (Eigen::Index g = 0; g < 4; ++g) fn(p.b_dec, g * h, h);
  fn(p.w_d1, 0, p.w_d1.rows());
  fn(p.b_d1, 0, p.b_d1.rows());
  fn(p.w_d2, 0, p.w_d2.rows());
  fn(p.b_d2, 0, p.b_d2.rows());
}

}  // namespace

std::size_t parameter_count(const ModelDims& d) {
  const auto lstm = static_cast<std::size_t>(4 * d.hidden) * (d.lstm_input() + 1);
  return static_cast<std::size_t>(d.integration) * (d.input + 1) + 2 * lstm +
         static_cast<std::size_t>(d.output_hidden) * (d.hidden + 1) +
         static_cast<std::size_t>(d.input) * (d.output_hidden + 1);
}

ModelParams ModelParams::zeros(const ModelDims& d) {
  if (d.input <= 0 || d.integration <= 0 || d.hidden <= 0 || d.output_hidden <= 0 || d.window <= 0 ||
      d.control <= 0 || d.control > d.input)
    throw std::invalid_argument("model dims must be positive");
  ModelParams p;
  p.dims = d;
  p.w_m = Matrix::Zero(d.integration, d.input);
  p.b_m = Vector::Zero(d.integration);
  p.w_enc = Matrix::Zero(4 * d.hidden, d.lstm_input());
  p.b_enc = Vector::Zero(4 * d.hidden);
  p.w_dec = Matrix::Zero(4 * d.hidden, d.lstm_input());
  p.b_dec = Vector::Zero(4 * d.hidden);
  p.w_d1 = Matrix::Zero(d.output_hidden, d.hidden);
  p.b_d1 = Vector::Zero(d.output_hidden);
  p.w_d2 = Matrix::Zero(d.input, d.output_hidden);
  p.b_d2 = Vector::Zero(d.input);
  return p;
}

ModelParams ModelParams::glorot(const ModelDims& d, std::uint64_t seed) {
  ModelParams p = zeros(d);
  std::mt19937_64 rng(seed);
  auto fill = [&rng](Matrix& m, Eigen::Index row0, Eigen::Index rows) {
    const double limit = std::sqrt(6.0 / static_cast<double>(m.cols() + rows));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index r = row0; r < row0 + rows; ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = dist(rng);
  };
  fill(p.w_m, 0, p.w_m.rows());
  for (Eigen::Index g = 0; g < 4; ++g) fill(p.w_enc, g * d.hidden, d.hidden);
  for (Eigen::Index g = 0; g < 4; ++g) fill(p.w_dec, g * d.hidden, d.hidden);
  fill(p.w_d1, 0, p.w_d1.rows());
  fill(p.w_d2, 0, p.w_d2.rows());
  return p;
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for (auto t : tensors()) n += t.size();
  return n;
}

bool ModelParams::all_finite() const {
  for (auto t : tensors())
    for (double v : t)
      if (!std::isfinite(v)) return false;
  return true;
}

std::vector<std::span<double>> ModelParams::tensors() {
  std::vector<std::span<double>> out;
  for (auto* m : {&w_m, &w_enc, &w_dec, &w_d1, &w_d2}) out.emplace_back(m->data(), static_cast<std::size_t>(m->size()));
  for (auto* v : {&b_m, &b_enc, &b_dec, &b_d1, &b_d2}) out.emplace_back(v->data(), static_cast<std::size_t>(v->size()));
  return out;
}

std::vector<std::span<const double>> ModelParams::tensors() const {
  std::vector<std::span<const double>> out;
  for (auto* m : {&w_m, &w_enc, &w_dec, &w_d1, &w_d2}) out.emplace_back(m->data(), static_cast<std::size_t>(m->size()));
  for (auto* v : {&b_m, &b_enc, &b_dec, &b_d1, &b_d2}) out.emplace_back(v->data(), static_cast<std::size_t>(v->size()));
  return out;
}

std::vector<double> ModelParams::flatten() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for_each_block(*this, [&flat](const auto& m, Eigen::Index row0, Eigen::Index rows) {
    for (Eigen::Index r = row0; r < row0 + rows; ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) flat.push_back(m(r, c));
  });
  return flat;
}

void ModelParams::assign(std::span<const double> flat) {
  if (flat.size() != parameter_count()) throw std::invalid_argument("assign: parameter count mismatch");
  std::size_t k = 0;
  for_each_block(*this, [&](auto& m, Eigen::Index row0, Eigen::Index rows) {
    for (Eigen::Index r = row0; r < row0 + rows; ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = flat[k++];
  });
}

void ModelParams::set_zero() {
  for (auto t : tensors()) std::fill(t.begin(), t.end(), 0.0);
}

void ModelParams::axpy(double scale, const ModelParams& other) {
  if (!(dims == other.dims)) throw std::invalid_argument("axpy: dimension mismatch");
  auto mine = tensors();
  auto theirs = other.tensors();
  for (std::size_t i = 0; i < mine.size(); ++i)
    for (std::size_t j = 0; j < mine[i].size(); ++j) mine[i][j] += scale * theirs[i][j];
}

bool ModelParams::operator==(const ModelParams& o) const {
  return dims == o.dims && w_m == o.w_m && b_m == o.b_m && w_enc == o.w_enc && b_enc == o.b_enc &&
         w_dec == o.w_dec && b_dec == o.b_dec && w_d1 == o.w_d1 && b_d1 == o.b_d1 && w_d2 == o.w_d2 &&
         b_d2 == o.b_d2;
}

}  // namespace assist::dae
