#include "assist/service/blend.hpp"

#include <stdexcept>

namespace assist::service {

prep::ControlVector blend(const prep::ControlVector& assisted, const prep::ControlVector& raw) {
  return {kAssistWeight * assisted[0] + kRawWeight * raw[0], kAssistWeight * assisted[1] + kRawWeight * raw[1]};
}

prep::ControlVector interpolate(const prep::ControlVector& prev, const prep::ControlVector& next, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("interpolate: alpha must be in [0, 1]");
  if (alpha == 1.0) return next;
  return {(1.0 - alpha) * prev[0] + alpha * next[0], (1.0 - alpha) * prev[1] + alpha * next[1]};
}

std::vector<sim::Control> interpolation_profile(const prep::ControlVector& prev, const prep::ControlVector& next,
                                                int substeps) {
  if (substeps < 1) throw std::invalid_argument("interpolation_profile: substeps must be >= 1");
  std::vector<sim::Control> out;
  out.reserve(static_cast<std::size_t>(substeps));
  for (int j = 1; j <= substeps; ++j)
    out.push_back(prep::denormalize_ci(interpolate(prev, next, static_cast<double>(j) / substeps)));
  return out;
}

}  // namespace assist::service
