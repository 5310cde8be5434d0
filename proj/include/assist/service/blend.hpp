#pragma once

#include <vector>

#include "assist/prep/preprocess.hpp"

namespace assist::service {

inline constexpr double kAssistWeight = 0.8;
inline constexpr double kRawWeight = 0.2;

// 0.8 * assisted + 0.2 * raw, entrywise, in normalized units.
prep::ControlVector blend(const prep::ControlVector& assisted, const prep::ControlVector& raw);

// (1 - alpha) * prev + alpha * next. Throws std::invalid_argument unless alpha is in [0, 1].
prep::ControlVector interpolate(const prep::ControlVector& prev, const prep::ControlVector& next, double alpha);

// Physical controls for the substeps of one tick, moving from prev toward next
// with alpha = j / substeps for j = 1 .. substeps (the last one equals next).
std::vector<sim::Control> interpolation_profile(const prep::ControlVector& prev, const prep::ControlVector& next,
                                                int substeps);

}  // namespace assist::service
