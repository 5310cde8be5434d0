#include "assist/service/pipeline.hpp"

#include <chrono>
#include <stdexcept>

#include "assist/service/blend.hpp"

namespace assist::service {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

AssistPipeline::AssistPipeline(std::shared_ptr<const dae::ModelParams> params, bool assist, int substeps)
    : params_(std::move(params)), assist_(assist), substeps_(substeps) {
  if (substeps_ < 1) throw std::invalid_argument("pipeline: substeps must be >= 1");
  if (assist_ && !params_) throw std::invalid_argument("pipeline: assist requires model parameters");
  if (params_ && params_->dims.input != static_cast<int>(prep::kInputSize))
    throw std::invalid_argument("pipeline: model input width does not match the preprocessor");
  window_ = params_ ? params_->dims.window : 10;
}

void AssistPipeline::reset() {
  history_.clear();
  prev_applied_.reset();
}

PipelineOutput AssistPipeline::bypass(sim::Control raw) {
  reset();
  raw = sim::clamp_control(raw);
  PipelineOutput out;
  out.raw = prep::normalize_ci(raw);
  out.assisted = out.raw;
  out.applied = out.raw;
  out.profile.assign(static_cast<std::size_t>(substeps_), raw);
  return out;
}

PipelineOutput AssistPipeline::process(sim::Control raw, const sim::VehicleState& state, const sim::LidarScan& scan16) {
  PipelineOutput out;
  raw = sim::clamp_control(raw);

  auto t0 = Clock::now();
  out.raw = prep::normalize_ci(raw);
  const prep::ModelInput x = prep::assemble_input(out.raw, prep::normalize_state(state.speed, state.yaw),
                                                  prep::pointcloud_to_distance_vector(scan16));
  out.times.preprocess_ms = ms_since(t0);

  out.assisted = out.raw;
  out.applied = out.raw;
  if (assist_ && static_cast<int>(history_.size()) == window_ - 1) {
    t0 = Clock::now();
    dae::WindowInput w(window_, static_cast<Eigen::Index>(prep::kInputSize));
    for (int t = 0; t < window_ - 1; ++t)
      w.row(t) = Eigen::Map<const Eigen::RowVectorXd>(history_[static_cast<std::size_t>(t)].data(), x.size());
    w.row(window_ - 1) = Eigen::Map<const Eigen::RowVectorXd>(x.data(), x.size());
    const dae::Vector c = dae::forward_window(w, *params_).control;
    out.times.inference_ms = ms_since(t0);
    out.assisted = {c[0], c[1]};
    out.model_active = true;
  }

  t0 = Clock::now();
  if (assist_) {
    if (out.model_active) out.applied = blend(out.assisted, out.raw);
    out.profile = interpolation_profile(prev_applied_.value_or(out.applied), out.applied, substeps_);
    prev_applied_ = out.applied;
  } else {
    out.profile.assign(static_cast<std::size_t>(substeps_), raw);
  }
  out.times.blend_ms = ms_since(t0);

  if (assist_) {
    prep::ModelInput frame = x;
    frame[prep::kControlOffset] = out.applied[0];
    frame[prep::kControlOffset + 1] = out.applied[1];
    history_.push_back(frame);
    if (static_cast<int>(history_.size()) > window_ - 1) history_.pop_front();
  }
  return out;
}

}  // namespace assist::service
