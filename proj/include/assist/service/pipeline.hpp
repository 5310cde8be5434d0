#pragma once

#include <deque>
#include <memory>
#include <optional>
#include <vector>

#include "assist/dae/network.hpp"
#include "assist/prep/preprocess.hpp"

namespace assist::service {

struct StageTimes {
  double preprocess_ms = 0.0;
  double inference_ms = 0.0;
  double blend_ms = 0.0;
};

struct PipelineOutput {
  prep::ControlVector raw{};       // normalized driver input
  prep::ControlVector assisted{};  // model output; equals raw while the model is idle
  prep::ControlVector applied{};   // value reached at the end of the tick
  bool model_active = false;
  std::vector<sim::Control> profile;  // physical control per substep
  StageTimes times;
};

// Per-session assistance state: the rolling window of the last k - 1 frames,
// the previously applied control, and the model.
//
// Each tick builds x_t from the raw control and the current observation. With
// assist on and a full window the model output is blended 80/20 with the raw
// input and the vehicle is moved there over the tick's substeps starting from
// the previous applied value. Until the window fills (first k - 1 ticks) the
// raw input passes through. History frames carry the applied control.
// With assist off, the raw input is held for the whole tick.
class AssistPipeline {
 public:
  AssistPipeline(std::shared_ptr<const dae::ModelParams> params, bool assist, int substeps = 5);

  PipelineOutput process(sim::Control raw, const sim::VehicleState& state, const sim::LidarScan& scan16);
  // For a tick in which the platform ignores control (crash reversal): the
  // raw input passes through and the window restarts, so the model warms up
  // again once control returns.
  PipelineOutput bypass(sim::Control raw);
  void reset();

  bool assist() const { return assist_; }
  int window() const { return window_; }
  std::size_t history_size() const { return history_.size(); }

 private:
  std::shared_ptr<const dae::ModelParams> params_;
  bool assist_;
  int substeps_;
  int window_;
  std::deque<prep::ModelInput> history_;
  std::optional<prep::ControlVector> prev_applied_;
};

}  // namespace assist::service
