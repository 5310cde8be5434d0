#include "assist/service/session.hpp"

#include <algorithm>
#include <chrono>

namespace assist::service {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

void StageStats::add(double ms) {
  sum += ms;
  max = std::max(max, ms);
  ++count;
}

AssistSession::AssistSession(SessionConfig config) : config_(std::move(config)) {}

std::vector<std::string> AssistSession::fail(std::string_view msg) {
  closed_ = true;
  return {error_message(msg)};
}

std::vector<std::string> AssistSession::handle(std::string_view text, double receive_ms) {
  if (closed_) return {error_message("session is closed")};
  const auto t0 = Clock::now();
  ClientMessage msg;
  try {
    msg = parse_client_message(text);
  } catch (const ProtocolError& e) {
    return fail(e.what());
  }
  if (std::holds_alternative<ErrorMessage>(msg)) {
    closed_ = true;
    return {};
  }
  if (auto* init = std::get_if<InitMessage>(&msg)) {
    if (started()) return fail("session already initialized");
    return start(*init);
  }
  if (!started()) return fail("expected an init message first");
  return tick(std::get<InputMessage>(msg), receive_ms + ms_since(t0));
}

void AssistSession::record_send(double ms) {
  last_send_ms_ = ms;
  stats_.send.add(ms);
}

std::vector<std::string> AssistSession::start(const InitMessage& init) {
  if (init.assist && !config_.params) return fail("assistance requested but no model is loaded");
  if (init.assist && config_.params->dims.input != static_cast<int>(prep::kInputSize))
    return fail("model dimensions do not match the preprocessor");
  const double length = init.terrain_length.value_or(config_.terrain_length);
  if (!(length > 100.0 && length <= config_.max_terrain_length)) return fail("terrain_length out of range");
  try {
    auto terrain = sim::make_terrain(sim::generate_terrain(init.terrain_seed, length, config_.widths, config_.terrain));
    world_.emplace(terrain, config_.vehicle, config_.world);
    pipeline_.emplace(init.assist ? config_.params : nullptr, init.assist, config_.world.substeps);
    mode_ = init.mode;
    if (mode_ == DriverMode::Synthetic) {
      auto skilled = std::make_shared<const drivers::SkilledDriver>(terrain, config_.vehicle, config_.skilled);
      synthetic_.emplace(skilled, config_.synthetic_driver, drivers::driver_seed(init.terrain_seed));
    }
    return {terrain_message(terrain->spec())};
  } catch (const std::exception& e) {
    world_.reset();
    return fail(e.what());
  }
}

std::vector<std::string> AssistSession::tick(const InputMessage& input, double receive_ms) {
  const auto t0 = Clock::now();
  sim::World& world = *world_;
  if (input.tick != world.tick()) return fail("expected tick " + std::to_string(world.tick()));

  StateMessage out;
  out.latency_ms.receive = receive_ms;
  const sim::VehicleState observed = world.state();
  const sim::Control raw = mode_ == DriverMode::Synthetic ? synthetic_->control(observed)
                                                          : sim::Control{input.steer, input.pedal};
  auto t = Clock::now();
  const sim::LidarScan scan = world.scan(16);
  const double scan_ms = ms_since(t);
  const PipelineOutput p = world.reversing() ? pipeline_->bypass(raw) : pipeline_->process(raw, observed, scan);
  out.latency_ms.preprocess = scan_ms + p.times.preprocess_ms;
  out.latency_ms.inference = p.times.inference_ms;
  out.latency_ms.blend = p.times.blend_ms;

  t = Clock::now();
  const sim::TickResult r = world.step(p.profile);
  out.latency_ms.step = ms_since(t);

  out.tick = r.tick;
  out.state = r.state;
  out.station = r.state.station;
  out.raw = sim::clamp_control(raw);
  out.assisted = prep::denormalize_ci(p.assisted);
  out.applied = r.applied.back();
  out.model_active = p.model_active;
  out.finished = world.finished();
  out.contacts = r.events;
  out.latency_ms.send = last_send_ms_;
  out.latency_ms.total = receive_ms + ms_since(t0);
  std::string reply = state_message(out);
  const double total = receive_ms + ms_since(t0);

  stats_.receive.add(receive_ms);
  stats_.preprocess.add(out.latency_ms.preprocess);
  stats_.inference.add(out.latency_ms.inference);
  stats_.blend.add(out.latency_ms.blend);
  stats_.compute.add(out.latency_ms.preprocess + out.latency_ms.inference + out.latency_ms.blend);
  stats_.step.add(out.latency_ms.step);
  stats_.total.add(total);
  ++stats_.ticks;
  if (total > config_.deadline_ms) ++stats_.missed_deadlines;
  if (out.finished) closed_ = true;
  return {std::move(reply)};
}

}  // namespace assist::service
