#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "assist/dae/params.hpp"
#include "assist/drivers/unskilled.hpp"
#include "assist/service/pipeline.hpp"
#include "assist/service/protocol.hpp"
#include "assist/sim/world.hpp"

namespace assist::service {

struct SessionConfig {
  std::shared_ptr<const dae::ModelParams> params;  // may be null; assist-on sessions are then refused
  double terrain_length = 1600.0;
  double max_terrain_length = 20000.0;
  sim::WidthRange widths;
  sim::TerrainOptions terrain;
  sim::VehicleSpec vehicle;
  sim::WorldConfig world;
  drivers::SkilledConfig skilled;
  // Driver substituted for the client's input in synthetic mode.
  drivers::UnskilledConfig synthetic_driver = drivers::kEvaluationDriver;
  double deadline_ms = 100.0;
};

struct StageStats {
  double sum = 0.0;
  double max = 0.0;
  long count = 0;

  void add(double ms);
  double mean() const { return count ? sum / count : 0.0; }
};

struct LatencyStats {
  StageStats receive, step, preprocess, inference, blend, send, total;
  StageStats compute;  // preprocess + inference + blend of the same tick
  long ticks = 0;
  long missed_deadlines = 0;  // ticks whose handling exceeded the deadline
};

// One client's session, independent of the transport: feed it each received
// text frame and send back whatever it returns, in order. Ticks are handled
// strictly one after another.
class AssistSession {
 public:
  explicit AssistSession(SessionConfig config);

  // `receive_ms` is the time the transport spent reading the frame.
  std::vector<std::string> handle(std::string_view text, double receive_ms = 0.0);
  // Reports how long the transport took to send the previous reply.
  void record_send(double ms);

  // True once the session has ended (error, client error, or end of terrain).
  bool closed() const { return closed_; }
  bool started() const { return world_.has_value(); }
  const LatencyStats& latency() const { return stats_; }

 private:
  std::vector<std::string> fail(std::string_view msg);
  std::vector<std::string> start(const InitMessage& init);
  std::vector<std::string> tick(const InputMessage& input, double receive_ms);

  SessionConfig config_;
  std::optional<sim::World> world_;
  std::optional<AssistPipeline> pipeline_;
  std::optional<drivers::UnskilledDriver> synthetic_;
  DriverMode mode_ = DriverMode::Human;
  LatencyStats stats_;
  double last_send_ms_ = 0.0;
  bool closed_ = false;
};

}  // namespace assist::service
