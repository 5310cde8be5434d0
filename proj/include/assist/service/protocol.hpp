#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "assist/sim/contacts.hpp"
#include "assist/sim/terrain.hpp"
#include "assist/sim/vehicle.hpp"

namespace assist::service {

// JSON text frames, one object per message.
//   client -> server  {"type":"init","terrain_seed":N,"assist":B,"mode":"human"|"synthetic"[,"terrain_length":F]}
//                     {"type":"input","tick":N,"steer":F,"pedal":F}
//   server -> client  {"type":"terrain",...}  once, after init
//                     {"type":"state",...}    once per input
//   either way        {"type":"error","msg":S}

struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class DriverMode { Human, Synthetic };

struct InitMessage {
  std::uint64_t terrain_seed = 0;
  bool assist = false;
  DriverMode mode = DriverMode::Human;
  std::optional<double> terrain_length;
};

struct InputMessage {
  int tick = 0;
  double steer = 0.0;
  double pedal = 0.0;
};

struct ErrorMessage {
  std::string msg;
};

using ClientMessage = std::variant<InitMessage, InputMessage, ErrorMessage>;

// Throws ProtocolError on anything that is not a well-formed client message.
ClientMessage parse_client_message(std::string_view text);

std::string init_message(const InitMessage& m);
std::string input_message(const InputMessage& m);

struct StageLatency {
  double receive = 0.0;
  double step = 0.0;
  double preprocess = 0.0;
  double inference = 0.0;
  double blend = 0.0;
  double send = 0.0;   // previous frame; the current one is not sent yet
  double total = 0.0;  // handling time of this tick, receive through serialization
};

struct StateMessage {
  int tick = 0;
  sim::VehicleState state;
  double station = 0.0;
  sim::Control raw;
  sim::Control assisted;
  sim::Control applied;
  bool model_active = false;
  bool finished = false;
  std::vector<sim::ContactEvent> contacts;
  StageLatency latency_ms;
};

std::string terrain_message(const sim::TerrainSpec& spec);
std::string state_message(const StateMessage& m);
std::string error_message(std::string_view msg);

// Client-side decoding of server frames, used by tests and tools.
struct ServerFrame {
  std::string type;
  std::string text;  // original JSON
};
ServerFrame parse_server_frame(std::string_view text);
StateMessage parse_state_message(std::string_view text);
sim::TerrainSpec parse_terrain_message(std::string_view text);

}  // namespace assist::service
