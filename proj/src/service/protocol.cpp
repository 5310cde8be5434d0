#include "assist/service/protocol.hpp"

#include <cmath>

#include <json.hpp>

namespace assist::service {
namespace {

using nlohmann::json;

json parse_object(std::string_view text) {
  json j = json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded()) throw ProtocolError("malformed JSON");
  if (!j.is_object()) throw ProtocolError("message must be a JSON object");
  if (!j.contains("type") || !j["type"].is_string()) throw ProtocolError("message has no type");
  return j;
}

const json& field(const json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) throw ProtocolError(std::string("missing field: ") + name);
  return *it;
}

double number(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_number()) throw ProtocolError(std::string("field must be a number: ") + name);
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ProtocolError(std::string("field must be finite: ") + name);
  return d;
}

json pair(const sim::Control& c) { return json::array({c.steer, c.pedal}); }

sim::Control control_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ProtocolError("control must be [steer, pedal]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

ClientMessage parse_client_message(std::string_view text) {
  const json j = parse_object(text);
  const std::string type = j["type"].get<std::string>();
  if (type == "init") {
    InitMessage m;
    const json& seed = field(j, "terrain_seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
      throw ProtocolError("terrain_seed must be a non-negative integer");
    m.terrain_seed = seed.get<std::uint64_t>();
    const json& assist = field(j, "assist");
    if (!assist.is_boolean()) throw ProtocolError("assist must be true or false");
    m.assist = assist.get<bool>();
    const json& mode = field(j, "mode");
    if (mode == "human") {
      m.mode = DriverMode::Human;
    } else if (mode == "synthetic") {
      m.mode = DriverMode::Synthetic;
    } else {
      throw ProtocolError("mode must be \"human\" or \"synthetic\"");
    }
    if (j.contains("terrain_length")) m.terrain_length = number(j, "terrain_length");
    return m;
  }
  if (type == "input") {
    InputMessage m;
    const json& tick = field(j, "tick");
    if (!tick.is_number_integer()) throw ProtocolError("tick must be an integer");
    m.tick = tick.get<int>();
    m.steer = number(j, "steer");
    m.pedal = number(j, "pedal");
    if (std::abs(m.steer) > 1.0 || std::abs(m.pedal) > 1.0) throw ProtocolError("steer and pedal must be in [-1, 1]");
    return m;
  }
  if (type == "error") {
    const json& msg = field(j, "msg");
    return ErrorMessage{msg.is_string() ? msg.get<std::string>() : msg.dump()};
  }
  throw ProtocolError("unknown message type: " + type);
}

std::string init_message(const InitMessage& m) {
  json j = {{"type", "init"},
            {"terrain_seed", m.terrain_seed},
            {"assist", m.assist},
            {"mode", m.mode == DriverMode::Human ? "human" : "synthetic"}};
  if (m.terrain_length) j["terrain_length"] = *m.terrain_length;
  return j.dump();
}

std::string input_message(const InputMessage& m) {
  return json{{"type", "input"}, {"tick", m.tick}, {"steer", m.steer}, {"pedal", m.pedal}}.dump();
}

std::string terrain_message(const sim::TerrainSpec& spec) {
  json centerline = json::array();
  for (const auto& p : spec.centerline) centerline.push_back({p.x, p.y});
  json obstacles = json::array();
  for (const auto& o : spec.obstacles) obstacles.push_back({o.center.x, o.center.y, o.radius});
  return json{{"type", "terrain"},
              {"seed", spec.seed},
              {"total_length", spec.total_length},
              {"centerline", centerline},
              {"half_width", spec.half_width},
              {"obstacles", obstacles}}
      .dump();
}

std::string state_message(const StateMessage& m) {
  json contacts = json::array();
  for (const auto& e : m.contacts)
    contacts.push_back({{"tick", e.tick},
                        {"kind", sim::to_string(e.kind)},
                        {"point", {e.contact_point.x, e.contact_point.y}},
                        {"normal_angle", e.normal_angle}});
  const StageLatency& l = m.latency_ms;
  return json{{"type", "state"},
              {"tick", m.tick},
              {"pose", {m.state.position.x, m.state.position.y, m.state.yaw}},
              {"speed", m.state.speed},
              {"station", m.station},
              {"raw_ci", pair(m.raw)},
              {"assisted_ci", pair(m.assisted)},
              {"applied_ci", pair(m.applied)},
              {"model_active", m.model_active},
              {"finished", m.finished},
              {"contacts", contacts},
              {"latency_ms",
               {{"receive", l.receive},
                {"step", l.step},
                {"preprocess", l.preprocess},
                {"inference", l.inference},
                {"blend", l.blend},
                {"send", l.send},
                {"total", l.total}}}}
      .dump();
}

std::string error_message(std::string_view msg) { return json{{"type", "error"}, {"msg", std::string(msg)}}.dump(); }

ServerFrame parse_server_frame(std::string_view text) {
  const json j = parse_object(text);
  return {j["type"].get<std::string>(), std::string(text)};
}

StateMessage parse_state_message(std::string_view text) {
  const json j = parse_object(text);
  if (j["type"] != "state") throw ProtocolError("not a state message");
  try {
    StateMessage m;
    m.tick = j.at("tick").get<int>();
    const auto& pose = j.at("pose");
    m.state.position = {pose.at(0).get<double>(), pose.at(1).get<double>()};
    m.state.yaw = pose.at(2).get<double>();
    m.state.speed = j.at("speed").get<double>();
    m.station = j.at("station").get<double>();
    m.state.station = m.station;
    m.raw = control_from(j.at("raw_ci"));
    m.assisted = control_from(j.at("assisted_ci"));
    m.applied = control_from(j.at("applied_ci"));
    m.model_active = j.at("model_active").get<bool>();
    m.finished = j.at("finished").get<bool>();
    for (const auto& c : j.at("contacts")) {
      sim::ContactEvent e;
      e.tick = c.at("tick").get<int>();
      e.kind = c.at("kind") == "frontal" ? sim::CrashKind::Frontal : sim::CrashKind::Side;
      e.contact_point = {c.at("point").at(0).get<double>(), c.at("point").at(1).get<double>()};
      e.normal_angle = c.at("normal_angle").get<double>();
      m.contacts.push_back(e);
    }
    const auto& l = j.at("latency_ms");
    m.latency_ms = {l.at("receive").get<double>(), l.at("step").get<double>(),     l.at("preprocess").get<double>(),
                    l.at("inference").get<double>(), l.at("blend").get<double>(), l.at("send").get<double>(),
                    l.at("total").get<double>()};
    return m;
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("bad state message: ") + e.what());
  }
}

sim::TerrainSpec parse_terrain_message(std::string_view text) {
  const json j = parse_object(text);
  if (j["type"] != "terrain") throw ProtocolError("not a terrain message");
  try {
    sim::TerrainSpec spec;
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.total_length = j.at("total_length").get<double>();
    for (const auto& p : j.at("centerline")) spec.centerline.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    spec.half_width = j.at("half_width").get<std::vector<double>>();
    for (const auto& o : j.at("obstacles"))
      spec.obstacles.push_back({{o.at(0).get<double>(), o.at(1).get<double>()}, o.at(2).get<double>()});
    return spec;
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("bad terrain message: ") + e.what());
  }
}

}  // namespace assist::service
