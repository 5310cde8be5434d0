#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "assist/service/session.hpp"

namespace assist::service {

struct ServerConfig {
  std::string address = "127.0.0.1";
  std::uint16_t port = 8765;  // 0 picks a free port
  SessionConfig session;
};

// Summary handed to the observer when a connection ends.
struct SessionSummary {
  LatencyStats latency;
  bool started = false;
  std::string close_reason;
};

// WebSocket server. Each connection gets its own thread and AssistSession;
// frames within a connection are handled in order.
class AssistServer {
 public:
  using Observer = std::function<void(const SessionSummary&)>;

  // Binds and listens immediately; throws on failure.
  explicit AssistServer(ServerConfig config, Observer on_session_end = {});
  ~AssistServer();

  AssistServer(const AssistServer&) = delete;
  AssistServer& operator=(const AssistServer&) = delete;

  std::uint16_t port() const;

  // Accepts connections until stop(); blocks the caller.
  void run();
  // Thread-safe. Closes the listener and all open connections.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Minimal blocking client, used by tests and the acceptance suite.
class AssistClient {
 public:
  AssistClient(const std::string& host, std::uint16_t port);
  ~AssistClient();

  AssistClient(const AssistClient&) = delete;
  AssistClient& operator=(const AssistClient&) = delete;

  void send(const std::string& text);
  // Throws std::runtime_error once the server has closed the connection.
  std::string receive();
  void close();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace assist::service
