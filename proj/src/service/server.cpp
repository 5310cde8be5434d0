#include "assist/service/server.hpp"

#include <chrono>
#include <stdexcept>

#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

namespace assist::service {
namespace {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using Clock = std::chrono::steady_clock;
using Stream = websocket::stream<tcp::socket>;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Connection {
  std::shared_ptr<Stream> stream;
  std::thread thread;
  std::shared_ptr<std::atomic<bool>> done;
};

void serve_connection(Stream& ws, const SessionConfig& config, const AssistServer::Observer& observer) {
  SessionSummary summary;
  AssistSession session(config);
  try {
    ws.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws.accept();
    ws.text(true);
    beast::flat_buffer buffer;
    while (!session.closed()) {
      ws.read(buffer);
      const auto t0 = Clock::now();
      const std::string text = beast::buffers_to_string(buffer.data());
      buffer.consume(buffer.size());
      const double receive_ms = ms_since(t0);
      for (const auto& reply : session.handle(text, receive_ms)) {
        const auto t1 = Clock::now();
        ws.write(asio::buffer(reply));
        session.record_send(ms_since(t1));
      }
    }
    summary.close_reason = "session ended";
    beast::error_code ec;
    ws.close(websocket::close_code::normal, ec);
  } catch (const beast::system_error& e) {
    summary.close_reason = e.code() == websocket::error::closed ? "client closed" : e.what();
  } catch (const std::exception& e) {
    summary.close_reason = e.what();
  }
  summary.latency = session.latency();
  summary.started = session.started();
  if (observer) observer(summary);
}

}  // namespace

struct AssistServer::Impl {
  ServerConfig config;
  Observer observer;
  asio::io_context ioc;
  tcp::acceptor acceptor{ioc};
  std::mutex mutex;
  std::vector<Connection> connections;
  std::atomic<bool> stopping{false};

  void reap() {
    std::vector<Connection> finished;
    {
      std::lock_guard lock(mutex);
      for (auto it = connections.begin(); it != connections.end();) {
        if (it->done->load()) {
          finished.push_back(std::move(*it));
          it = connections.erase(it);
        } else {
          ++it;
        }
      }
    }
    for (auto& c : finished) c.thread.join();
  }

  void accept() {
    acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec || stopping) return;
      reap();
      auto stream = std::make_shared<Stream>(std::move(socket));
      auto done = std::make_shared<std::atomic<bool>>(false);
      {
        std::lock_guard lock(mutex);
        connections.push_back({stream, std::thread([this, stream, done] {
                                 serve_connection(*stream, config.session, observer);
                                 done->store(true);
                               }),
                               done});
      }
      accept();
    });
  }
};

AssistServer::AssistServer(ServerConfig config, Observer on_session_end) : impl_(std::make_unique<Impl>()) {
  impl_->config = std::move(config);
  impl_->observer = std::move(on_session_end);
  const tcp::endpoint endpoint(asio::ip::make_address(impl_->config.address), impl_->config.port);
  auto& acceptor = impl_->acceptor;
  acceptor.open(endpoint.protocol());
  acceptor.set_option(asio::socket_base::reuse_address(true));
  acceptor.bind(endpoint);
  acceptor.listen(asio::socket_base::max_listen_connections);
}

AssistServer::~AssistServer() { stop(); }

std::uint16_t AssistServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void AssistServer::run() {
  if (impl_->stopping) return;
  impl_->accept();
  impl_->ioc.run();
}

void AssistServer::stop() {
  if (impl_->stopping.exchange(true)) return;
  asio::post(impl_->ioc, [this] {
    beast::error_code ec;
    impl_->acceptor.close(ec);
  });
  impl_->ioc.stop();
  std::vector<Connection> open;
  {
    std::lock_guard lock(impl_->mutex);
    open = std::move(impl_->connections);
  }
  for (auto& c : open) {
    beast::error_code ec;
    beast::get_lowest_layer(*c.stream).shutdown(tcp::socket::shutdown_both, ec);
  }
  for (auto& c : open) c.thread.join();
}

struct AssistClient::Impl {
  asio::io_context ioc;
  Stream ws{ioc};
  beast::flat_buffer buffer;
};

AssistClient::AssistClient(const std::string& host, std::uint16_t port) : impl_(std::make_unique<Impl>()) {
  tcp::resolver resolver(impl_->ioc);
  const auto results = resolver.resolve(host, std::to_string(port));
  asio::connect(beast::get_lowest_layer(impl_->ws), results);
  beast::get_lowest_layer(impl_->ws).set_option(tcp::no_delay(true));
  impl_->ws.handshake(host + ":" + std::to_string(port), "/");
  impl_->ws.text(true);
}

AssistClient::~AssistClient() {
  beast::error_code ec;
  if (impl_->ws.is_open()) impl_->ws.close(websocket::close_code::normal, ec);
}

void AssistClient::send(const std::string& text) { impl_->ws.write(asio::buffer(text)); }

std::string AssistClient::receive() {
  try {
    impl_->ws.read(impl_->buffer);
  } catch (const beast::system_error& e) {
    throw std::runtime_error(std::string("connection closed: ") + e.what());
  }
  std::string text = beast::buffers_to_string(impl_->buffer.data());
  impl_->buffer.consume(impl_->buffer.size());
  return text;
}

void AssistClient::close() {
  beast::error_code ec;
  if (impl_->ws.is_open()) impl_->ws.close(websocket::close_code::normal, ec);
}

}  // namespace assist::service
