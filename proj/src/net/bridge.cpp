// Copyright 2026 The Scorpion Twin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "net/bridge.hpp"

#include <atomic>
#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <deque>
#include <set>
#include <spdlog/spdlog.h>
#include <thread>

#include "common/error.hpp"

namespace scorpion::net {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using asio::ip::tcp;

nlohmann::json handle_bridge_message(BridgeBackend& backend, const std::string& text) {
  std::optional<std::int64_t> seq;
  try {
    const auto parsed = telemetry::parse_request(text);
    seq = parsed.seq;
    nlohmann::json reply = std::visit(
        [&](const auto& r) -> nlohmann::json {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, telemetry::Command>) {
            backend.submit(r);
            return {{"type", "ack"}};
          } else if constexpr (std::is_same_v<T, telemetry::CalibrateRequest>) {
            return backend.calibrate(r);
          } else if constexpr (std::is_same_v<T, telemetry::MeasureRequest>) {
            return backend.measure(r);
          } else if constexpr (std::is_same_v<T, telemetry::GetFrameRequest>) {
            return backend.frame();
          } else {
            return {{"type", "pong"}, {"schema", telemetry::kBridgeSchemaVersion}};
          }
        },
        parsed.request);
    if (seq) reply["seq"] = *seq;
    return reply;
  } catch (const telemetry::BridgeRequestError& e) {
    if (!seq) {
      try {
        const auto j = nlohmann::json::parse(text);
        if (j.is_object() && j.contains("seq") && j["seq"].is_number_integer()) seq = j["seq"].get<std::int64_t>();
      } catch (const nlohmann::json::exception&) {
      }
    }
    return telemetry::error_reply(e.code(), e.what(), seq);
  } catch (const ArgumentError& e) {
    return telemetry::error_reply("invalid_value", e.what(), seq);
  }
}

namespace {

class Client : public std::enable_shared_from_this<Client> {
 public:
  Client(tcp::socket socket, BridgeBackend& backend, std::set<std::shared_ptr<Client>>& registry)
      : ws_(std::move(socket)), backend_(backend), registry_(registry) {}

  void run() {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (ec) return self->close();
      self->open_ = true;
      self->send(nlohmann::json{{"type", "hello"}, {"schema", telemetry::kBridgeSchemaVersion}}.dump());
      self->read();
    });
  }

  void push_telemetry(const telemetry::TelemetryFrame& frame) {
    if (!open_ || (last_timestamp_ && frame.timestamp_us <= *last_timestamp_)) return;
    last_timestamp_ = frame.timestamp_us;
    send(telemetry::frame_to_json(frame).dump());
  }

  void close() {
    open_ = false;
    registry_.erase(shared_from_this());
  }

  void shutdown() {
    beast::get_lowest_layer(ws_).close();
  }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->close();
      const std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      self->send(handle_bridge_message(self->backend_, text).dump());
      self->read();
    });
  }

  void send(std::string text) {
    outbox_.push_back(std::move(text));
    if (outbox_.size() == 1) write_next();
  }

  void write_next() {
    ws_.text(true);
    ws_.async_write(asio::buffer(outbox_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->close();
      self->outbox_.pop_front();
      if (!self->outbox_.empty()) self->write_next();
    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  BridgeBackend& backend_;
  std::set<std::shared_ptr<Client>>& registry_;
  beast::flat_buffer buffer_;
  std::deque<std::string> outbox_;
  std::optional<std::uint64_t> last_timestamp_;
  bool open_ = false;
};

}  // namespace

struct WebSocketBridge::Impl {
  BridgeBackend& backend;
  BridgeOptions options;
  asio::io_context io;
  tcp::acceptor acceptor{io};
  asio::steady_timer timer{io};
  std::thread thread;
  std::set<std::shared_ptr<Client>> registry;
  std::atomic<std::size_t> client_count{0};
  std::chrono::steady_clock::duration period;
  bool stopping = false;

  Impl(BridgeBackend& b, BridgeOptions o) : backend(b), options(std::move(o)) {}

  void accept() {
    acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec == asio::error::operation_aborted || stopping) return;
      if (!ec) {
        auto client = std::make_shared<Client>(std::move(socket), backend, registry);
        registry.insert(client);
        client->run();
      }
      accept();
    });
  }

  void tick() {
    timer.expires_after(period);
    timer.async_wait([this](beast::error_code ec) {
      if (ec || stopping) return;
      client_count = registry.size();
      if (!registry.empty()) {
        const auto frame = backend.snapshot();
        const auto clients = registry;
        for (const auto& c : clients) c->push_telemetry(frame);
      }
      tick();
    });
  }
};

WebSocketBridge::WebSocketBridge(BridgeBackend& backend, BridgeOptions options)
    : impl_(std::make_unique<Impl>(backend, std::move(options))) {
  if (!(impl_->options.telemetry_rate_hz > 0.0 && impl_->options.telemetry_rate_hz <= 100.0))
    throw ArgumentError("bridge telemetry rate must be within (0, 100] Hz");
  impl_->period = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(1.0 / impl_->options.telemetry_rate_hz));
}

WebSocketBridge::~WebSocketBridge() { stop(); }

void WebSocketBridge::start() {
  if (impl_->thread.joinable()) return;
  beast::error_code ec;
  const tcp::endpoint endpoint(asio::ip::make_address(impl_->options.bind_address, ec), impl_->options.port);
  if (!ec) impl_->acceptor.open(endpoint.protocol(), ec);
  if (!ec) impl_->acceptor.set_option(tcp::acceptor::reuse_address(true), ec);
  if (!ec) impl_->acceptor.bind(endpoint, ec);
  if (!ec) impl_->acceptor.listen(asio::socket_base::max_listen_connections, ec);
  if (ec)
    throw IoError("cannot listen for WebSocket clients on port " + std::to_string(impl_->options.port) + ": " +
                  ec.message());
  impl_->accept();
  impl_->tick();
  impl_->thread = std::thread([this] { impl_->io.run(); });
}

void WebSocketBridge::stop() {
  if (!impl_->thread.joinable()) return;
  asio::post(impl_->io, [this] {
    impl_->stopping = true;
    beast::error_code ignored;
    impl_->acceptor.close(ignored);
    impl_->timer.cancel();
    const auto clients = impl_->registry;
    for (const auto& c : clients) c->shutdown();
  });
  impl_->thread.join();
  impl_->registry.clear();
}

std::uint16_t WebSocketBridge::port() const {
  beast::error_code ec;
  const auto endpoint = impl_->acceptor.local_endpoint(ec);
  return ec ? impl_->options.port : endpoint.port();
}

std::size_t WebSocketBridge::clients() const { return impl_->client_count.load(); }

}  // namespace scorpion::net
