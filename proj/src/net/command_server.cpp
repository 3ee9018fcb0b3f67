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

#include "net/command_server.hpp"

#include <array>
#include <boost/asio.hpp>
#include <mutex>
#include <spdlog/spdlog.h>

#include "common/error.hpp"

namespace scorpion::net {

namespace asio = boost::asio;
using asio::ip::tcp;

namespace {

void send_error(tcp::socket& socket, telemetry::ErrorCode code, const std::string& text) {
  telemetry::ErrorReport report;
  report.code = static_cast<std::uint8_t>(code);
  report.text = text.substr(0, 200);
  boost::system::error_code ec;
  asio::write(socket, asio::buffer(telemetry::encode(report)), ec);
}

}  // namespace

struct CommandServer::Impl {
  CommandSink sink;
  CommandServerOptions options;
  asio::io_context io;
  tcp::acceptor acceptor{io};
  std::thread thread;
  std::shared_ptr<tcp::socket> client;
  telemetry::StreamDecoder decoder;
  std::array<std::uint8_t, 4096> read_buffer{};
  int consecutive_malformed = 0;
  mutable std::mutex counters_mutex;
  CommandServerCounters counters;
  std::atomic<bool> connected{false};

  void accept() {
    acceptor.async_accept([this](const boost::system::error_code& ec, tcp::socket socket) {
      if (ec == asio::error::operation_aborted) return;
      if (!ec) on_accept(std::move(socket));
      accept();
    });
  }

  void on_accept(tcp::socket socket) {
    boost::system::error_code ignored;
    socket.set_option(tcp::no_delay(true), ignored);
    if (client) {
      send_error(socket, telemetry::ErrorCode::ConnectionBusy, "another control connection is active");
      socket.shutdown(tcp::socket::shutdown_both, ignored);
      socket.close(ignored);
      bump([](auto& c) { ++c.refused; });
      spdlog::warn("refused second command connection");
      return;
    }
    client = std::make_shared<tcp::socket>(std::move(socket));
    decoder = telemetry::StreamDecoder{};
    consecutive_malformed = 0;
    connected = true;
    bump([](auto& c) { ++c.connections; });
    read(client);
  }

  void read(std::shared_ptr<tcp::socket> socket) {
    socket->async_read_some(asio::buffer(read_buffer),
                            [this, socket](const boost::system::error_code& ec, std::size_t n) {
                              if (ec) {
                                if (socket == client) drop();
                                return;
                              }
                              decoder.feed(read_buffer.data(), n);
                              if (consume()) read(socket);
                            });
  }

  // Returns false when the connection was closed.
  bool consume() {
    while (auto item = decoder.next()) {
      std::optional<telemetry::Command> command;
      std::string problem;
      if (item->message) {
        command = telemetry::as_command(*item->message);
        if (!command) problem = "message type is not a command";
      } else {
        problem = item->error ? item->error->what() : "undecodable frame";
      }
      if (command) {
        consecutive_malformed = 0;
        bump([](auto& c) { ++c.commands; });
        sink(*command);
        continue;
      }
      ++consecutive_malformed;
      bump([](auto& c) { ++c.malformed; });
      if (consecutive_malformed >= options.max_consecutive_malformed) {
        send_error(*client, telemetry::ErrorCode::TooManyMalformed, problem);
        bump([](auto& c) { ++c.malformed_disconnects; });
        spdlog::warn("closing command connection after {} malformed frames", consecutive_malformed);
        drop();
        return false;
      }
      send_error(*client, telemetry::ErrorCode::MalformedFrame, problem);
    }
    return true;
  }

  void drop() {
    if (!client) return;
    boost::system::error_code ignored;
    client->shutdown(tcp::socket::shutdown_both, ignored);
    client->close(ignored);
    client.reset();
    connected = false;
  }

  template <class F>
  void bump(F f) {
    std::lock_guard lock(counters_mutex);
    f(counters);
  }
};

CommandServer::CommandServer(CommandSink sink, CommandServerOptions options) : impl_(std::make_unique<Impl>()) {
  impl_->sink = std::move(sink);
  impl_->options = std::move(options);
}

CommandServer::~CommandServer() { stop(); }

void CommandServer::start() {
  if (impl_->thread.joinable()) return;
  boost::system::error_code ec;
  const tcp::endpoint endpoint(asio::ip::make_address(impl_->options.bind_address, ec), impl_->options.port);
  if (!ec) impl_->acceptor.open(endpoint.protocol(), ec);
  if (!ec) impl_->acceptor.set_option(tcp::acceptor::reuse_address(true), ec);
  if (!ec) impl_->acceptor.bind(endpoint, ec);
  if (!ec) impl_->acceptor.listen(asio::socket_base::max_listen_connections, ec);
  if (ec)
    throw IoError("cannot listen for commands on port " + std::to_string(impl_->options.port) + ": " + ec.message());
  impl_->accept();
  impl_->thread = std::thread([this] { impl_->io.run(); });
}

void CommandServer::stop() {
  if (!impl_->thread.joinable()) return;
  asio::post(impl_->io, [this] {
    boost::system::error_code ignored;
    impl_->acceptor.close(ignored);
    impl_->drop();
  });
  impl_->thread.join();
  impl_->io.stop();
}

std::uint16_t CommandServer::port() const {
  boost::system::error_code ec;
  const auto endpoint = impl_->acceptor.local_endpoint(ec);
  return ec ? impl_->options.port : endpoint.port();
}

CommandServerCounters CommandServer::counters() const {
  std::lock_guard lock(impl_->counters_mutex);
  return impl_->counters;
}

bool CommandServer::client_connected() const { return impl_->connected.load(); }

}  // namespace scorpion::net
