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

#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <thread>

#include "net/ports.hpp"
#include "telemetry/protocol.hpp"

namespace scorpion::net {

struct CommandServerOptions {
  std::string bind_address = "127.0.0.1";
  std::uint16_t port = kDefaultCommandPort;  // 0 picks a free port
  int max_consecutive_malformed = 3;
};

using CommandSink = std::function<void(const telemetry::Command&)>;

struct CommandServerCounters {
  std::uint64_t connections = 0;
  std::uint64_t refused = 0;
  std::uint64_t commands = 0;
  std::uint64_t malformed = 0;
  std::uint64_t malformed_disconnects = 0;
};

/// TCP command channel. Accepts one control connection at a time; a second
/// client receives an ErrorReport(ConnectionBusy) and is closed. Commands
/// are handed to `sink` in wire order. A malformed frame is discarded and
/// answered with ErrorReport(MalformedFrame); too many in a row end the
/// connection with ErrorReport(TooManyMalformed).
class CommandServer {
 public:
  CommandServer(CommandSink sink, CommandServerOptions options);
  ~CommandServer();
  CommandServer(const CommandServer&) = delete;
  CommandServer& operator=(const CommandServer&) = delete;

  /// Binds and starts serving on a background thread. Throws IoError when
  /// the port cannot be bound.
  void start();
  void stop();

  std::uint16_t port() const;
  CommandServerCounters counters() const;
  bool client_connected() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace scorpion::net
