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
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>

#include "net/bridge.hpp"
#include "net/command_server.hpp"
#include "net/session_backend.hpp"
#include "net/udp.hpp"
#include "runtime/session.hpp"
#include "telemetry/csv.hpp"

namespace scorpion::net {

struct LiveOptions {
  double speed = 1.0;                // simulated seconds per wall-clock second
  std::optional<double> duration_s;  // run until request_stop() when unset
  std::optional<PublisherOptions> telemetry;
  std::optional<CommandServerOptions> commands;
  std::optional<BridgeOptions> bridge;
  std::optional<std::filesystem::path> csv;
  std::function<void(runtime::Session&)> before_tick;
  const std::atomic<bool>* stop = nullptr;  // checked before every tick
};

/// Runs a session against the wall clock with the network endpoints
/// attached. The tick loop runs on the caller's thread; the endpoints run on
/// their own threads and reach the session only through submit/snapshot.
class LiveRunner {
 public:
  LiveRunner(runtime::Session& session, LiveOptions options);
  ~LiveRunner();

  /// Opens the endpoints. Throws IoError when a port cannot be bound.
  void start();
  /// Ticks until the duration elapses, request_stop() is called or the
  /// simulation halts. Returns the number of ticks run.
  std::uint64_t run();
  void request_stop() { stop_requested_ = true; }
  void shutdown();

  std::uint16_t command_port() const;
  std::uint16_t bridge_port() const;
  const CommandServer* command_server() const { return commands_.get(); }
  const TelemetryPublisher* publisher() const { return publisher_.get(); }
  bool log_failed() const { return log_ && log_->failed(); }

 private:
  runtime::Session& session_;
  LiveOptions options_;
  std::unique_ptr<telemetry::CsvLogger> log_;
  std::unique_ptr<TelemetryPublisher> publisher_;
  std::unique_ptr<CommandServer> commands_;
  std::unique_ptr<SessionBackend> backend_;
  std::unique_ptr<WebSocketBridge> bridge_;
  std::atomic<bool> stop_requested_{false};
};

/// Re-publishes logged frames at their recorded spacing divided by `speed`.
/// Returns the number of frames sent.
std::uint64_t replay_frames(const std::vector<telemetry::TelemetryFrame>& frames, UdpSender& sender, double speed,
                            const std::atomic<bool>* stop = nullptr);

}  // namespace scorpion::net
