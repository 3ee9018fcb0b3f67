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

#include <cstdint>
#include <memory>
#include <string>

#include "json.hpp"
#include "net/ports.hpp"
#include "telemetry/json_codec.hpp"

namespace scorpion::net {

/// What the WebSocket bridge needs from the vehicle side. Methods are called
/// from the bridge thread. Request handlers return the reply object (without
/// "seq") and report refusals with BridgeRequestError.
class BridgeBackend {
 public:
  virtual ~BridgeBackend() = default;
  virtual void submit(const telemetry::Command& command) = 0;
  virtual telemetry::TelemetryFrame snapshot() const = 0;
  virtual nlohmann::json calibrate(const telemetry::CalibrateRequest& request) = 0;
  virtual nlohmann::json measure(const telemetry::MeasureRequest& request) = 0;
  virtual nlohmann::json frame() = 0;
};

struct BridgeOptions {
  std::string bind_address = "127.0.0.1";
  std::uint16_t port = kDefaultBridgePort;  // 0 picks a free port
  double telemetry_rate_hz = 20.0;
};

/// Answers one console message: the reply object, or an error reply.
nlohmann::json handle_bridge_message(BridgeBackend& backend, const std::string& text);

/// WebSocket JSON mirror for the operator console. Each client gets a
/// hello message, then telemetry objects at the configured rate; its
/// requests are answered in order on the same socket.
class WebSocketBridge {
 public:
  WebSocketBridge(BridgeBackend& backend, BridgeOptions options);
  ~WebSocketBridge();
  WebSocketBridge(const WebSocketBridge&) = delete;
  WebSocketBridge& operator=(const WebSocketBridge&) = delete;

  /// Throws IoError when the port cannot be bound.
  void start();
  void stop();
  std::uint16_t port() const;
  std::size_t clients() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace scorpion::net
