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

#include <array>
#include <optional>
#include <string>
#include <variant>

#include "telemetry/protocol.hpp"
#include "json.hpp"

namespace scorpion::telemetry {

inline constexpr const char* kBridgeSchemaVersion = "scorpion-bridge/1";

/// Telemetry frame as a JSON object whose keys are the CSV column names,
/// plus "type": "telemetry".
nlohmann::json frame_to_json(const TelemetryFrame& frame);
TelemetryFrame frame_from_json(const nlohmann::json& j);

struct CalibrateRequest {
  std::array<double, 2> p1{}, p2{};
  double length_m = 0.0;
};
struct MeasureRequest {
  std::array<double, 2> p1{}, p2{};
  bool subpixel = true;
};
struct GetFrameRequest {};
struct PingRequest {};

using BridgeRequest = std::variant<Command, CalibrateRequest, MeasureRequest, GetFrameRequest, PingRequest>;

struct ParsedRequest {
  BridgeRequest request;
  std::optional<std::int64_t> seq;
};

/// A JSON message the bridge cannot act on. `code` is the value of the
/// "error" member of the reply.
class BridgeRequestError : public Error {
 public:
  BridgeRequestError(std::string code, const std::string& detail) : Error(detail), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// Parses one console message. Joystick axes are not clamped here; the
/// session clamps and counts them like binary commands.
ParsedRequest parse_request(const std::string& text);

nlohmann::json command_to_json(const Command& c);

nlohmann::json error_reply(const std::string& code, const std::string& detail, std::optional<std::int64_t> seq = {});

}  // namespace scorpion::telemetry
