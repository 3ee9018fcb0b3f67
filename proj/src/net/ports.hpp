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
#include <string>

namespace scorpion::net {

inline constexpr std::uint16_t kDefaultTelemetryPort = 14550;
inline constexpr std::uint16_t kDefaultCommandPort = 14551;
inline constexpr std::uint16_t kDefaultBridgePort = 8080;

inline constexpr const char* kTelemetryPortEnv = "SCORPION_TELEM_PORT";
inline constexpr const char* kCommandPortEnv = "SCORPION_CMD_PORT";
inline constexpr const char* kBridgePortEnv = "SCORPION_WS_PORT";

/// Port from environment variable `name`, or `fallback` when unset or empty.
/// Throws ConfigError when the variable is set but is not a port number.
std::uint16_t port_from_env(const char* name, std::uint16_t fallback);

/// Parses a decimal port number in [0, 65535]; throws ConfigError otherwise.
std::uint16_t parse_port(const std::string& text, const std::string& what);

}  // namespace scorpion::net
