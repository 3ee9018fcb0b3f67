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

#include <filesystem>
#include <string>

#include "net/ports.hpp"
#include "runtime/session.hpp"

namespace scorpion::mission {

inline constexpr int kConfigVersion = 1;

struct TelemetrySettings {
  std::string host = "127.0.0.1";
  double rate_hz = 20.0;
  std::uint16_t telemetry_port = net::kDefaultTelemetryPort;
  std::uint16_t command_port = net::kDefaultCommandPort;
  std::uint16_t bridge_port = net::kDefaultBridgePort;
};

struct Config {
  runtime::SessionConfig session;
  TelemetrySettings telemetry;
};

/// Reads a YAML configuration. Missing sections and keys keep their
/// defaults; unknown keys, wrong shapes and a missing or unsupported
/// `config_version` throw ConfigError naming the file and line.
Config load_config(const std::filesystem::path& path);
Config parse_config(const std::string& text, const std::string& source = "<config>");

/// Serializes every setting, so the output documents the effective values.
std::string dump_config(const Config& config);

}  // namespace scorpion::mission
