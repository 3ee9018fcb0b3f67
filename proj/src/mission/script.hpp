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
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "runtime/session.hpp"
#include "telemetry/protocol.hpp"

namespace scorpion::mission {

struct SceneAction {
  std::string name;
};

using ActionPayload = std::variant<telemetry::Command, runtime::Disturbance, SceneAction>;

struct TimedAction {
  double time_s = 0.0;
  ActionPayload payload;
  int line = 0;
};

/// Timed actions plus run settings, parsed from the line-oriented mission
/// format described in docs/mission-format.md.
struct MissionScript {
  std::string name = "mission";
  double duration_s = 0.0;
  std::optional<std::uint64_t> seed;
  std::optional<double> hold_limit_m;   // station-keep error limit after settling
  std::optional<double> drift_limit_m;  // limit on distance from the start position
  double settle_s = 10.0;               // transient excluded from the hold limit
  bool informational = false;           // limits reported but never fail the run
  std::vector<TimedAction> actions;   // time-ordered
};

/// Throws ConfigError "<source>:<line>: <message>" on any violation.
MissionScript parse_script(const std::string& text, const std::string& source = "<script>");
MissionScript load_script(const std::filesystem::path& path);

/// Canonical text form; parse_script(format_script(s)) reproduces s.
std::string format_script(const MissionScript& script);

/// Number of control ticks the mission runs for.
std::uint64_t mission_ticks(const MissionScript& script, double dt);

/// Index of the first tick at which an action at `time_s` is applied:
/// the earliest tick k with k * dt >= time_s (within 1e-9 s).
std::uint64_t action_tick(double time_s, double dt);

}  // namespace scorpion::mission
