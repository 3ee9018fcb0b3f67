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
#include <functional>

#include <filesystem>
#include <optional>
#include <vector>

#include "mission/config.hpp"
#include "mission/report.hpp"
#include "mission/script.hpp"
#include "telemetry/protocol.hpp"

namespace scorpion::mission {

/// Hold-error statistics reconstructed from a telemetry log and the script
/// that produced it. The hold setpoint is the logged pose on the row where a
/// station-keep engage takes effect, or an explicit hold action. The
/// reference time is the later of the engage time and the first disturbance
/// onset after it; the limit window starts `settle_s` after it.
struct HoldAnalysis {
  bool engaged = false;
  double engage_time_s = 0.0;
  double reference_time_s = 0.0;
  double max_error_m = 0.0;       // inside the limit window
  double rms_error_m = 0.0;       // inside the limit window
  double peak_error_m = 0.0;      // whole hold, transient included
  double max_yaw_error_rad = 0.0; // inside the limit window
  std::optional<double> settling_time_s;
  double max_drift_m = 0.0;       // largest distance from the first logged position
  std::size_t window_samples = 0;
};

HoldAnalysis analyze_hold(const std::vector<telemetry::TelemetryFrame>& frames, const MissionScript& script,
                          double dt);

/// Report for a finished mission, computed from the log alone.
ExperimentReport mission_report(const std::vector<telemetry::TelemetryFrame>& frames, const MissionScript& script,
                                double dt);

struct RunOptions {
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;  // overrides script and config
};

struct RunResult {
  ExperimentReport report;
  std::filesystem::path csv;
  std::uint64_t ticks = 0;
  bool halted = false;
};

/// Effective configuration for a script: seed precedence is option, then
/// script, then config. Throws ConfigError for unknown scene names.
runtime::SessionConfig mission_session_config(const Config& config, const MissionScript& script,
                                              std::optional<std::uint64_t> seed);

/// Runs the mission headless as fast as possible, writes telemetry.csv,
/// report.json and summary.txt into `out_dir`.
RunResult run_mission(const Config& config, const MissionScript& script, const RunOptions& options);

struct LiveRunOptions {
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;
  double speed = 1.0;
  std::optional<double> duration_s;  // defaults to the script duration; unset without a script runs until stopped
  std::optional<std::uint16_t> telemetry_port, command_port, bridge_port;  // override environment and config
  bool bridge = true;
  const std::atomic<bool>* stop = nullptr;
  std::function<void(std::uint16_t command_port, std::uint16_t bridge_port)> on_ready;
};

/// Runs against the wall clock with UDP telemetry, the TCP command server
/// and the WebSocket bridge attached. Port precedence: option, then
/// SCORPION_TELEM_PORT / SCORPION_CMD_PORT / SCORPION_WS_PORT, then config.
/// The report is computed from the written log as for run_mission.
RunResult run_live(const Config& config, const std::optional<MissionScript>& script, const LiveRunOptions& options);

/// Applies the script actions due at the session's current tick.
class ActionCursor {
 public:
  explicit ActionCursor(const MissionScript& script) : script_(script) {}
  void apply_due(runtime::Session& session);

 private:
  const MissionScript& script_;
  std::size_t next_ = 0;
};

/// Runs every *.mission file in `battery_dir` (sorted by name) into
/// out_dir/<name>/ and combines the outcomes: one criterion per case.
ExperimentReport run_battery(const Config& config, const std::filesystem::path& battery_dir,
                             const std::filesystem::path& out_dir, std::optional<std::uint64_t> seed);

}  // namespace scorpion::mission
