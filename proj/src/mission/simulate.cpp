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

#include "mission/simulate.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>

#include "common/error.hpp"
#include "common/math.hpp"
#include "mission/scenes.hpp"
#include "net/live_runner.hpp"
#include "net/ports.hpp"
#include "telemetry/csv.hpp"

namespace scorpion::mission {

namespace {

constexpr double kDefaultSettleBand = 0.15;

Eigen::Vector3d position(const telemetry::TelemetryFrame& f) { return {f.pose[0], f.pose[1], f.pose[2]}; }

}  // namespace

HoldAnalysis analyze_hold(const std::vector<telemetry::TelemetryFrame>& frames, const MissionScript& script,
                          double dt) {
  HoldAnalysis h;
  if (frames.empty()) return h;
  const std::uint64_t dt_us = static_cast<std::uint64_t>(std::llround(dt * 1e6));
  const double band = script.hold_limit_m.value_or(kDefaultSettleBand);
  std::vector<double> onsets;
  for (const auto& a : script.actions)
    if (const auto* d = std::get_if<runtime::Disturbance>(&a.payload)) onsets.push_back(d->start_s);
  std::sort(onsets.begin(), onsets.end());

  std::size_t next = 0;
  bool holding = false, stopped = false;
  sim::Pose hold;
  double sum_sq = 0.0;
  std::optional<double> last_violation;
  double last_hold_time = 0.0;
  const Eigen::Vector3d start = position(frames.front());
  for (const auto& f : frames) {
    const std::uint64_t k = f.timestamp_us / dt_us;
    const double t = static_cast<double>(f.timestamp_us) * 1e-6;
    for (; next < script.actions.size() && action_tick(script.actions[next].time_s, dt) <= k; ++next) {
      const auto* cmd = std::get_if<telemetry::Command>(&script.actions[next].payload);
      if (!cmd) continue;
      if (const auto* m = std::get_if<telemetry::SetMode>(cmd)) {
        holding = m->mode == 2 && !stopped;
        if (holding) {
          hold = sim::Pose{f.pose[0], f.pose[1], f.pose[2], f.pose[3], f.pose[4], f.pose[5]};
          h.engaged = true;
          h.engage_time_s = t;
          h.reference_time_s = t;
          const auto later = std::upper_bound(onsets.begin(), onsets.end(), t - 1e-9);
          if (later != onsets.end()) h.reference_time_s = *later;
          h.max_error_m = h.rms_error_m = h.peak_error_m = h.max_yaw_error_rad = 0.0;
          h.window_samples = 0;
          sum_sq = 0.0;
          last_violation.reset();
        }
      } else if (const auto* s = std::get_if<telemetry::SetHoldSetpoint>(cmd)) {
        hold = sim::Pose{s->pose[0], s->pose[1], s->pose[2], s->pose[3], s->pose[4], s->pose[5]}.normalized();
      } else if (std::holds_alternative<telemetry::EmergencyStop>(*cmd)) {
        holding = false;
        stopped = true;
      }
    }
    h.max_drift_m = std::max(h.max_drift_m, (position(f) - start).norm());
    if (!holding || f.mode != 2) continue;
    const double err = (position(f) - hold.position()).norm();
    const double yaw_err = std::abs(wrap_angle(static_cast<double>(f.pose[5]) - hold.yaw));
    h.peak_error_m = std::max(h.peak_error_m, err);
    last_hold_time = t;
    if (t >= h.reference_time_s - 1e-9 && err > band) last_violation = t;
    if (t >= h.reference_time_s + script.settle_s - 1e-9) {
      h.max_error_m = std::max(h.max_error_m, err);
      h.max_yaw_error_rad = std::max(h.max_yaw_error_rad, yaw_err);
      sum_sq += err * err;
      ++h.window_samples;
    }
  }
  if (h.window_samples > 0) h.rms_error_m = std::sqrt(sum_sq / static_cast<double>(h.window_samples));
  if (h.engaged) {
    if (!last_violation) {
      h.settling_time_s = 0.0;
    } else if (*last_violation < last_hold_time) {
      h.settling_time_s = *last_violation + dt - h.reference_time_s;
    }
  }
  return h;
}

ExperimentReport mission_report(const std::vector<telemetry::TelemetryFrame>& frames, const MissionScript& script,
                                double dt) {
  ExperimentReport r;
  r.scenario = script.name;
  const auto h = analyze_hold(frames, script, dt);
  const double expected = static_cast<double>(mission_ticks(script, dt));
  r.metrics.push_back({"logged_ticks", static_cast<double>(frames.size()), ""});
  r.metrics.push_back({"max_drift_m", h.max_drift_m, "m"});
  std::uint8_t faults = 0;
  for (const auto& f : frames) faults |= f.faults;
  r.metrics.push_back({"fault_bits", static_cast<double>(faults), ""});
  r.criteria.push_back({"complete log", static_cast<double>(frames.size()), ">=", expected, false});
  if (h.engaged) {
    r.metrics.push_back({"hold_engage_time_s", h.engage_time_s, "s"});
    r.metrics.push_back({"hold_reference_time_s", h.reference_time_s, "s"});
    r.metrics.push_back({"hold_max_error_m", h.window_samples ? h.max_error_m : NAN, "m"});
    r.metrics.push_back({"hold_rms_error_m", h.window_samples ? h.rms_error_m : NAN, "m"});
    r.metrics.push_back({"hold_peak_error_m", h.peak_error_m, "m"});
    r.metrics.push_back({"hold_max_yaw_error_deg", h.max_yaw_error_rad * 180.0 / kPi, "deg"});
    r.metrics.push_back({"settling_time_s", h.settling_time_s.value_or(NAN), "s"});
  }
  if (script.hold_limit_m) {
    const double measured = (h.engaged && h.window_samples) ? h.max_error_m : NAN;
    r.criteria.push_back({"hold error after " + std::to_string(static_cast<int>(script.settle_s)) + " s settle",
                          measured, "<=", *script.hold_limit_m, script.informational});
  }
  if (script.drift_limit_m)
    r.criteria.push_back({"drift from start", h.max_drift_m, "<", *script.drift_limit_m, script.informational});
  if (faults & telemetry::kFaultSimulation) r.notes.push_back("simulation fault: run halted");
  if (faults & telemetry::kFaultLogWrite) r.notes.push_back("telemetry log write failure");
  return r;
}

runtime::SessionConfig mission_session_config(const Config& config, const MissionScript& script,
                                              std::optional<std::uint64_t> seed) {
  runtime::SessionConfig s = config.session;
  if (seed) {
    s.seed = *seed;
  } else if (script.seed) {
    s.seed = *script.seed;
  }
  for (const auto& a : script.actions)
    if (const auto* sc = std::get_if<SceneAction>(&a.payload); sc && !named_scene(sc->name))
      throw ConfigError("line " + std::to_string(a.line) + ": unknown scene '" + sc->name + "'");
  return s;
}

void ActionCursor::apply_due(runtime::Session& session) {
  const double dt = session.config().dt;
  const auto& actions = script_.actions;
  for (; next_ < actions.size() && action_tick(actions[next_].time_s, dt) <= session.ticks(); ++next_) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, telemetry::Command>) {
            session.submit(v);
          } else if constexpr (std::is_same_v<T, runtime::Disturbance>) {
            session.add_disturbance(v);
          } else {
            session.set_scene(named_scene(v.name));
          }
        },
        actions[next_].payload);
  }
}

RunResult run_mission(const Config& config, const MissionScript& script, const RunOptions& options) {
  runtime::Session session(mission_session_config(config, script, options.seed));
  std::filesystem::create_directories(options.out_dir);
  RunResult result;
  result.csv = options.out_dir / "telemetry.csv";
  const std::uint64_t n = mission_ticks(script, session.config().dt);
  {
    telemetry::CsvLogger log(result.csv);
    ActionCursor cursor(script);
    for (std::uint64_t k = 0; k < n && !session.halted(); ++k) {
      cursor.apply_due(session);
      const auto frame = session.tick();
      if (!log.write(frame)) session.raise_fault(telemetry::kFaultLogWrite);
    }
    log.close();
  }
  result.ticks = session.ticks();
  result.halted = session.halted();
  result.report = mission_report(telemetry::read_csv_log(result.csv), script, session.config().dt);
  result.report.artifacts.push_back(result.csv.string());
  result.report.write(options.out_dir);
  return result;
}

RunResult run_live(const Config& config, const std::optional<MissionScript>& script, const LiveRunOptions& options) {
  MissionScript effective;
  effective.name = "live";
  if (script) effective = *script;
  runtime::Session session(mission_session_config(config, effective, options.seed));
  std::filesystem::create_directories(options.out_dir);
  RunResult result;
  result.csv = options.out_dir / "telemetry.csv";

  const auto& t = config.telemetry;
  net::LiveOptions live;
  live.speed = options.speed;
  live.duration_s = options.duration_s;
  if (!live.duration_s && script) live.duration_s = script->duration_s;
  live.csv = result.csv;
  live.telemetry = net::PublisherOptions{
      t.host, options.telemetry_port.value_or(net::port_from_env(net::kTelemetryPortEnv, t.telemetry_port)), t.rate_hz};
  net::CommandServerOptions commands;
  commands.port = options.command_port.value_or(net::port_from_env(net::kCommandPortEnv, t.command_port));
  live.commands = commands;
  if (options.bridge) {
    net::BridgeOptions bridge;
    bridge.port = options.bridge_port.value_or(net::port_from_env(net::kBridgePortEnv, t.bridge_port));
    bridge.telemetry_rate_hz = t.rate_hz;
    live.bridge = bridge;
  }
  ActionCursor cursor(effective);
  live.before_tick = [&](runtime::Session& s) { cursor.apply_due(s); };
  live.stop = options.stop;
  {
    net::LiveRunner runner(session, live);
    runner.start();
    spdlog::info("live: telemetry udp {}:{}, commands tcp {}, bridge ws {}", t.host, live.telemetry->port,
                 runner.command_port(), runner.bridge_port());
    if (options.on_ready) options.on_ready(runner.command_port(), runner.bridge_port());
    runner.run();
    runner.shutdown();
  }
  result.ticks = session.ticks();
  result.halted = session.halted();
  if (!script) effective.duration_s = static_cast<double>(result.ticks) * session.config().dt;
  result.report = mission_report(telemetry::read_csv_log(result.csv), effective, session.config().dt);
  result.report.artifacts.push_back(result.csv.string());
  result.report.write(options.out_dir);
  return result;
}

ExperimentReport run_battery(const Config& config, const std::filesystem::path& battery_dir,
                             const std::filesystem::path& out_dir, std::optional<std::uint64_t> seed) {
  std::vector<std::filesystem::path> files;
  if (!std::filesystem::is_directory(battery_dir))
    throw ConfigError(battery_dir.string() + ": battery directory not found");
  for (const auto& e : std::filesystem::directory_iterator(battery_dir))
    if (e.path().extension() == ".mission") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ConfigError(battery_dir.string() + ": no .mission files");

  ExperimentReport combined;
  combined.scenario = "stationkeep-battery";
  double worst = 0.0;
  for (const auto& file : files) {
    const auto script = load_script(file);
    const auto run = run_mission(config, script, {out_dir / script.name, seed});
    for (const auto& c : run.report.criteria) {
      auto row = c;
      row.name = script.name + ": " + c.name;
      combined.criteria.push_back(row);
    }
    for (const auto& m : run.report.metrics)
      if (m.name == "hold_max_error_m" || m.name == "settling_time_s" || m.name == "max_drift_m")
        combined.metrics.push_back({script.name + "." + m.name, m.value, m.unit});
    if (!script.informational)
      if (const auto e = run.report.metric("hold_max_error_m"); e && std::isfinite(*e)) worst = std::max(worst, *e);
    combined.artifacts.push_back((out_dir / script.name / "report.json").string());
  }
  combined.metrics.push_back({"worst_hold_error_m", worst, "m"});
  combined.write(out_dir);
  return combined;
}

}  // namespace scorpion::mission
