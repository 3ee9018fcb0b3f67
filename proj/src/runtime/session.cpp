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

#include "runtime/session.hpp"

#include <cmath>

#include "sim/dynamics.hpp"
#include "sim/layout.hpp"
#include "sim/manipulator.hpp"

namespace scorpion::runtime {

using telemetry::TelemetryFrame;

Vector6d disturbance_at(const std::vector<Disturbance>& list, double t) {
  Vector6d w = Vector6d::Zero();
  for (const auto& d : list) {
    if (d.axis < 0 || d.axis > 5) throw ArgumentError("disturbance axis must be 0..5");
    if (t < d.start_s || t >= d.end_s) continue;
    if (d.kind == Disturbance::Kind::Step)
      w[d.axis] += d.amplitude;
    else
      w[d.axis] += d.amplitude * std::sin(2.0 * kPi * d.frequency_hz * (t - d.start_s) + d.phase);
  }
  return w;
}

Session::Session(SessionConfig config)
    : config_(std::move(config)),
      dt_us_(static_cast<std::uint64_t>(std::llround(config_.dt * 1e6))),
      controller_(config_.controller, sim::build_allocation_matrix(config_.layout), config_.layout.lower_limits(),
                  config_.layout.upper_limits()),
      b_(controller_.allocation_matrix()),
      sensors_(config_.environment, config_.seed),
      trim_(config_.trim) {
  if (!(config_.dt > 0.0 && config_.dt <= 0.1)) throw ConfigError("control period must lie in (0, 0.1] s");
  state_.pose = config_.initial_pose.normalized();
  ctl_state_ = controller_.initial_state(state_.pose);
  ctl_state_ = controller_.set_mode(ctl_state_, config_.controller.initial_mode, state_.pose);
  if (config_.scene) scene_ = std::make_shared<const vision::Scene>(*config_.scene);
}

void Session::submit(const telemetry::Command& command) {
  std::lock_guard lock(queue_mutex_);
  queue_.push_back(command);
}

TelemetryFrame Session::snapshot() const {
  std::lock_guard lock(snapshot_mutex_);
  return snapshot_;
}

SessionCounters Session::counters() const {
  std::lock_guard lock(snapshot_mutex_);
  return counters_;
}

void Session::apply(const telemetry::Command& c) {
  std::lock_guard lock(snapshot_mutex_);
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, telemetry::JoystickWrench>) {
          bool clamped = false;
          for (int i = 0; i < 6; ++i) {
            const double a = v.axes[static_cast<std::size_t>(i)];
            const double c = std::isfinite(a) ? std::clamp(a, -1.0, 1.0) : 0.0;
            clamped = clamped || c != a;
            joystick_[i] = c;
          }
          if (clamped) ++counters_.joystick_clamps;
        } else if constexpr (std::is_same_v<T, telemetry::SetMode>) {
          const auto mode = control::mode_from_byte(v.mode);
          if (!mode) {
            ++counters_.commands_rejected;
            return;
          }
          ctl_state_ = controller_.set_mode(ctl_state_, *mode, state_.pose);
        } else if constexpr (std::is_same_v<T, telemetry::SetHoldSetpoint>) {
          for (double x : v.pose)
            if (!std::isfinite(x)) {
              ++counters_.commands_rejected;
              return;
            }
          ctl_state_.hold = sim::Pose{v.pose[0], v.pose[1], v.pose[2], v.pose[3], v.pose[4], v.pose[5]}.normalized();
        } else if constexpr (std::is_same_v<T, telemetry::ManipulatorCmd>) {
          manip_cmd_ = {std::isfinite(v.yaw_rate) ? v.yaw_rate : 0.0, std::isfinite(v.jaw_rate) ? v.jaw_rate : 0.0};
        } else if constexpr (std::is_same_v<T, telemetry::TrimFeedForward>) {
          for (double x : v.wrench)
            if (!std::isfinite(x)) {
              ++counters_.commands_rejected;
              return;
            }
          for (int i = 0; i < 6; ++i) trim_[i] = v.wrench[static_cast<std::size_t>(i)];
        } else {
          estop_ = true;
        }
        ++counters_.commands_applied;
      },
      c);
}

TelemetryFrame Session::tick() {
  std::vector<telemetry::Command> pending;
  {
    std::lock_guard lock(queue_mutex_);
    pending.swap(queue_);
  }
  for (const auto& c : pending) apply(c);

  const double t = time();
  const sim::SensorReading reading = sensors_.read(state_, t);
  Eigen::VectorXd thrust = Eigen::VectorXd::Zero(b_.cols());
  bool solver_fault = false;
  if (!estop_ && !halted_) {
    control::ControlInputs in{reading.imu_pose, state_.twist, joystick_, trim_, config_.dt};
    control::ControlOutput out = controller_.step(in, ctl_state_);
    ctl_state_ = std::move(out.state);
    thrust = out.thrust;
    solver_fault = out.solver_fault;
  } else {
    ctl_state_.last_thrust = thrust;
  }

  TelemetryFrame f;
  f.timestamp_us = timestamp_us();
  const Vector6d pose = state_.pose.vector();
  for (int i = 0; i < 6; ++i) {
    f.pose[static_cast<std::size_t>(i)] = static_cast<float>(pose[i]);
  }
  const sim::Twist& tw = state_.twist;
  f.twist = {static_cast<float>(tw.u), static_cast<float>(tw.v), static_cast<float>(tw.w),
             static_cast<float>(tw.p), static_cast<float>(tw.q), static_cast<float>(tw.r)};
  f.depth_m = static_cast<float>(reading.depth_m);
  f.temp_c = static_cast<float>(reading.internal_temp_c);
  f.int_pressure_pa = static_cast<float>(reading.internal_pressure_pa);
  f.water_pressure_pa = static_cast<float>(reading.water_pressure_pa);
  f.leak = reading.leak ? 1 : 0;
  for (Eigen::Index i = 0; i < thrust.size() && i < 8; ++i)
    f.thrust[static_cast<std::size_t>(i)] = static_cast<float>(thrust[i]);
  f.mode = static_cast<std::uint8_t>(ctl_state_.mode);
  f.manip_yaw = static_cast<float>(manip_.yaw);
  f.manip_jaw = static_cast<float>(manip_.jaw);
  std::uint8_t faults = external_faults_.load();
  if (estop_) faults |= telemetry::kFaultEmergencyStop;
  if (solver_fault) faults |= telemetry::kFaultSolver;
  if (reading.leak) faults |= telemetry::kFaultLeak;
  if (halted_) faults |= telemetry::kFaultSimulation;

  if (!halted_) {
    const Vector6d d = disturbance_at(config_.disturbances, t);
    Vector6d body = d;
    const Eigen::Matrix3d r = rotation_zyx(state_.pose.roll, state_.pose.pitch, state_.pose.yaw);
    body.head<3>() = r.transpose() * d.head<3>();
    try {
      state_ = sim::step_dynamics(state_, thrust, body, config_.vehicle, b_, config_.dt);
      manip_ = sim::step_manipulator(manip_, manip_cmd_, config_.dt, config_.manipulator);
    } catch (const SimulationFault&) {
      halted_ = true;
      faults |= telemetry::kFaultSimulation;
    }
  }
  f.faults = faults;
  ++ticks_;
  {
    std::lock_guard lock(snapshot_mutex_);
    snapshot_ = f;
    if (solver_fault) ++counters_.solver_faults;
  }
  return f;
}

void Session::set_scene(std::optional<vision::Scene> scene) {
  std::lock_guard lock(scene_mutex_);
  scene_ = scene ? std::make_shared<const vision::Scene>(std::move(*scene)) : nullptr;
}

vision::RenderResult Session::render_camera(const std::array<float, 6>& pose,
                                            const vision::RenderOptions& options) const {
  const sim::Pose p{pose[0], pose[1], pose[2], pose[3], pose[4], pose[5]};
  const Eigen::Matrix3d body = rotation_zyx(p.roll, p.pitch, p.yaw);
  const Eigen::Vector3d position = p.position() + body * config_.camera.body_offset;
  vision::RenderOptions opt = options;
  opt.width = config_.camera.width;
  opt.height = config_.camera.height;
  std::shared_ptr<const vision::Scene> scene;
  {
    std::lock_guard lock(scene_mutex_);
    scene = scene_;
  }
  const vision::Scene empty;
  return vision::render_scene(scene ? *scene : empty, vision::vehicle_camera_rotation(p), position,
                              config_.camera.intrinsics, opt);
}

}  // namespace scorpion::runtime
