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

#include "control/controller.hpp"

#include <algorithm>

namespace scorpion::control {

const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::ManualConstant: return "manual_constant";
    case Mode::ManualIncremental: return "manual_incremental";
    case Mode::StationKeep: return "station_keep";
  }
  return "unknown";
}

std::optional<Mode> mode_from_byte(std::uint8_t value) {
  if (value > 2) return std::nullopt;
  return static_cast<Mode>(value);
}

PidGains default_gains() {
  PidGains g;
  g.kp << 300.0, 300.0, 300.0, 10.0, 10.0, 20.0;
  g.ki << 100.0, 100.0, 100.0, 1.0, 1.0, 10.0;
  g.kd << 0.0, 0.0, 0.0, 0.0, 0.0, 0.0;
  g.rate_damping << 170.0, 170.0, 170.0, 4.0, 4.0, 8.0;
  g.kaw << 0.01, 0.01, 0.01, 0.1, 0.1, 0.1;
  g.i_max << 0.5, 0.5, 0.5, 0.5, 0.5, 1.0;
  g.derivative_alpha = 0.1;
  return g;
}

Vector6d compute_error(const sim::Pose& pose, const sim::Pose& setpoint) {
  Vector6d e = setpoint.vector() - pose.vector();
  for (int i = 3; i < 6; ++i) e[i] = wrap_angle(e[i]);
  return e;
}

PidOutput pid_step(const Vector6d& error, ControllerState state, const PidGains& gains,
                   const Vector6d& feed_forward, double dt) {
  if (!(dt > 0.0)) throw ArgumentError("pid_step: dt must be positive");
  state.integrator = (state.integrator + error * dt).cwiseMax(-gains.i_max).cwiseMin(gains.i_max);

  const Vector6d raw = state.has_prev_error ? Vector6d((error - state.prev_error) / dt) : Vector6d::Zero();
  state.derivative += gains.derivative_alpha * (raw - state.derivative);
  state.prev_error = error;
  state.has_prev_error = true;

  Vector6d tau = gains.kp.cwiseProduct(error) + gains.ki.cwiseProduct(state.integrator) +
                 gains.kd.cwiseProduct(state.derivative) + feed_forward;
  return {tau, std::move(state)};
}

Eigen::VectorXd rate_limit(const Eigen::VectorXd& command, const Eigen::VectorXd& previous, double max_slew,
                           double dt) {
  if (!(max_slew > 0.0)) throw ArgumentError("rate_limit: max_slew must be positive");
  const double max_step = max_slew * dt;
  return previous + (command - previous).cwiseMax(-max_step).cwiseMin(max_step);
}

ControllerState anti_windup(ControllerState state, const Vector6d& tau_unsat, const Vector6d& tau_realized,
                            const PidGains& gains, double dt) {
  for (int i = 0; i < 6; ++i) {
    const double gap = tau_realized[i] - tau_unsat[i];
    if (gap == 0.0) continue;
    state.integrator[i] = std::clamp(state.integrator[i] + gains.kaw[i] * gap * dt, -gains.i_max[i], gains.i_max[i]);
  }
  return state;
}

Controller::Controller(ControllerConfig config, sim::AllocationMatrix b, Eigen::VectorXd lower,
                       Eigen::VectorXd upper)
    : config_(std::move(config)), b_(std::move(b)), lower_(std::move(lower)), upper_(std::move(upper)) {
  if (b_.rows() != 6) throw ArgumentError("controller needs a 6-row allocation matrix");
  if (lower_.size() != b_.cols() || upper_.size() != b_.cols())
    throw ArgumentError("controller limit vectors do not match the allocation matrix");
}

ControllerState Controller::initial_state(const sim::Pose& pose) const {
  ControllerState s;
  s.last_thrust = Eigen::VectorXd::Zero(b_.cols());
  s.hold = pose;
  s.mode = Mode::ManualConstant;
  return set_mode(std::move(s), config_.initial_mode, pose);
}

ControllerState Controller::set_mode(ControllerState state, Mode mode, const sim::Pose& pose) const {
  if (mode == Mode::StationKeep) {
    state.hold = pose;
    state.integrator.setZero();
    state.derivative.setZero();
    state.has_prev_error = false;
  }
  if (mode == Mode::ManualIncremental && state.mode != Mode::ManualIncremental) state.incremental_demand.setZero();
  state.mode = mode;
  return state;
}

alloc::AllocationResult Controller::allocate(const Vector6d& tau) const {
  alloc::AllocationProblem p{b_, tau, config_.axis_weights, lower_, upper_, config_.epsilon};
  return alloc::allocate(p);
}

Vector6d Controller::demand(const ControlInputs& in, ControllerState& state) const {
  const Vector6d stick = in.joystick.cwiseMax(-1.0).cwiseMin(1.0);
  switch (state.mode) {
    case Mode::ManualConstant:
      return stick.cwiseProduct(config_.max_demand) + in.feed_forward;
    case Mode::ManualIncremental:
      state.incremental_demand = (state.incremental_demand + stick.cwiseProduct(config_.incremental_ramp) * in.dt)
                                     .cwiseMax(-config_.max_demand)
                                     .cwiseMin(config_.max_demand);
      return state.incremental_demand + in.feed_forward;
    case Mode::StationKeep: {
      Vector6d e = compute_error(in.pose, state.hold);
      // Regulate position in the body frame so the wrench is body-referenced.
      const Eigen::Matrix3d r = rotation_zyx(in.pose.roll, in.pose.pitch, in.pose.yaw);
      e.head<3>() = r.transpose() * e.head<3>();
      const Vector6d user = stick.cwiseProduct(config_.max_demand) + in.feed_forward;
      PidOutput pid = pid_step(e, std::move(state), config_.gains, user, in.dt);
      state = std::move(pid.state);
      return pid.tau - config_.gains.rate_damping.cwiseProduct(in.rates.vector());
    }
  }
  return Vector6d::Zero();
}

ControlOutput Controller::step(const ControlInputs& in, ControllerState state) const {
  ControlOutput out;
  if (state.last_thrust.size() != b_.cols()) state.last_thrust = Eigen::VectorXd::Zero(b_.cols());
  out.tau_demand = demand(in, state);

  alloc::AllocationResult result;
  try {
    result = allocate(out.tau_demand);
  } catch (const Error&) {
    out.solver_fault = true;
    out.thrust = Eigen::VectorXd::Zero(b_.cols());
    state.last_thrust = out.thrust;
    out.state = std::move(state);
    return out;
  }

  out.tau_realized = b_ * result.thrust;
  out.saturated = result.saturated;
  out.thrust = rate_limit(result.thrust, state.last_thrust, config_.max_slew, in.dt)
                   .cwiseMax(lower_)
                   .cwiseMin(upper_);
  state.last_thrust = out.thrust;

  if (state.mode == Mode::StationKeep && !result.saturated.empty())
    state = anti_windup(std::move(state), out.tau_demand, out.tau_realized, config_.gains, in.dt);
  out.state = std::move(state);
  return out;
}

}  // namespace scorpion::control
