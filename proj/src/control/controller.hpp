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
#include <optional>

#include "alloc/allocator.hpp"
#include "common/math.hpp"
#include "sim/layout.hpp"
#include "sim/types.hpp"

namespace scorpion::control {

enum class Mode : std::uint8_t { ManualConstant = 0, ManualIncremental = 1, StationKeep = 2 };

const char* mode_name(Mode mode);
std::optional<Mode> mode_from_byte(std::uint8_t value);

/// Per-axis gains, ordered surge, sway, heave, roll, pitch, yaw.
struct PidGains {
  Vector6d kp = Vector6d::Zero();
  Vector6d ki = Vector6d::Zero();
  Vector6d kd = Vector6d::Zero();
  Vector6d kaw = Vector6d::Zero();           // back-calculation gain
  Vector6d i_max = Vector6d::Constant(1.0);  // integrator clamp, > 0
  Vector6d rate_damping = Vector6d::Zero();  // inner loop on body rates
  double derivative_alpha = 0.1;             // low-pass weight of the new sample
};

/// Gains tuned against the default vehicle parameters.
PidGains default_gains();

struct ControllerConfig {
  PidGains gains = default_gains();
  Vector6d axis_weights = (Vector6d() << 1.0, 1.0, 1.0, 2.0, 2.0, 2.0).finished();
  Vector6d max_demand = (Vector6d() << 100.0, 100.0, 100.0, 10.0, 10.0, 25.0).finished();
  Vector6d incremental_ramp = (Vector6d() << 50.0, 50.0, 50.0, 5.0, 5.0, 10.0).finished();
  double max_slew = 400.0;  // N/s per thruster
  double epsilon = 1e-6;
  Mode initial_mode = Mode::ManualConstant;
};

struct ControllerState {
  Vector6d integrator = Vector6d::Zero();
  Vector6d prev_error = Vector6d::Zero();
  Vector6d derivative = Vector6d::Zero();
  bool has_prev_error = false;
  Eigen::VectorXd last_thrust;
  Vector6d incremental_demand = Vector6d::Zero();
  sim::Pose hold;
  Mode mode = Mode::ManualConstant;
};

/// setpoint minus pose; angular components wrapped to (-pi, pi].
Vector6d compute_error(const sim::Pose& pose, const sim::Pose& setpoint);

struct PidOutput {
  Vector6d tau;
  ControllerState state;
};

/// tau = Kp e + Ki I + Kd D + ff, with I <- clamp(I + e dt, +-I_max) applied
/// before the output is formed and D a low-passed difference quotient.
PidOutput pid_step(const Vector6d& error, ControllerState state, const PidGains& gains,
                   const Vector6d& feed_forward, double dt);

/// Moves each component toward `command` by at most max_slew * dt.
Eigen::VectorXd rate_limit(const Eigen::VectorXd& command, const Eigen::VectorXd& previous, double max_slew,
                           double dt);

/// I <- I + Kaw (tau_realized - tau_unsat) dt, then re-clamped to +-I_max.
ControllerState anti_windup(ControllerState state, const Vector6d& tau_unsat, const Vector6d& tau_realized,
                            const PidGains& gains, double dt);

struct ControlInputs {
  sim::Pose pose;
  sim::Twist rates;
  Vector6d joystick = Vector6d::Zero();      // normalized, [-1, 1]
  Vector6d feed_forward = Vector6d::Zero();  // trim wrench, N and N m
  double dt = 0.02;
};

struct ControlOutput {
  Eigen::VectorXd thrust;
  ControllerState state;
  Vector6d tau_demand = Vector6d::Zero();
  Vector6d tau_realized = Vector6d::Zero();
  std::vector<int> saturated;
  bool solver_fault = false;
};

/// Station-keeping controller plus the two manual thrust modes. Owns the
/// allocation problem constants; per-tick state is passed by value.
class Controller {
 public:
  Controller(ControllerConfig config, sim::AllocationMatrix b, Eigen::VectorXd lower, Eigen::VectorXd upper);

  ControllerState initial_state(const sim::Pose& pose) const;

  /// Mode change; entering station-keep captures `pose` as the hold setpoint
  /// and resets the integrators.
  ControllerState set_mode(ControllerState state, Mode mode, const sim::Pose& pose) const;

  /// One controller tick: error, PID, feed-forward, allocation, slew
  /// limiting, back-calculation. On solver failure emits zero thrust.
  ControlOutput step(const ControlInputs& in, ControllerState state) const;

  /// Wrench demand for the current mode without allocating.
  Vector6d demand(const ControlInputs& in, ControllerState& state) const;

  alloc::AllocationResult allocate(const Vector6d& tau) const;

  const ControllerConfig& config() const { return config_; }
  const sim::AllocationMatrix& allocation_matrix() const { return b_; }
  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }

 private:
  ControllerConfig config_;
  sim::AllocationMatrix b_;
  Eigen::VectorXd lower_, upper_;
};

}  // namespace scorpion::control
