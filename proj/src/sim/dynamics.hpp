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

#include "sim/layout.hpp"
#include "sim/types.hpp"

namespace scorpion::sim {

inline constexpr double kMaxStep = 0.1;

/// Gravity and buoyancy wrench in the body frame for the given attitude.
Vector6d restoring_wrench(const Pose& pose, const VehicleParams& params);

/// Body wrench produced by a thrust vector: exactly B * f.
Vector6d thrust_wrench(const AllocationMatrix& b, const Eigen::VectorXd& thrust);

/// One semi-implicit Euler step: velocities are advanced with the forces at
/// the current state, then the pose is advanced with the new velocities.
/// `disturbance` is a body-frame wrench. Throws SimulationFault when the
/// result is not finite and ArgumentError for dt outside (0, 0.1].
VehicleState step_dynamics(const VehicleState& state, const Eigen::VectorXd& thrust,
                           const Vector6d& disturbance, const VehicleParams& params,
                           const AllocationMatrix& b, double dt);

/// 0.5 * nu^T M nu with the effective (rigid + added) mass.
double kinetic_energy(const Twist& twist, const VehicleParams& params);

}  // namespace scorpion::sim
