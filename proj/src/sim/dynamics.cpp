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

#include "sim/dynamics.hpp"

#include <algorithm>
#include <string>

namespace scorpion::sim {

Vector6d VehicleParams::effective_mass() const {
  Vector6d m;
  m << mass, mass, mass, inertia[0], inertia[1], inertia[2];
  return m + added_mass;
}

Vector6d restoring_wrench(const Pose& pose, const VehicleParams& params) {
  const Eigen::Matrix3d r = rotation_zyx(pose.roll, pose.pitch, pose.yaw);
  const Eigen::Vector3d down_body = r.transpose() * Eigen::Vector3d::UnitZ();
  const double weight = params.mass * params.gravity;
  const double buoyancy = weight + params.buoyancy_offset;

  const Eigen::Vector3d buoyancy_force = -buoyancy * down_body;
  Vector6d w;
  w.head<3>() = weight * down_body + buoyancy_force;
  w.tail<3>() = params.cob_offset.cross(buoyancy_force);
  return w;
}

Vector6d thrust_wrench(const AllocationMatrix& b, const Eigen::VectorXd& thrust) {
  return b * thrust;
}

VehicleState step_dynamics(const VehicleState& state, const Eigen::VectorXd& thrust,
                           const Vector6d& disturbance, const VehicleParams& params,
                           const AllocationMatrix& b, double dt) {
  if (!(dt > 0.0 && dt <= kMaxStep)) throw ArgumentError("dt must lie in (0, 0.1], got " + std::to_string(dt));
  if (thrust.size() != b.cols()) throw ArgumentError("thrust vector size does not match allocation matrix");

  const Vector6d nu = state.twist.vector();
  const Vector6d drag = -(params.quadratic_drag.array() * nu.array().abs() * nu.array()).matrix();
  const Vector6d tau = thrust_wrench(b, thrust) + disturbance + restoring_wrench(state.pose, params) + drag;

  Vector6d nu_next = nu + dt * (tau.array() / params.effective_mass().array()).matrix();
  for (int i = 0; i < 3; ++i) {
    nu_next[i] = std::clamp(nu_next[i], -params.max_linear_speed, params.max_linear_speed);
    nu_next[i + 3] = std::clamp(nu_next[i + 3], -params.max_angular_speed, params.max_angular_speed);
  }

  const Pose& p = state.pose;
  const Eigen::Vector3d pos_rate = rotation_zyx(p.roll, p.pitch, p.yaw) * nu_next.head<3>();
  const Eigen::Vector3d ang_rate = euler_rate_transform(p.roll, p.pitch) * nu_next.tail<3>();

  VehicleState next;
  next.pose = Pose{p.x + dt * pos_rate[0], p.y + dt * pos_rate[1], p.z + dt * pos_rate[2],
                   p.roll + dt * ang_rate[0], p.pitch + dt * ang_rate[1], p.yaw + dt * ang_rate[2]}
                  .normalized();
  next.twist = Twist::from_vector(nu_next);

  if (!next.pose.vector().allFinite() || !nu_next.allFinite())
    throw SimulationFault("non-finite vehicle state after dynamics step");
  return next;
}

double kinetic_energy(const Twist& twist, const VehicleParams& params) {
  const Vector6d nu = twist.vector();
  return 0.5 * (params.effective_mass().array() * nu.array().square()).sum();
}

}  // namespace scorpion::sim
