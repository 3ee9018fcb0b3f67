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

#include <array>
#include <vector>

#include "common/math.hpp"

namespace scorpion::sim {

/// World-frame position (z positive down) and ZYX Euler attitude.
struct Pose {
  double x = 0.0, y = 0.0, z = 0.0;
  double roll = 0.0, pitch = 0.0, yaw = 0.0;

  Vector6d vector() const { return (Vector6d() << x, y, z, roll, pitch, yaw).finished(); }
  Eigen::Vector3d position() const { return {x, y, z}; }
  static Pose from_vector(const Vector6d& v) { return {v[0], v[1], v[2], v[3], v[4], v[5]}; }

  /// Copy with all angles wrapped into (-pi, pi].
  Pose normalized() const {
    return {x, y, z, wrap_angle(roll), wrap_angle(pitch), wrap_angle(yaw)};
  }
  bool operator==(const Pose&) const = default;
};

/// Body-frame linear (u, v, w) and angular (p, q, r) velocity.
struct Twist {
  double u = 0.0, v = 0.0, w = 0.0;
  double p = 0.0, q = 0.0, r = 0.0;

  Vector6d vector() const { return (Vector6d() << u, v, w, p, q, r).finished(); }
  static Twist from_vector(const Vector6d& v) { return {v[0], v[1], v[2], v[3], v[4], v[5]}; }
  bool operator==(const Twist&) const = default;
};

struct VehicleState {
  Pose pose;
  Twist twist;
  bool operator==(const VehicleState&) const = default;
};

struct Thruster {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();   // body frame, m
  Eigen::Vector3d direction = Eigen::Vector3d::UnitX(); // unit vector
  double f_min = 0.0;                                   // N, <= 0
  double f_max = 0.0;                                   // N, >= 0
};

struct ThrusterLayout {
  std::vector<Thruster> thrusters;

  std::size_t size() const { return thrusters.size(); }
  Eigen::VectorXd lower_limits() const;
  Eigen::VectorXd upper_limits() const;
};

/// Rigid-body and hydrodynamic coefficients. Everything except the mass is a
/// plausible guess for a 0.4 m x 0.3 m frame vehicle.
struct VehicleParams {
  double mass = 17.6;                                   // kg
  Eigen::Vector3d inertia{0.45, 0.65, 0.75};            // kg m^2, diagonal
  Vector6d added_mass = (Vector6d() << 6.0, 12.0, 14.0, 0.15, 0.2, 0.25).finished();
  Vector6d quadratic_drag = (Vector6d() << 35.0, 45.0, 50.0, 1.5, 1.5, 1.5).finished();
  double buoyancy_offset = 0.0;                         // N, buoyancy minus weight
  Eigen::Vector3d cob_offset{0.0, 0.0, -0.02};          // m, body frame (above CG)
  double max_linear_speed = 2.0;                        // m/s
  double max_angular_speed = 2.0;                       // rad/s
  double gravity = kStandardGravity;

  /// Diagonal of the rigid-body plus added-mass inertia matrix.
  Vector6d effective_mass() const;
};

struct ManipulatorState {
  double yaw = 0.0;   // rad, continuous
  double jaw = 0.0;   // aperture in [0, 1]
  bool operator==(const ManipulatorState&) const = default;
};

struct ManipulatorCommand {
  double yaw_rate = 0.0;  // rad/s
  double jaw_rate = 0.0;  // aperture/s
};

struct ManipulatorLimits {
  double max_yaw_rate = 1.0;
  double max_jaw_rate = 0.5;
};

struct SensorReading {
  double depth_m = 0.0;
  double water_pressure_pa = 0.0;     // absolute
  double internal_pressure_pa = 0.0;
  double internal_temp_c = 0.0;
  bool leak = false;
  Pose imu_pose;
};

struct Environment {
  double surface_pressure_pa = 101325.0;
  double water_density = 1000.0;
  double gravity = kStandardGravity;
  double pressure_noise_sigma = 50.0;
  double housing_pressure_pa = 101325.0;
  double housing_temp_c = 24.0;
  double temp_noise_sigma = 0.05;
  double imu_position_sigma = 0.0;
  double imu_angle_sigma = 0.001;
  double leak_time_s = -1.0;          // < 0: never leaks
  bool noise = true;
};

}  // namespace scorpion::sim
