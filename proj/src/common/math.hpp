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

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cmath>
#include <numbers>

namespace scorpion {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Vector8d = Eigen::Matrix<double, 8, 1>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kStandardGravity = 9.80665;

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  if (!std::isfinite(a)) return a;
  double r = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

/// Body-to-world rotation for ZYX (yaw, pitch, roll) Euler angles.
inline Eigen::Matrix3d rotation_zyx(double roll, double pitch, double yaw) {
  return (Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(pitch, Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(roll, Eigen::Vector3d::UnitX()))
      .toRotationMatrix();
}

/// Maps body rates (p, q, r) to Euler angle rates for ZYX angles.
/// Singular at pitch = +-pi/2; the vehicle never operates there.
inline Eigen::Matrix3d euler_rate_transform(double roll, double pitch) {
  const double sr = std::sin(roll), cr = std::cos(roll);
  const double cp = std::cos(pitch), tp = std::tan(pitch);
  Eigen::Matrix3d t;
  t << 1.0, sr * tp, cr * tp,
       0.0, cr, -sr,
       0.0, sr / cp, cr / cp;
  return t;
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

}  // namespace scorpion
