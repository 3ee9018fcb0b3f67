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

#include "sim/layout.hpp"

#include <Eigen/SVD>
#include <array>
#include <sstream>

namespace scorpion::sim {

namespace {

constexpr std::array<const char*, 6> kAxisNames = {"surge", "sway", "heave", "roll", "pitch", "yaw"};

}  // namespace

Eigen::VectorXd ThrusterLayout::lower_limits() const {
  Eigen::VectorXd v(thrusters.size());
  for (std::size_t i = 0; i < thrusters.size(); ++i) v[static_cast<Eigen::Index>(i)] = thrusters[i].f_min;
  return v;
}

Eigen::VectorXd ThrusterLayout::upper_limits() const {
  Eigen::VectorXd v(thrusters.size());
  for (std::size_t i = 0; i < thrusters.size(); ++i) v[static_cast<Eigen::Index>(i)] = thrusters[i].f_max;
  return v;
}

ThrusterLayout default_layout() {
  const double c = std::sqrt(0.5);
  const double hx = 0.2, hy = 0.15;
  auto make = [](Eigen::Vector3d r, Eigen::Vector3d d) {
    return Thruster{r, d.normalized(), kT200ReverseLimit, kT200ForwardLimit};
  };
  ThrusterLayout layout;
  layout.thrusters = {
      make({hx, hy, 0.0}, {c, -c, 0.0}),     // front right
      make({hx, -hy, 0.0}, {c, c, 0.0}),     // front left
      make({-hx, hy, 0.0}, {c, c, 0.0}),     // rear right
      make({-hx, -hy, 0.0}, {c, -c, 0.0}),   // rear left
      make({hx, hy, -0.05}, {0.0, 0.0, 1.0}),
      make({hx, -hy, -0.05}, {0.0, 0.0, 1.0}),
      make({-hx, hy, -0.05}, {0.0, 0.0, 1.0}),
      make({-hx, -hy, -0.05}, {0.0, 0.0, 1.0}),
  };
  return layout;
}

void validate_layout(const ThrusterLayout& layout) {
  if (layout.thrusters.empty()) throw ConfigError("thruster layout is empty");
  for (std::size_t i = 0; i < layout.thrusters.size(); ++i) {
    const auto& t = layout.thrusters[i];
    if (!t.position.allFinite() || !t.direction.allFinite())
      throw ConfigError("thruster " + std::to_string(i) + ": non-finite geometry");
    if (std::abs(t.direction.norm() - 1.0) > 1e-9)
      throw ConfigError("thruster " + std::to_string(i) + ": direction is not a unit vector");
    if (!(t.f_min <= 0.0 && 0.0 <= t.f_max))
      throw ConfigError("thruster " + std::to_string(i) + ": limits must satisfy f_min <= 0 <= f_max");
  }
}

AllocationMatrix allocation_columns(const ThrusterLayout& layout) {
  AllocationMatrix b(6, static_cast<Eigen::Index>(layout.size()));
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const auto& t = layout.thrusters[i];
    const auto col = static_cast<Eigen::Index>(i);
    b.block<3, 1>(0, col) = t.direction;
    b.block<3, 1>(3, col) = t.position.cross(t.direction);
  }
  return b;
}

AllocationMatrix build_allocation_matrix(const ThrusterLayout& layout) {
  validate_layout(layout);
  AllocationMatrix b = allocation_columns(layout);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  const double tol = 1e-9 * std::max(1.0, s.size() > 0 ? s[0] : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > tol) ++rank;
  if (rank == 6) return b;

  // Left null space of B: wrench directions no thrust combination reaches.
  const Eigen::MatrixXd null_left = svd.matrixU().rightCols(6 - rank);
  std::ostringstream msg;
  msg << "thruster layout has rank " << rank << " < 6; deficient axes:";
  for (int axis = 0; axis < 6; ++axis)
    if (null_left.row(axis).norm() > 1e-6) msg << ' ' << kAxisNames[static_cast<std::size_t>(axis)];
  throw ConfigError(msg.str());
}

}  // namespace scorpion::sim
