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

#include "common/error.hpp"
#include "sim/types.hpp"

namespace scorpion::sim {

/// 6 x n thrust-to-wrench map. Dynamic so allocation can also run on
/// reduced toy problems.
using AllocationMatrix = Eigen::MatrixXd;

/// Per-thruster forward/reverse limits of a T200-class thruster (7.1 kgf and
/// 5.5 kgf) converted with standard gravity.
inline constexpr double kT200ForwardLimit = 7.1 * kStandardGravity;
inline constexpr double kT200ReverseLimit = -5.5 * kStandardGravity;

/// Four horizontal vectored thrusters at +-45 deg yaw on the corners of a
/// 0.4 m x 0.3 m footprint and four vertical thrusters on the same corners.
ThrusterLayout default_layout();

/// Checks unit directions and limit signs; throws ConfigError.
void validate_layout(const ThrusterLayout& layout);

/// Column i is [d_i ; r_i x d_i]. Throws ConfigError naming the axes the
/// layout cannot actuate when rank(B) < 6.
AllocationMatrix build_allocation_matrix(const ThrusterLayout& layout);

/// Same construction without the rank requirement.
AllocationMatrix allocation_columns(const ThrusterLayout& layout);

}  // namespace scorpion::sim
