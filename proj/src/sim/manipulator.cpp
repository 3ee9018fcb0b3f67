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

#include "sim/manipulator.hpp"

#include <algorithm>

namespace scorpion::sim {

ManipulatorState step_manipulator(const ManipulatorState& state, const ManipulatorCommand& cmd,
                                  double dt, const ManipulatorLimits& limits) {
  const double yaw_rate = std::clamp(cmd.yaw_rate, -limits.max_yaw_rate, limits.max_yaw_rate);
  const double jaw_rate = std::clamp(cmd.jaw_rate, -limits.max_jaw_rate, limits.max_jaw_rate);
  return {state.yaw + yaw_rate * dt, std::clamp(state.jaw + jaw_rate * dt, 0.0, 1.0)};
}

}  // namespace scorpion::sim
