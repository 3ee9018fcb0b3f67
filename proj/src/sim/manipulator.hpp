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

#include "sim/types.hpp"

namespace scorpion::sim {

/// Integrates the wrist yaw (no wrap, continuous rotation) and the jaw
/// aperture (clamped to [0, 1]). Commanded rates are clamped to `limits`.
ManipulatorState step_manipulator(const ManipulatorState& state, const ManipulatorCommand& cmd,
                                  double dt, const ManipulatorLimits& limits = {});

}  // namespace scorpion::sim
