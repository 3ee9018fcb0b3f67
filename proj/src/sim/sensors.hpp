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
#include <random>

#include "sim/types.hpp"

namespace scorpion::sim {

/// Depth, pressure, housing and leak sensors plus a noisy attitude/position
/// estimate. Readings are a pure function of (state, time, seed, call order).
class SensorModel {
 public:
  SensorModel(Environment env, std::uint64_t seed);

  SensorReading read(const VehicleState& state, double time_s);

  const Environment& environment() const { return env_; }

 private:
  double gaussian(double sigma);

  Environment env_;
  std::mt19937_64 rng_;
  bool leak_latched_ = false;
};

/// Hydrostatic gauge pressure at depth z (Pa).
double gauge_pressure(double depth_m, const Environment& env);

}  // namespace scorpion::sim
