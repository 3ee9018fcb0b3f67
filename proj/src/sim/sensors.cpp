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

#include "sim/sensors.hpp"

#include <algorithm>

namespace scorpion::sim {

double gauge_pressure(double depth_m, const Environment& env) {
  return env.water_density * env.gravity * depth_m;
}

SensorModel::SensorModel(Environment env, std::uint64_t seed) : env_(env), rng_(seed) {}

double SensorModel::gaussian(double sigma) {
  if (!env_.noise || sigma <= 0.0) return 0.0;
  return std::normal_distribution<double>(0.0, sigma)(rng_);
}

SensorReading SensorModel::read(const VehicleState& state, double time_s) {
  SensorReading out;
  // Above the surface the transducer reads atmospheric pressure.
  out.depth_m = std::max(0.0, state.pose.z);
  out.water_pressure_pa = env_.surface_pressure_pa + gauge_pressure(out.depth_m, env_) +
                          gaussian(env_.pressure_noise_sigma);
  out.internal_pressure_pa = env_.housing_pressure_pa + gaussian(env_.pressure_noise_sigma);
  out.internal_temp_c = env_.housing_temp_c + gaussian(env_.temp_noise_sigma);

  if (env_.leak_time_s >= 0.0 && time_s >= env_.leak_time_s) leak_latched_ = true;
  out.leak = leak_latched_;

  const Pose& p = state.pose;
  out.imu_pose = Pose{p.x + gaussian(env_.imu_position_sigma), p.y + gaussian(env_.imu_position_sigma),
                      p.z + gaussian(env_.imu_position_sigma), p.roll + gaussian(env_.imu_angle_sigma),
                      p.pitch + gaussian(env_.imu_angle_sigma), p.yaw + gaussian(env_.imu_angle_sigma)}
                     .normalized();
  return out;
}

}  // namespace scorpion::sim
