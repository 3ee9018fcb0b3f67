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

#include "vision/camera.hpp"

#include <cmath>

namespace scorpion::vision {

Eigen::Vector2d distort_normalized(const Eigen::Vector2d& xu, double k1, double k2) {
  const double r2 = xu.squaredNorm();
  return xu * (1.0 + k1 * r2 + k2 * r2 * r2);
}

Eigen::Vector2d undistort_normalized(const Eigen::Vector2d& xd, double k1, double k2) {
  if (k1 == 0.0 && k2 == 0.0) return xd;
  const double rd = xd.norm();
  if (rd == 0.0) return xd;
  double ru = rd;
  for (int i = 0; i < 50; ++i) {
    const double r2 = ru * ru;
    const double f = ru * (1.0 + k1 * r2 + k2 * r2 * r2) - rd;
    const double df = 1.0 + 3.0 * k1 * r2 + 5.0 * k2 * r2 * r2;
    const double step = f / df;
    ru -= step;
    if (std::abs(step) < 1e-15) break;
  }
  return xd * (ru / rd);
}

Eigen::Vector2d project_point(const Intrinsics& k, const Eigen::Vector3d& p) {
  const Eigen::Vector2d xd = distort_normalized({p.x() / p.z(), p.y() / p.z()}, k.k1, k.k2);
  return {k.fx * xd.x() + k.cx, k.fy * xd.y() + k.cy};
}

Eigen::Vector2d pixel_to_normalized(const Intrinsics& k, const Eigen::Vector2d& pixel) {
  return undistort_normalized({(pixel.x() - k.cx) / k.fx, (pixel.y() - k.cy) / k.fy}, k.k1, k.k2);
}

Eigen::Vector2d undistort_pixel(const Intrinsics& k, const Eigen::Vector2d& pixel) {
  const Eigen::Vector2d xu = pixel_to_normalized(k, pixel);
  return {k.fx * xu.x() + k.cx, k.fy * xu.y() + k.cy};
}

Eigen::Vector2d distort_pixel(const Intrinsics& k, const Eigen::Vector2d& pixel) {
  const Eigen::Vector2d xd = distort_normalized({(pixel.x() - k.cx) / k.fx, (pixel.y() - k.cy) / k.fy}, k.k1, k.k2);
  return {k.fx * xd.x() + k.cx, k.fy * xd.y() + k.cy};
}

}  // namespace scorpion::vision
