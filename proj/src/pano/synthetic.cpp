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

#include "pano/synthetic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "common/math.hpp"
#include "vision/camera.hpp"

namespace scorpion::pano {

namespace {

Eigen::Matrix3d camera_matrix(const Intrinsics& k) {
  Eigen::Matrix3d m;
  m << k.fx, 0.0, k.cx, 0.0, k.fy, k.cy, 0.0, 0.0, 1.0;
  return m;
}

// Rotation taking camera-frame rays of the frame at yaw a to those at yaw b.
Eigen::Matrix3d yaw_rotation(double theta) {
  Eigen::Matrix3d r;
  r << std::cos(theta), 0.0, std::sin(theta), 0.0, 1.0, 0.0, -std::sin(theta), 0.0, std::cos(theta);
  return r;
}

}  // namespace

vision::Rgb procedural_texture(const Eigen::Vector3d& d) {
  const double r = 128.0 + 60.0 * std::sin(1.7 * d.x() + 0.9 * d.y()) + 30.0 * std::cos(2.3 * d.z());
  const double g = 128.0 + 55.0 * std::cos(1.3 * d.y() - 1.1 * d.z()) + 25.0 * std::sin(2.1 * d.x());
  const double b = 128.0 + 50.0 * std::sin(1.9 * d.z() + 0.7 * d.x()) + 30.0 * std::cos(1.6 * d.y());
  auto q = [](double v) { return static_cast<std::uint8_t>(std::clamp<long>(std::lround(v), 0, 255)); };
  return {q(r), q(g), q(b)};
}

ImageFrame render_yaw_frame(const Intrinsics& k, int width, int height, double yaw) {
  ImageFrame f(width, height);
  f.intrinsics = k;
  const double c = std::cos(yaw), s = std::sin(yaw);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Eigen::Vector2d n = vision::pixel_to_normalized(k, {static_cast<double>(x), static_cast<double>(y)});
      const Eigen::Vector3d ray = Eigen::Vector3d(c * n.x() + s, n.y(), -s * n.x() + c).normalized();
      f.set(x, y, procedural_texture(ray));
    }
  }
  return f;
}

Homography random_homography(std::mt19937_64& rng, int width, int height) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::Matrix3d p = Eigen::Matrix3d::Identity();
  p(0, 0) += 0.2 * u(rng);
  p(0, 1) += 0.2 * u(rng);
  p(1, 0) += 0.2 * u(rng);
  p(1, 1) += 0.2 * u(rng);
  p(0, 2) += 0.3 * u(rng);
  p(1, 2) += 0.3 * u(rng);
  p(2, 0) += 0.1 * u(rng);
  p(2, 1) += 0.1 * u(rng);
  p /= std::cbrt(p.determinant());
  const double s = 0.5 * std::max(width, height);
  Eigen::Matrix3d t;
  t << s, 0.0, 0.5 * width, 0.0, s, 0.5 * height, 0.0, 0.0, 1.0;
  Homography h = t * p * t.inverse();
  return h / h(2, 2);
}

SyntheticCorrespondences make_correspondences(const Homography& h, int count, double outlier_fraction, int width,
                                              int height, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, width), uy(0.0, height);
  SyntheticCorrespondences out;
  out.truth = h;
  const int outliers = static_cast<int>(std::lround(outlier_fraction * count));
  for (int i = 0; i < count; ++i) {
    Correspondence c;
    c.src = {ux(rng), uy(rng)};
    c.dst = apply(h, c.src);
    c.inlier = true;
    out.corrs.push_back(c);
  }
  std::vector<int> order(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) order[static_cast<std::size_t>(i)] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (int j = 0; j < outliers; ++j) {
    auto& c = out.corrs[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])];
    Eigen::Vector2d d;
    do {
      d = {ux(rng), uy(rng)};
    } while ((d - c.dst).norm() < 10.0);
    c.dst = d;
    c.inlier = false;
  }
  return out;
}

Homography rotation_homography(const Intrinsics& k, double yaw_from, double yaw_to) {
  const Eigen::Matrix3d km = camera_matrix(k);
  Homography h = km * yaw_rotation(yaw_from - yaw_to) * km.inverse();
  return h / h(2, 2);
}

double yaw_from_homography(const Intrinsics& k, const Homography& h) {
  const Eigen::Matrix3d km = camera_matrix(k);
  Eigen::Matrix3d m = km.inverse() * h * km;
  m /= std::cbrt(m.determinant());
  return -std::atan2(m(0, 2) - m(2, 0), m(0, 0) + m(2, 2));
}

}  // namespace scorpion::pano
