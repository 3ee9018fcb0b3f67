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

#include "vision/image.hpp"

namespace scorpion::vision {

/// Applies radial distortion x_d = x_u (1 + k1 r^2 + k2 r^4) to normalized
/// image coordinates.
Eigen::Vector2d distort_normalized(const Eigen::Vector2d& xu, double k1, double k2);

/// Inverts distort_normalized by Newton iteration on the radius.
Eigen::Vector2d undistort_normalized(const Eigen::Vector2d& xd, double k1, double k2);

/// Pixel of a camera-frame point (z forward, x right, y down), distorted.
Eigen::Vector2d project_point(const Intrinsics& k, const Eigen::Vector3d& p_cam);

/// Distorted pixel -> undistorted normalized coordinates.
Eigen::Vector2d pixel_to_normalized(const Intrinsics& k, const Eigen::Vector2d& pixel);

/// Distorted pixel -> pixel of an ideal pinhole camera with the same
/// focal lengths and principal point.
Eigen::Vector2d undistort_pixel(const Intrinsics& k, const Eigen::Vector2d& pixel);
Eigen::Vector2d distort_pixel(const Intrinsics& k, const Eigen::Vector2d& pixel);

}  // namespace scorpion::vision
