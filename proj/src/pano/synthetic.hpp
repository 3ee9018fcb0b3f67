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
#include <vector>

#include "pano/homography.hpp"
#include "pano/spherical.hpp"

namespace scorpion::pano {

/// Smooth colour field over the unit sphere, continuous everywhere.
vision::Rgb procedural_texture(const Eigen::Vector3d& dir);

/// Pinhole view of the procedural sphere at the given yaw, sampled at pixel
/// centres.
ImageFrame render_yaw_frame(const Intrinsics& k, int width, int height, double yaw);

/// Random well-conditioned homography: a perturbation of the identity in
/// normalized coordinates, conjugated to a `width` x `height` pixel frame.
Homography random_homography(std::mt19937_64& rng, int width, int height);

struct SyntheticCorrespondences {
  std::vector<Correspondence> corrs;  // `inlier` marks the ground-truth inliers
  Homography truth;
};

/// `count` source points uniform in the frame mapped through `h`, of which
/// round(outlier_fraction * count) have their destination replaced by a
/// uniform random point at least 10 px from the true image.
SyntheticCorrespondences make_correspondences(const Homography& h, int count, double outlier_fraction,
                                              int width, int height, std::uint64_t seed);

/// Homography between two yaw frames of a distortion-free camera:
/// pixels of the frame at `yaw_from` to pixels of the frame at `yaw_to`.
Homography rotation_homography(const Intrinsics& k, double yaw_from, double yaw_to);

/// Yaw increment (yaw_to - yaw_from) encoded by a rotation homography.
double yaw_from_homography(const Intrinsics& k, const Homography& h);

}  // namespace scorpion::pano
