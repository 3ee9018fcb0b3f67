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
#include <cstdint>
#include <vector>

#include "common/error.hpp"

namespace scorpion::pano {

struct Correspondence {
  Eigen::Vector2d src = Eigen::Vector2d::Zero();
  Eigen::Vector2d dst = Eigen::Vector2d::Zero();
  bool inlier = false;
};

/// 3x3 projective map scaled so that h33 = 1.
using Homography = Eigen::Matrix3d;

/// Degenerate or under-determined configuration.
class EstimationError : public Error {
 public:
  using Error::Error;
};

Eigen::Vector2d apply(const Homography& h, const Eigen::Vector2d& p);

/// Normalized DLT: both point sets are translated to zero mean and scaled
/// to RMS distance sqrt(2) before solving the algebraic least-squares
/// problem by SVD.
Homography estimate_homography_dlt(const std::vector<Correspondence>& corrs);

/// Larger of the forward |H src - dst| and backward |H^-1 dst - src|
/// distances, in pixels.
double symmetric_transfer_error(const Homography& h, const Homography& h_inv, const Correspondence& c);

struct RansacOptions {
  double inlier_threshold_px = 1.5;
  double confidence = 0.999;
  std::uint64_t seed = 0;
  int max_iterations = 10000;
};

struct RansacResult {
  Homography h = Homography::Identity();
  std::vector<bool> inliers;
  int inlier_count = 0;
  int iterations = 0;
};

/// Seeded 4-point RANSAC with adaptive iteration count, followed by a DLT
/// refit on the consensus set. The returned inlier set is recomputed with
/// the refitted model.
RansacResult ransac_homography(const std::vector<Correspondence>& corrs, const RansacOptions& options = {});

}  // namespace scorpion::pano
