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

struct CalibrationScale {
  double scale = 0.0;             // pixels per metre
  double reference_length_m = 0.0;
  double pixel_distance = 0.0;    // undistorted
};

/// Undistorts both points and divides their pixel distance by the
/// reference length.
CalibrationScale calibrate(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2, double reference_length_m,
                           const Intrinsics& intrinsics);

struct MeasureOptions {
  const ImageFrame* frame = nullptr;  // enables bounds checking and refinement
  bool subpixel = true;
  int window = 5;
};

/// Undistorted pixel distance divided by the calibration scale. With a frame
/// and `subpixel` set, each point is first snapped to the local
/// gradient-magnitude peak.
double measure_length(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2, const CalibrationScale& scale,
                      const Intrinsics& intrinsics, const MeasureOptions& options = {});

/// Position of the largest gray-level gradient magnitude inside a
/// `window` x `window` neighbourhood of `p`, refined per axis by fitting a
/// parabola through the peak and its two neighbours. Ties go to the pixel
/// closest to `p`.
Eigen::Vector2d refine_subpixel(const ImageFrame& frame, const Eigen::Vector2d& p, int window = 5);

}  // namespace scorpion::vision
