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
#include <string>
#include <vector>

#include "common/error.hpp"
#include "vision/image.hpp"

namespace scorpion::pano {

using vision::ImageFrame;
using vision::Intrinsics;

/// Longitude in [-pi, pi) (positive to the right of yaw 0), latitude in
/// [-pi/2, pi/2] (positive up).
struct LonLat {
  double lon = 0.0, lat = 0.0;
};

/// Unit ray of a (distorted) pixel in the camera frame (z forward, x right,
/// y down) rotated about the vertical by `camera_yaw`, as longitude/latitude.
LonLat spherical_project(const Eigen::Vector2d& pixel, const Intrinsics& intrinsics, double camera_yaw);

/// Unit direction (x right, y down, z forward at yaw 0) of a longitude/latitude.
Eigen::Vector3d direction(const LonLat& ll);

/// Equirectangular canvas geometry: column c covers longitude
/// -pi + (c + 0.5) * 2pi/W at its centre, row r latitude pi/2 - (r + 0.5) * pi/H.
LonLat canvas_lonlat(int col, int row, int width, int height);
Eigen::Vector2d canvas_position(const LonLat& ll, int width, int height);

class CompositingError : public Error {
 public:
  using Error::Error;
};

struct YawFrame {
  ImageFrame image;
  double yaw = 0.0;  // rad
};

struct CompositeOptions {
  bool require_full_coverage = true;
  double min_overlap_fraction = 0.2;  // of the horizontal field of view
};

struct PanoramaCanvas {
  int width = 0, height = 0;
  ImageFrame image;
  std::vector<double> weight;  // accumulated feather weight per pixel
  int band_top = 0, band_bottom = -1;  // rows with weight > 0 in every column

  double weight_at(int col, int row) const {
    return weight[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) + static_cast<std::size_t>(col)];
  }
};

/// Horizontal field of view at the equator as [left, right] angles relative
/// to the optical axis, rad.
std::pair<double, double> horizontal_fov(const Intrinsics& k, int image_width);

/// Uncovered longitude intervals at the equator in degrees, each [start, end)
/// with start in [0, 360).
std::vector<std::pair<double, double>> coverage_gaps(const std::vector<double>& yaws, const Intrinsics& k,
                                                     int image_width);

/// Normalized feather weights of each frame (by yaw) for a canvas
/// direction; all zero when no frame covers it.
std::vector<double> blend_weights(const std::vector<double>& yaws, const Intrinsics& k, int frame_width,
                                  int frame_height, const LonLat& ll);

/// Inverse-mapped bilinear sampling with linear feathering by distance to
/// the frame edge.
PanoramaCanvas composite_equirect(const std::vector<YawFrame>& frames, const Intrinsics& intrinsics, int height,
                                  const CompositeOptions& options = {});

/// Mean absolute difference between the first and last canvas columns over
/// the covered band, in [0, 1] units.
double wrap_seam_error(const PanoramaCanvas& canvas);

/// Weight map scaled to 8 bits.
std::vector<std::uint8_t> weight_map_gray(const PanoramaCanvas& canvas);

}  // namespace scorpion::pano
