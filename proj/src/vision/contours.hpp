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

#include <vector>

#include "vision/image.hpp"

namespace scorpion::vision {

struct PixelPoint {
  int x = 0, y = 0;
  bool operator==(const PixelPoint&) const = default;
};

/// One 8-connected component of a mask.
struct Contour {
  int label = 0;                       // index into ContourSet::labels (1-based)
  std::size_t area = 0;                // pixel count
  int min_x = 0, min_y = 0, max_x = 0, max_y = 0;  // inclusive pixel bounds
  double centroid_x = 0.0, centroid_y = 0.0;
  std::vector<PixelPoint> border;      // outer border, clockwise from the top-left pixel

  int box_width() const { return max_x - min_x + 1; }
  int box_height() const { return max_y - min_y + 1; }
};

struct ContourSet {
  std::vector<Contour> contours;       // sorted by area, largest first
  int width = 0, height = 0;
  std::vector<int> labels;             // 0 = background

  int label_at(int x, int y) const { return labels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)]; }
};

/// Labels 8-connected components and traces each outer border with Moore
/// neighbour following.
ContourSet extract_contours(const BinaryMask& mask);

}  // namespace scorpion::vision
