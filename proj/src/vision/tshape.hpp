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

#include <array>
#include <string>

#include "vision/contours.hpp"

namespace scorpion::vision {

struct TShapeResult {
  bool is_t = false;
  double score = 0.0;        // fraction of the 9 cells matching the template
  int rotation = 0;          // quarter turns applied to the grid for the best match
  std::string reject_reason; // "too-small" or empty
  std::array<bool, 9> grid{};  // occupancy, row-major, before rotation
};

inline constexpr std::size_t kMinTArea = 25;

/// Normalizes the component's bounding box to a 3x3 occupancy grid (a cell
/// is occupied when at least half its pixels belong to the component) and
/// compares against the upright T template under all four quarter turns.
TShapeResult validate_t_shape(const Contour& contour, const ContourSet& set);

}  // namespace scorpion::vision
