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

#include "vision/tshape.hpp"

namespace scorpion::vision {

namespace {

using Grid = std::array<bool, 9>;

// 1 1 1
// 0 1 0
// 0 1 0
constexpr Grid kTemplate = {true, true, true, false, true, false, false, true, false};

Grid rotate_cw(const Grid& g) {
  Grid out{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out[static_cast<std::size_t>(c * 3 + (2 - r))] = g[static_cast<std::size_t>(r * 3 + c)];
  return out;
}

bool matches_t(const Grid& g) {
  // top row full, centre column full below it, the four lower corners empty
  return g[0] && g[1] && g[2] && g[4] && g[7] && !g[3] && !g[5] && !g[6] && !g[8];
}

}  // namespace

TShapeResult validate_t_shape(const Contour& contour, const ContourSet& set) {
  TShapeResult res;
  if (contour.area < kMinTArea) {
    res.reject_reason = "too-small";
    return res;
  }
  const int w = contour.box_width(), h = contour.box_height();
  for (int r = 0; r < 3; ++r) {
    const int y0 = contour.min_y + (r * h) / 3, y1 = contour.min_y + ((r + 1) * h) / 3;
    for (int c = 0; c < 3; ++c) {
      const int x0 = contour.min_x + (c * w) / 3, x1 = contour.min_x + ((c + 1) * w) / 3;
      long total = 0, set_px = 0;
      for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) {
          ++total;
          if (set.label_at(x, y) == contour.label) ++set_px;
        }
      res.grid[static_cast<std::size_t>(r * 3 + c)] = total > 0 && 2 * set_px >= total;
    }
  }

  Grid g = res.grid;
  for (int rot = 0; rot < 4; ++rot) {
    int agree = 0;
    for (std::size_t i = 0; i < 9; ++i) agree += g[i] == kTemplate[i] ? 1 : 0;
    const double score = agree / 9.0;
    const bool t = matches_t(g);
    if ((t && !res.is_t) || (t == res.is_t && score > res.score)) {
      res.is_t = t;
      res.score = score;
      res.rotation = rot;
    }
    g = rotate_cw(g);
  }
  return res;
}

}  // namespace scorpion::vision
