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

#include "vision/contours.hpp"

#include <algorithm>
#include <array>

namespace scorpion::vision {

namespace {

// Clockwise in image coordinates (y down), starting east.
constexpr std::array<PixelPoint, 8> kRing = {{{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

int ring_index(int dx, int dy) {
  for (int i = 0; i < 8; ++i)
    if (kRing[static_cast<std::size_t>(i)].x == dx && kRing[static_cast<std::size_t>(i)].y == dy) return i;
  return 0;
}

std::vector<PixelPoint> trace_border(const ContourSet& set, int label, PixelPoint start) {
  auto inside = [&](PixelPoint p) {
    return p.x >= 0 && p.y >= 0 && p.x < set.width && p.y < set.height && set.label_at(p.x, p.y) == label;
  };
  // Returns the next border pixel clockwise from the backtrack direction.
  auto next_from = [&](PixelPoint c, int back, PixelPoint& out, int& out_back) {
    for (int k = 1; k <= 8; ++k) {
      const int d = (back + k) % 8;
      const PixelPoint n{c.x + kRing[static_cast<std::size_t>(d)].x, c.y + kRing[static_cast<std::size_t>(d)].y};
      if (inside(n)) {
        const int pd = (d + 7) % 8;
        const PixelPoint prev{c.x + kRing[static_cast<std::size_t>(pd)].x, c.y + kRing[static_cast<std::size_t>(pd)].y};
        out = n;
        out_back = ring_index(prev.x - n.x, prev.y - n.y);
        return true;
      }
    }
    return false;
  };

  std::vector<PixelPoint> border{start};
  PixelPoint c = start, second{};
  int back = 4;  // the west neighbour of the raster-first pixel is background
  if (!next_from(c, back, second, back)) return border;
  c = second;
  const std::size_t cap = static_cast<std::size_t>(set.width) * static_cast<std::size_t>(set.height) * 4 + 8;
  while (border.size() < cap) {
    PixelPoint n;
    int nb = back;
    next_from(c, back, n, nb);
    if (c == start && n == second) break;
    border.push_back(c);
    c = n;
    back = nb;
  }
  return border;
}

}  // namespace

ContourSet extract_contours(const BinaryMask& mask) {
  ContourSet set;
  set.width = mask.width();
  set.height = mask.height();
  set.labels.assign(static_cast<std::size_t>(set.width) * static_cast<std::size_t>(set.height), 0);

  std::vector<PixelPoint> stack;
  std::vector<PixelPoint> starts;
  int next_label = 0;
  for (int y = 0; y < set.height; ++y) {
    for (int x = 0; x < set.width; ++x) {
      if (!mask.get(x, y) || set.label_at(x, y) != 0) continue;
      const int label = ++next_label;
      Contour c;
      c.label = label;
      c.min_x = c.max_x = x;
      c.min_y = c.max_y = y;
      double sx = 0.0, sy = 0.0;
      stack.assign(1, {x, y});
      set.labels[static_cast<std::size_t>(y) * static_cast<std::size_t>(set.width) + static_cast<std::size_t>(x)] = label;
      while (!stack.empty()) {
        const PixelPoint p = stack.back();
        stack.pop_back();
        ++c.area;
        sx += p.x;
        sy += p.y;
        c.min_x = std::min(c.min_x, p.x);
        c.max_x = std::max(c.max_x, p.x);
        c.min_y = std::min(c.min_y, p.y);
        c.max_y = std::max(c.max_y, p.y);
        for (const auto& d : kRing) {
          const int nx = p.x + d.x, ny = p.y + d.y;
          if (nx < 0 || ny < 0 || nx >= set.width || ny >= set.height) continue;
          auto& l = set.labels[static_cast<std::size_t>(ny) * static_cast<std::size_t>(set.width) + static_cast<std::size_t>(nx)];
          if (l != 0 || !mask.get(nx, ny)) continue;
          l = label;
          stack.push_back({nx, ny});
        }
      }
      c.centroid_x = sx / static_cast<double>(c.area);
      c.centroid_y = sy / static_cast<double>(c.area);
      set.contours.push_back(std::move(c));
      starts.push_back({x, y});
    }
  }
  for (std::size_t i = 0; i < set.contours.size(); ++i)
    set.contours[i].border = trace_border(set, set.contours[i].label, starts[i]);

  std::stable_sort(set.contours.begin(), set.contours.end(),
                   [](const Contour& a, const Contour& b) { return a.area > b.area; });
  return set;
}

}  // namespace scorpion::vision
