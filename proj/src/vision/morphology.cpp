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

#include "vision/morphology.hpp"

#include <utility>
#include <vector>

#include "common/error.hpp"

namespace scorpion::vision {

namespace {

std::vector<std::pair<int, int>> disc(int r) {
  std::vector<std::pair<int, int>> offsets;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx)
      if (dx * dx + dy * dy <= r * r) offsets.emplace_back(dx, dy);
  return offsets;
}

template <bool Erode>
BinaryMask apply(const BinaryMask& in, int radius) {
  if (radius < 0) throw ArgumentError("structuring element radius must be >= 0");
  if (radius == 0) return in;
  const auto se = disc(radius);
  BinaryMask out(in.width(), in.height());
  for (int y = 0; y < in.height(); ++y) {
    for (int x = 0; x < in.width(); ++x) {
      bool v = Erode;
      for (auto [dx, dy] : se) {
        const int xx = x + dx, yy = y + dy;
        if (xx < 0 || yy < 0 || xx >= in.width() || yy >= in.height()) continue;
        if (Erode && !in.get(xx, yy)) { v = false; break; }
        if (!Erode && in.get(xx, yy)) { v = true; break; }
      }
      out.set(x, y, v);
    }
  }
  return out;
}

}  // namespace

BinaryMask erode(const BinaryMask& mask, int radius) { return apply<true>(mask, radius); }
BinaryMask dilate(const BinaryMask& mask, int radius) { return apply<false>(mask, radius); }
BinaryMask open(const BinaryMask& mask, int radius) { return dilate(erode(mask, radius), radius); }
BinaryMask close(const BinaryMask& mask, int radius) { return erode(dilate(mask, radius), radius); }

BinaryMask morph_refine(const BinaryMask& mask, int open_radius, int close_radius) {
  return close(open(mask, open_radius), close_radius);
}

}  // namespace scorpion::vision
