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

#include "vision/color.hpp"

#include <algorithm>
#include <cmath>

namespace scorpion::vision {

Hsv rgb_to_hsv(Rgb c) {
  const double r = c.r / 255.0, g = c.g / 255.0, b = c.b / 255.0;
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;
  Hsv out;
  out.v = mx;
  out.s = mx > 0.0 ? delta / mx : 0.0;
  if (delta > 0.0) {
    double h;
    if (mx == r) h = std::fmod((g - b) / delta, 6.0);
    else if (mx == g) h = (b - r) / delta + 2.0;
    else h = (r - g) / delta + 4.0;
    h *= 60.0;
    if (h < 0.0) h += 360.0;
    if (h >= 360.0) h -= 360.0;
    out.h = h;
  }
  return out;
}

Rgb hsv_to_rgb(const Hsv& in) {
  double h = std::fmod(in.h, 360.0);
  if (h < 0.0) h += 360.0;
  const double s = std::clamp(in.s, 0.0, 1.0), v = std::clamp(in.v, 0.0, 1.0);
  const double c = v * s;
  const double x = c * (1.0 - std::abs(std::fmod(h / 60.0, 2.0) - 1.0));
  const double m = v - c;
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(h / 60.0)) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  auto to8 = [](double u) { return static_cast<std::uint8_t>(std::lround(std::clamp(u, 0.0, 1.0) * 255.0)); };
  return {to8(r + m), to8(g + m), to8(b + m)};
}

bool HsvRange::contains(const Hsv& c) const {
  const bool hue_ok = hue_lo <= hue_hi ? (c.h >= hue_lo && c.h <= hue_hi) : (c.h >= hue_lo || c.h <= hue_hi);
  return hue_ok && c.s >= sat_lo && c.s <= sat_hi && c.v >= val_lo && c.v <= val_hi;
}

BinaryMask hsv_segment(const ImageFrame& frame, const HsvRange& range) {
  BinaryMask mask(frame.width(), frame.height());
  for (int y = 0; y < frame.height(); ++y)
    for (int x = 0; x < frame.width(); ++x)
      if (range.contains(rgb_to_hsv(frame.at(x, y)))) mask.set(x, y, true);
  return mask;
}

}  // namespace scorpion::vision
