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

#include "vision/image.hpp"

namespace scorpion::vision {

/// H in [0, 360), S and V in [0, 1].
struct Hsv {
  double h = 0.0, s = 0.0, v = 0.0;
};

Hsv rgb_to_hsv(Rgb c);
Rgb hsv_to_rgb(const Hsv& c);

/// Closed HSV box. When hue_lo > hue_hi the hue interval wraps through 0.
struct HsvRange {
  double hue_lo = 0.0, hue_hi = 360.0;
  double sat_lo = 0.0, sat_hi = 1.0;
  double val_lo = 0.0, val_hi = 1.0;

  bool contains(const Hsv& c) const;
};

BinaryMask hsv_segment(const ImageFrame& frame, const HsvRange& range);

}  // namespace scorpion::vision
