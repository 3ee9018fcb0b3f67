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

/// Disc structuring element {(dx, dy) : dx^2 + dy^2 <= r^2}. Pixels outside
/// the image are ignored, which keeps erode/dilate an adjoint pair (so
/// opening and closing are idempotent).
BinaryMask erode(const BinaryMask& mask, int radius);
BinaryMask dilate(const BinaryMask& mask, int radius);
BinaryMask open(const BinaryMask& mask, int radius);
BinaryMask close(const BinaryMask& mask, int radius);

/// Opening followed by closing.
BinaryMask morph_refine(const BinaryMask& mask, int open_radius, int close_radius);

}  // namespace scorpion::vision
