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
#include <algorithm>
#include <string>

namespace scorpion::vision {

/// Axis-aligned pixel box in continuous coordinates.
struct Box {
  double x_min = 0.0, y_min = 0.0, x_max = 0.0, y_max = 0.0;

  double area() const { return std::max(0.0, x_max - x_min) * std::max(0.0, y_max - y_min); }
  bool valid() const { return x_min < x_max && y_min < y_max; }
  bool operator==(const Box&) const = default;
};

/// Intersection over union; 0 when either box is empty.
double iou(const Box& a, const Box& b);

struct Detection {
  std::string label;
  Box box;
  double confidence = 1.0;
  bool operator==(const Detection&) const = default;
};

struct GroundTruthObject {
  std::string label;
  Box box;
  double length_m = 0.0;                               // true physical length
  Eigen::Vector3d world = Eigen::Vector3d::Zero();     // object centre, m
  double coverage_px = 0.0;                            // visible area in pixels
  bool marker = false;                                 // a "T" marker
  Eigen::Vector4d endpoints = Eigen::Vector4d::Zero(); // length axis ends (x1 y1 x2 y2), pixels
};

}  // namespace scorpion::vision
