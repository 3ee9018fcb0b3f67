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

#include <string>
#include <vector>

#include "vision/color.hpp"
#include "vision/tshape.hpp"
#include "vision/types.hpp"

namespace scorpion::vision {

struct ColorBand {
  std::string label;
  HsvRange range;
};

struct MarkerOptions {
  int open_radius = 1;
  int close_radius = 1;
};

struct MarkerDetection {
  Detection detection;  // confidence = template score
  TShapeResult shape;
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  double area = 0.0;
};

/// Segments each colour band, cleans the mask, and reports every component
/// that validates as a T marker.
std::vector<MarkerDetection> detect_markers(const ImageFrame& frame, const std::vector<ColorBand>& bands,
                                            const MarkerOptions& options = {});

struct MarkerAccuracy {
  int ground_truth = 0;
  int true_positives = 0;
  int false_positives = 0;
  /// TP / (GT + FP): one miss or one spurious marker each count as one error.
  double accuracy() const {
    const int denom = ground_truth + false_positives;
    return denom > 0 ? static_cast<double>(true_positives) / denom : 1.0;
  }
};

/// Matches detections against marker ground truth (same label, IoU >= threshold).
MarkerAccuracy score_markers(const std::vector<MarkerDetection>& detections,
                             const std::vector<GroundTruthObject>& truth, double iou_threshold = 0.5);

}  // namespace scorpion::vision
