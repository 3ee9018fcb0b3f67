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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vision/types.hpp"

namespace scorpion::vision {

struct ClassMetrics {
  double ap = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  int true_positives = 0;
  int false_positives = 0;
  int ground_truth = 0;
  bool flagged = false;  // detections present for a class absent from ground truth
};

struct EvaluationResult {
  std::map<std::string, ClassMetrics> per_class;
  double map = 0.0;        // mean AP over classes present in ground truth
  double precision = 0.0;  // over all classes
  double recall = 0.0;
};

struct EvaluationImage {
  std::vector<Detection> detections;
  std::vector<GroundTruthObject> truth;
};

/// Greedy confidence-ordered matching (ties broken by box coordinates, then
/// input order) with all-point interpolated AP per class.
EvaluationResult evaluate_detections(const std::vector<EvaluationImage>& images, double iou_threshold);
EvaluationResult evaluate_detections(const std::vector<Detection>& detections,
                                     const std::vector<GroundTruthObject>& truth, double iou_threshold);

struct DetectorNoise {
  double box_sigma_px = 0.0;
  double miss_rate = 0.0;
  double false_positive_rate = 0.0;  // expected false positives per frame
  double confidence_mean = 1.0;      // true positives
  double confidence_sigma = 0.0;
  double fp_confidence_lo = 0.05, fp_confidence_hi = 0.6;
};

/// Stand-in object detector: perturbs ground-truth boxes and injects
/// spurious boxes according to `noise`.
std::vector<Detection> synthetic_detector(int frame_width, int frame_height, const std::vector<GroundTruthObject>& truth,
                                          const DetectorNoise& noise, std::uint64_t seed);

}  // namespace scorpion::vision
