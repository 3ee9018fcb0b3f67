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

#include "vision/markers.hpp"

#include "vision/morphology.hpp"

namespace scorpion::vision {

std::vector<MarkerDetection> detect_markers(const ImageFrame& frame, const std::vector<ColorBand>& bands,
                                            const MarkerOptions& options) {
  std::vector<MarkerDetection> out;
  for (const auto& band : bands) {
    const BinaryMask mask = morph_refine(hsv_segment(frame, band.range), options.open_radius, options.close_radius);
    const ContourSet set = extract_contours(mask);
    for (const auto& c : set.contours) {
      const TShapeResult t = validate_t_shape(c, set);
      if (!t.is_t) continue;
      MarkerDetection m;
      m.detection = {band.label, {c.min_x - 0.5, c.min_y - 0.5, c.max_x + 0.5, c.max_y + 0.5}, t.score};
      m.shape = t;
      m.centroid = {c.centroid_x, c.centroid_y};
      m.area = static_cast<double>(c.area);
      out.push_back(m);
    }
  }
  return out;
}

MarkerAccuracy score_markers(const std::vector<MarkerDetection>& detections,
                             const std::vector<GroundTruthObject>& truth, double iou_threshold) {
  MarkerAccuracy acc;
  std::vector<bool> used(truth.size(), false);
  for (const auto& g : truth) acc.ground_truth += g.marker ? 1 : 0;
  for (const auto& d : detections) {
    double best = -1.0;
    std::size_t best_j = truth.size();
    for (std::size_t j = 0; j < truth.size(); ++j) {
      if (used[j] || !truth[j].marker || truth[j].label != d.detection.label) continue;
      const double o = iou(d.detection.box, truth[j].box);
      if (o >= iou_threshold && o > best) {
        best = o;
        best_j = j;
      }
    }
    if (best_j < truth.size()) {
      used[best_j] = true;
      ++acc.true_positives;
    } else {
      ++acc.false_positives;
    }
  }
  return acc;
}

}  // namespace scorpion::vision
