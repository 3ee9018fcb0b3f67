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

#include "vision/evaluate.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

#include "common/error.hpp"

namespace scorpion::vision {

namespace {

struct Ranked {
  std::size_t image;
  std::size_t index;
  const Detection* det;
};

bool ranks_before(const Ranked& a, const Ranked& b) {
  if (a.det->confidence != b.det->confidence) return a.det->confidence > b.det->confidence;
  const auto ka = std::tie(a.det->box.x_min, a.det->box.y_min, a.det->box.x_max, a.det->box.y_max);
  const auto kb = std::tie(b.det->box.x_min, b.det->box.y_min, b.det->box.x_max, b.det->box.y_max);
  if (ka != kb) return ka < kb;
  return std::tie(a.image, a.index) < std::tie(b.image, b.index);
}

double all_point_ap(const std::vector<bool>& hits, int n_gt) {
  if (n_gt == 0 || hits.empty()) return 0.0;
  const std::size_t n = hits.size();
  std::vector<double> precision(n), recall(n);
  int tp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    tp += hits[i] ? 1 : 0;
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
    recall[i] = static_cast<double>(tp) / n_gt;
  }
  for (std::size_t i = n - 1; i > 0; --i) precision[i - 1] = std::max(precision[i - 1], precision[i]);
  double ap = 0.0, prev_recall = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ap += (recall[i] - prev_recall) * precision[i];
    prev_recall = recall[i];
  }
  return ap;
}

}  // namespace

EvaluationResult evaluate_detections(const std::vector<EvaluationImage>& images, double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0))
    throw ArgumentError("evaluate: IoU threshold must lie in (0, 1)");

  std::set<std::string> labels;
  std::map<std::string, std::vector<Ranked>> by_class;
  std::map<std::string, int> gt_count;
  for (std::size_t im = 0; im < images.size(); ++im) {
    for (std::size_t i = 0; i < images[im].detections.size(); ++i) {
      const auto& d = images[im].detections[i];
      if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) throw ArgumentError("evaluate: confidence outside [0, 1]");
      labels.insert(d.label);
      by_class[d.label].push_back({im, i, &d});
    }
    for (const auto& g : images[im].truth) {
      labels.insert(g.label);
      ++gt_count[g.label];
    }
  }

  EvaluationResult out;
  int total_tp = 0, total_det = 0, total_gt = 0, classes_in_gt = 0;
  double ap_sum = 0.0;
  for (const auto& label : labels) {
    auto& ranked = by_class[label];
    std::sort(ranked.begin(), ranked.end(), ranks_before);
    std::vector<std::vector<bool>> used(images.size());
    for (std::size_t im = 0; im < images.size(); ++im) used[im].assign(images[im].truth.size(), false);

    std::vector<bool> hits;
    for (const auto& r : ranked) {
      const auto& truth = images[r.image].truth;
      double best = -1.0;
      std::size_t best_j = truth.size();
      for (std::size_t j = 0; j < truth.size(); ++j) {
        if (used[r.image][j] || truth[j].label != label) continue;
        const double o = iou(r.det->box, truth[j].box);
        if (o >= iou_threshold && o > best) {
          best = o;
          best_j = j;
        }
      }
      if (best_j < truth.size()) used[r.image][best_j] = true;
      hits.push_back(best_j < truth.size());
    }

    ClassMetrics m;
    m.ground_truth = gt_count[label];
    m.true_positives = static_cast<int>(std::count(hits.begin(), hits.end(), true));
    m.false_positives = static_cast<int>(hits.size()) - m.true_positives;
    m.precision = hits.empty() ? 0.0 : static_cast<double>(m.true_positives) / static_cast<double>(hits.size());
    m.recall = m.ground_truth == 0 ? 0.0 : static_cast<double>(m.true_positives) / m.ground_truth;
    m.ap = all_point_ap(hits, m.ground_truth);
    m.flagged = m.ground_truth == 0;
    if (m.ground_truth > 0) {
      ap_sum += m.ap;
      ++classes_in_gt;
    }
    total_tp += m.true_positives;
    total_det += static_cast<int>(hits.size());
    total_gt += m.ground_truth;
    out.per_class[label] = m;
  }
  out.map = classes_in_gt > 0 ? ap_sum / classes_in_gt : 0.0;
  out.precision = total_det > 0 ? static_cast<double>(total_tp) / total_det : 0.0;
  out.recall = total_gt > 0 ? static_cast<double>(total_tp) / total_gt : 0.0;
  return out;
}

EvaluationResult evaluate_detections(const std::vector<Detection>& detections,
                                     const std::vector<GroundTruthObject>& truth, double iou_threshold) {
  return evaluate_detections(std::vector<EvaluationImage>{{detections, truth}}, iou_threshold);
}

std::vector<Detection> synthetic_detector(int width, int height, const std::vector<GroundTruthObject>& truth,
                                          const DetectorNoise& noise, std::uint64_t seed) {
  if (width <= 0 || height <= 0) throw ArgumentError("detector: frame size must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double x_hi = width - 0.5, y_hi = height - 0.5;

  std::vector<Detection> out;
  for (const auto& g : truth) {
    if (unit(rng) < noise.miss_rate) continue;
    Box b = g.box;
    if (noise.box_sigma_px > 0.0) {
      b.x_min += noise.box_sigma_px * normal(rng);
      b.y_min += noise.box_sigma_px * normal(rng);
      b.x_max += noise.box_sigma_px * normal(rng);
      b.y_max += noise.box_sigma_px * normal(rng);
      b = {std::clamp(b.x_min, -0.5, x_hi), std::clamp(b.y_min, -0.5, y_hi), std::clamp(b.x_max, -0.5, x_hi),
           std::clamp(b.y_max, -0.5, y_hi)};
      if (b.x_max - b.x_min < 1.0 || b.y_max - b.y_min < 1.0) b = g.box;
    }
    double conf = noise.confidence_mean;
    if (noise.confidence_sigma > 0.0) conf += noise.confidence_sigma * normal(rng);
    out.push_back({g.label, b, std::clamp(conf, 0.0, 1.0)});
  }
  if (noise.false_positive_rate > 0.0 && !truth.empty()) {
    std::poisson_distribution<int> count(noise.false_positive_rate);
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      const auto& label = truth[static_cast<std::size_t>(unit(rng) * truth.size()) % truth.size()].label;
      const double w = 10.0 + unit(rng) * 0.25 * width, h = 10.0 + unit(rng) * 0.25 * height;
      const double x = -0.5 + unit(rng) * std::max(0.0, width - w), y = -0.5 + unit(rng) * std::max(0.0, height - h);
      const double conf = noise.fp_confidence_lo + unit(rng) * (noise.fp_confidence_hi - noise.fp_confidence_lo);
      out.push_back({label, {x, y, std::min(x + w, x_hi), std::min(y + h, y_hi)}, std::clamp(conf, 0.0, 1.0)});
    }
  }
  return out;
}

}  // namespace scorpion::vision
