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

#include "vision/measure.hpp"

#include <cmath>
#include <limits>

#include "common/error.hpp"
#include "vision/camera.hpp"

namespace scorpion::vision {

namespace {

bool in_frame(const ImageFrame& f, const Eigen::Vector2d& p) {
  return p.x() >= -0.5 && p.y() >= -0.5 && p.x() <= f.width() - 0.5 && p.y() <= f.height() - 0.5;
}

double gray(const ImageFrame& f, int x, int y) {
  x = std::clamp(x, 0, f.width() - 1);
  y = std::clamp(y, 0, f.height() - 1);
  const Rgb c = f.at(x, y);
  return 0.299 * c.r + 0.587 * c.g + 0.114 * c.b;
}

double gradient_magnitude(const ImageFrame& f, int x, int y) {
  const double gx = 0.5 * (gray(f, x + 1, y) - gray(f, x - 1, y));
  const double gy = 0.5 * (gray(f, x, y + 1) - gray(f, x, y - 1));
  return std::hypot(gx, gy);
}

double parabola_offset(double left, double mid, double right) {
  const double denom = left - 2.0 * mid + right;
  if (denom >= 0.0) return 0.0;
  return std::clamp(0.5 * (left - right) / denom, -0.5, 0.5);
}

}  // namespace

CalibrationScale calibrate(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2, double reference_length_m,
                           const Intrinsics& k) {
  if (!(reference_length_m > 0.0) || !std::isfinite(reference_length_m))
    throw ArgumentError("calibration: reference length must be positive");
  const double d = (undistort_pixel(k, p2) - undistort_pixel(k, p1)).norm();
  if (!(d > 0.0)) throw ArgumentError("calibration: reference points coincide");
  return {d / reference_length_m, reference_length_m, d};
}

Eigen::Vector2d refine_subpixel(const ImageFrame& f, const Eigen::Vector2d& p, int window) {
  if (window < 1) throw ArgumentError("refine_subpixel: window must be positive");
  const int half = window / 2;
  const int x0 = static_cast<int>(std::lround(p.x())), y0 = static_cast<int>(std::lround(p.y()));
  double best = -1.0, best_dist = std::numeric_limits<double>::infinity();
  int bx = x0, by = y0;
  for (int y = y0 - half; y <= y0 + half; ++y) {
    for (int x = x0 - half; x <= x0 + half; ++x) {
      if (x < 0 || y < 0 || x >= f.width() || y >= f.height()) continue;
      const double g = gradient_magnitude(f, x, y);
      const double dist = std::hypot(x - p.x(), y - p.y());
      if (g > best + 1e-9 || (std::abs(g - best) <= 1e-9 && dist < best_dist)) {
        best = g;
        best_dist = dist;
        bx = x;
        by = y;
      }
    }
  }
  if (best <= 0.0) return p;
  const double ox = parabola_offset(gradient_magnitude(f, bx - 1, by), best, gradient_magnitude(f, bx + 1, by));
  const double oy = parabola_offset(gradient_magnitude(f, bx, by - 1), best, gradient_magnitude(f, bx, by + 1));
  return {bx + ox, by + oy};
}

double measure_length(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2, const CalibrationScale& scale,
                      const Intrinsics& k, const MeasureOptions& opt) {
  if (!(scale.scale > 0.0)) throw ArgumentError("measure: calibration scale must be positive");
  Eigen::Vector2d a = p1, b = p2;
  if (opt.frame != nullptr) {
    if (!in_frame(*opt.frame, a) || !in_frame(*opt.frame, b)) throw ArgumentError("measure: point outside frame");
    if (opt.subpixel) {
      a = refine_subpixel(*opt.frame, a, opt.window);
      b = refine_subpixel(*opt.frame, b, opt.window);
    }
  }
  return (undistort_pixel(k, b) - undistort_pixel(k, a)).norm() / scale.scale;
}

}  // namespace scorpion::vision
