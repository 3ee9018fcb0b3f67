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

#include "pano/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "common/math.hpp"
#include "vision/camera.hpp"

namespace scorpion::pano {

namespace {

double wrap_lon(double a) {
  double r = std::fmod(a + kPi, 2.0 * kPi);
  if (r < 0.0) r += 2.0 * kPi;
  return r - kPi;
}

double wrap_deg(double d) {
  double r = std::fmod(d, 360.0);
  if (r < 0.0) r += 360.0;
  return r;
}

std::string degrees(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", d);
  return buf;
}

Eigen::Vector3d bilinear(const ImageFrame& f, double u, double v) {
  u = std::clamp(u, 0.0, f.width() - 1.0);
  v = std::clamp(v, 0.0, f.height() - 1.0);
  const int x0 = std::min(static_cast<int>(u), f.width() - 2 < 0 ? 0 : f.width() - 2);
  const int y0 = std::min(static_cast<int>(v), f.height() - 2 < 0 ? 0 : f.height() - 2);
  const int x1 = std::min(x0 + 1, f.width() - 1), y1 = std::min(y0 + 1, f.height() - 1);
  const double ax = u - x0, ay = v - y0;
  auto px = [&](int x, int y) {
    const auto c = f.at(x, y);
    return Eigen::Vector3d(c.r, c.g, c.b);
  };
  return (1 - ay) * ((1 - ax) * px(x0, y0) + ax * px(x1, y0)) + ay * ((1 - ax) * px(x0, y1) + ax * px(x1, y1));
}

struct FrameView {
  Eigen::Vector2d pixel;
  double weight;
};

// Pixel position and raw feather weight of direction `d` in the frame
// whose yaw has cosine `c` and sine `s`.
FrameView view(const Eigen::Vector3d& d, double c, double s, const Intrinsics& k, int fw, int fh) {
  const double xc = c * d.x() - s * d.z();
  const double zc = s * d.x() + c * d.z();
  if (zc <= 1e-9) return {Eigen::Vector2d::Zero(), 0.0};
  const Eigen::Vector2d p = vision::project_point(k, {xc, d.y(), zc});
  const double w = std::min({p.x() + 0.5, fw - 0.5 - p.x(), p.y() + 0.5, fh - 0.5 - p.y()});
  return {p, w > 0.0 ? w : 0.0};
}

}  // namespace

std::vector<double> blend_weights(const std::vector<double>& yaws, const Intrinsics& k, int fw, int fh,
                                  const LonLat& ll) {
  const Eigen::Vector3d d = direction(ll);
  std::vector<double> w;
  double sum = 0.0;
  for (double yaw : yaws) {
    w.push_back(view(d, std::cos(yaw), std::sin(yaw), k, fw, fh).weight);
    sum += w.back();
  }
  if (sum > 0.0)
    for (double& x : w) x /= sum;
  return w;
}

LonLat spherical_project(const Eigen::Vector2d& pixel, const Intrinsics& k, double yaw) {
  const Eigen::Vector2d n = vision::pixel_to_normalized(k, pixel);
  const double x = n.x(), y = n.y(), z = 1.0;
  const double c = std::cos(yaw), s = std::sin(yaw);
  const double xw = c * x + s * z, zw = -s * x + c * z;
  return {wrap_lon(std::atan2(xw, zw)), std::atan2(-y, std::hypot(xw, zw))};
}

Eigen::Vector3d direction(const LonLat& ll) {
  return {std::cos(ll.lat) * std::sin(ll.lon), -std::sin(ll.lat), std::cos(ll.lat) * std::cos(ll.lon)};
}

LonLat canvas_lonlat(int col, int row, int width, int height) {
  return {-kPi + (col + 0.5) * 2.0 * kPi / width, 0.5 * kPi - (row + 0.5) * kPi / height};
}

Eigen::Vector2d canvas_position(const LonLat& ll, int width, int height) {
  return {(ll.lon + kPi) * width / (2.0 * kPi) - 0.5, (0.5 * kPi - ll.lat) * height / kPi - 0.5};
}

std::pair<double, double> horizontal_fov(const Intrinsics& k, int w) {
  const Eigen::Vector2d l = vision::pixel_to_normalized(k, {-0.5, k.cy});
  const Eigen::Vector2d r = vision::pixel_to_normalized(k, {w - 0.5, k.cy});
  return {std::atan(l.x()), std::atan(r.x())};
}

std::vector<std::pair<double, double>> coverage_gaps(const std::vector<double>& yaws, const Intrinsics& k, int w) {
  const auto [left, right] = horizontal_fov(k, w);
  const double span = (right - left) * 180.0 / kPi;
  if (yaws.empty()) return {{0.0, 360.0}};
  if (span >= 360.0) return {};
  std::vector<std::pair<double, double>> iv;
  for (double y : yaws) iv.push_back({wrap_deg((y + left) * 180.0 / kPi), span});
  std::sort(iv.begin(), iv.end());
  // Walk once around the circle starting at the first interval.
  std::vector<std::pair<double, double>> gaps;
  const double origin = iv[0].first;
  double reach = origin + iv[0].second;
  for (const auto& [start, len] : iv) reach = std::max(reach, start + len - 360.0);
  for (std::size_t i = 1; i <= iv.size(); ++i) {
    const double start = i < iv.size() ? iv[i].first : origin + 360.0;
    if (start > reach + 1e-9) gaps.push_back({wrap_deg(reach), wrap_deg(reach) + (start - reach)});
    if (i < iv.size()) reach = std::max(reach, start + iv[i].second);
  }
  return gaps;
}

PanoramaCanvas composite_equirect(const std::vector<YawFrame>& frames, const Intrinsics& k, int height,
                                  const CompositeOptions& opt) {
  if (height <= 0) throw ArgumentError("composite: canvas height must be positive");
  if (frames.empty()) throw CompositingError("composite: no frames");
  const int fw = frames[0].image.width(), fh = frames[0].image.height();
  for (const auto& f : frames)
    if (f.image.width() != fw || f.image.height() != fh) throw CompositingError("composite: frame sizes differ");

  if (opt.require_full_coverage) {
    std::vector<double> yaws;
    for (const auto& f : frames) yaws.push_back(f.yaw);
    const auto gaps = coverage_gaps(yaws, k, fw);
    if (!gaps.empty()) {
      std::string msg = "composite: coverage gap";
      for (const auto& [a, b] : gaps) msg += " [" + degrees(a) + "°," + degrees(b) + "°)";
      throw CompositingError(msg);
    }
    const auto [left, right] = horizontal_fov(k, fw);
    const double hfov = right - left;
    std::vector<double> sorted = yaws;
    for (double& y : sorted) y = std::fmod(std::fmod(y, 2.0 * kPi) + 2.0 * kPi, 2.0 * kPi);
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size() && sorted.size() > 1; ++i) {
      const double a = sorted[i];
      const double b = i + 1 < sorted.size() ? sorted[i + 1] : sorted[0] + 2.0 * kPi;
      const double overlap = hfov - (b - a);
      if (overlap < opt.min_overlap_fraction * hfov - 1e-9)
        throw CompositingError("composite: overlap between frames at " + degrees(a * 180.0 / kPi) + "° and " +
                               degrees(std::fmod(b, 2.0 * kPi) * 180.0 / kPi) + "° is below " +
                               degrees(100.0 * opt.min_overlap_fraction) + "% of the field of view");
    }
  }

  PanoramaCanvas c;
  c.height = height;
  c.width = 2 * height;
  c.image = ImageFrame(c.width, c.height);
  c.weight.assign(static_cast<std::size_t>(c.width) * static_cast<std::size_t>(c.height), 0.0);
  std::vector<double> cos_yaw, sin_yaw;
  for (const auto& f : frames) {
    cos_yaw.push_back(std::cos(f.yaw));
    sin_yaw.push_back(std::sin(f.yaw));
  }
  for (int row = 0; row < c.height; ++row) {
    for (int col = 0; col < c.width; ++col) {
      const Eigen::Vector3d d = direction(canvas_lonlat(col, row, c.width, c.height));
      Eigen::Vector3d acc = Eigen::Vector3d::Zero();
      double wsum = 0.0;
      for (std::size_t i = 0; i < frames.size(); ++i) {
        const FrameView v = view(d, cos_yaw[i], sin_yaw[i], k, fw, fh);
        if (!(v.weight > 0.0)) continue;
        acc += v.weight * bilinear(frames[i].image, v.pixel.x(), v.pixel.y());
        wsum += v.weight;
      }
      c.weight[static_cast<std::size_t>(row) * static_cast<std::size_t>(c.width) + static_cast<std::size_t>(col)] = wsum;
      if (wsum > 0.0) {
        const Eigen::Vector3d v = acc / wsum;
        auto q = [](double x) { return static_cast<std::uint8_t>(std::clamp<long>(std::lround(x), 0, 255)); };
        c.image.set(col, row, {q(v.x()), q(v.y()), q(v.z())});
      }
    }
  }
  int top = -1, bottom = -2;
  for (int row = 0; row < c.height; ++row) {
    bool full = true;
    for (int col = 0; col < c.width && full; ++col) full = c.weight_at(col, row) > 0.0;
    if (full) {
      if (top < 0) top = row;
      bottom = row;
    }
  }
  c.band_top = top < 0 ? 0 : top;
  c.band_bottom = top < 0 ? -1 : bottom;
  return c;
}

double wrap_seam_error(const PanoramaCanvas& c) {
  double sum = 0.0;
  int n = 0;
  for (int row = 0; row < c.height; ++row) {
    if (!(c.weight_at(0, row) > 0.0 && c.weight_at(c.width - 1, row) > 0.0)) continue;
    const auto a = c.image.at(0, row), b = c.image.at(c.width - 1, row);
    sum += std::abs(a.r - b.r) + std::abs(a.g - b.g) + std::abs(a.b - b.b);
    n += 3;
  }
  return n > 0 ? sum / (255.0 * n) : 0.0;
}

std::vector<std::uint8_t> weight_map_gray(const PanoramaCanvas& c) {
  const double max_w = c.weight.empty() ? 0.0 : *std::max_element(c.weight.begin(), c.weight.end());
  std::vector<std::uint8_t> out(c.weight.size(), 0);
  if (max_w <= 0.0) return out;
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<std::uint8_t>(std::lround(255.0 * c.weight[i] / max_w));
  return out;
}

}  // namespace scorpion::pano
