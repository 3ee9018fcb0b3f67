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

#include "vision/render.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "common/error.hpp"
#include "vision/camera.hpp"
#include "vision/color.hpp"

namespace scorpion::vision {

double iou(const Box& a, const Box& b) {
  const Box inter{std::max(a.x_min, b.x_min), std::max(a.y_min, b.y_min), std::min(a.x_max, b.x_max),
                  std::min(a.y_max, b.y_max)};
  const double i = inter.valid() ? inter.area() : 0.0;
  const double u = a.area() + b.area() - i;
  return u > 0.0 ? i / u : 0.0;
}

namespace {

constexpr double kNearPlane = 0.05;

bool inside_shape(Shape shape, double w, double h, double a, double b) {
  switch (shape) {
    case Shape::Rectangle:
      return std::abs(a) <= 0.5 * w && std::abs(b) <= 0.5 * h;
    case Shape::Disc:
      return a * a + b * b <= 0.25 * w * w;
    case Shape::TMarker: {
      if (std::abs(a) > 0.5 * w || std::abs(b) > 0.5 * h) return false;
      const bool bar = b <= -0.5 * h + h / 3.0;
      const bool stem = std::abs(a) <= w / 6.0;
      return bar || stem;
    }
  }
  return false;
}

std::vector<Eigen::Vector2d> outline(Shape shape, double w, double h) {
  std::vector<Eigen::Vector2d> corners;
  const double hw = 0.5 * w, hh = 0.5 * h;
  switch (shape) {
    case Shape::Disc: {
      std::vector<Eigen::Vector2d> pts;
      for (int i = 0; i < 512; ++i) {
        const double t = 2.0 * kPi * i / 512.0;
        pts.emplace_back(hw * std::cos(t), hw * std::sin(t));
      }
      return pts;
    }
    case Shape::Rectangle:
      corners = {{-hw, -hh}, {hw, -hh}, {hw, hh}, {-hw, hh}};
      break;
    case Shape::TMarker: {
      const double bar_bottom = -hh + h / 3.0, s = w / 6.0;
      corners = {{-hw, -hh}, {hw, -hh}, {hw, bar_bottom}, {s, bar_bottom},
                 {s, hh},    {-s, hh},  {-s, bar_bottom}, {-hw, bar_bottom}};
      break;
    }
  }
  std::vector<Eigen::Vector2d> pts;
  for (std::size_t i = 0; i < corners.size(); ++i) {
    const auto& p = corners[i];
    const auto& q = corners[(i + 1) % corners.size()];
    for (int k = 0; k < 128; ++k) pts.push_back(p + (q - p) * (k / 128.0));
  }
  return pts;
}

struct Placed {
  const SceneObject* object;
  Eigen::Vector3d center;  // camera frame
  double cos_r, sin_r;
  int bx0, by0, bx1, by1;  // pixel search window
  std::size_t truth_index;
};

}  // namespace

Eigen::Matrix3d vehicle_camera_rotation(const sim::Pose& p) {
  Eigen::Matrix3d body_from_camera;
  body_from_camera << 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0;
  return rotation_zyx(p.roll, p.pitch, p.yaw) * body_from_camera;
}

RenderResult render_scene(const Scene& scene, const sim::Pose& camera_pose, const Intrinsics& k,
                          const RenderOptions& opt) {
  return render_scene(scene, rotation_zyx(camera_pose.roll, camera_pose.pitch, camera_pose.yaw),
                      camera_pose.position(), k, opt);
}

RenderResult render_scene(const Scene& scene, const Eigen::Matrix3d& r_cam, const Eigen::Vector3d& t_cam,
                          const Intrinsics& k, const RenderOptions& opt) {
  if (opt.width <= 0 || opt.height <= 0 || opt.supersample <= 0)
    throw ArgumentError("render: image size and supersampling must be positive");

  RenderResult out;
  out.frame = ImageFrame(opt.width, opt.height, scene.background);
  out.frame.intrinsics = k;
  std::vector<Placed> placed;

  for (const auto& obj : scene.objects) {
    const Eigen::Vector3d c = r_cam.transpose() * (obj.position - t_cam);
    if (c.z() <= kNearPlane) continue;
    const double cr = std::cos(obj.rotation), sr = std::sin(obj.rotation);
    auto to_pixel = [&](const Eigen::Vector2d& local) {
      const Eigen::Vector3d p{c.x() + cr * local.x() - sr * local.y(), c.y() + sr * local.x() + cr * local.y(), c.z()};
      return project_point(k, p);
    };
    Box box{1e300, 1e300, -1e300, -1e300};
    for (const auto& p : outline(obj.shape, obj.width, obj.height)) {
      const Eigen::Vector2d px = to_pixel(p);
      box.x_min = std::min(box.x_min, px.x());
      box.y_min = std::min(box.y_min, px.y());
      box.x_max = std::max(box.x_max, px.x());
      box.y_max = std::max(box.y_max, px.y());
    }
    const Box clipped{std::max(box.x_min, -0.5), std::max(box.y_min, -0.5), std::min(box.x_max, opt.width - 0.5),
                      std::min(box.y_max, opt.height - 0.5)};
    if (!clipped.valid()) continue;

    GroundTruthObject gt;
    gt.label = obj.label;
    gt.box = clipped;
    gt.length_m = obj.width;
    gt.world = obj.position;
    gt.marker = obj.shape == Shape::TMarker;
    const Eigen::Vector2d e1 = to_pixel({-0.5 * obj.width, 0.0}), e2 = to_pixel({0.5 * obj.width, 0.0});
    gt.endpoints << e1.x(), e1.y(), e2.x(), e2.y();
    out.truth.push_back(gt);

    placed.push_back({&obj, c, cr, sr, std::max(0, static_cast<int>(std::floor(clipped.x_min)) - 1),
                      std::max(0, static_cast<int>(std::floor(clipped.y_min)) - 1),
                      std::min(opt.width - 1, static_cast<int>(std::ceil(clipped.x_max)) + 1),
                      std::min(opt.height - 1, static_cast<int>(std::ceil(clipped.y_max)) + 1), out.truth.size() - 1});
  }
  // Nearest first, so the first hit along a ray is the visible surface.
  std::stable_sort(placed.begin(), placed.end(), [](const Placed& a, const Placed& b) { return a.center.z() < b.center.z(); });

  const int s = opt.supersample;
  const double inv = 1.0 / (s * s);
  std::vector<const Placed*> candidates;
  for (int y = 0; y < opt.height; ++y) {
    for (int x = 0; x < opt.width; ++x) {
      candidates.clear();
      for (const auto& p : placed)
        if (x >= p.bx0 && x <= p.bx1 && y >= p.by0 && y <= p.by1) candidates.push_back(&p);
      if (candidates.empty()) continue;
      double acc_r = 0, acc_g = 0, acc_b = 0;
      for (int sy = 0; sy < s; ++sy) {
        for (int sx = 0; sx < s; ++sx) {
          const Eigen::Vector2d pixel{x + (sx + 0.5) / s - 0.5, y + (sy + 0.5) / s - 0.5};
          const Eigen::Vector2d n = pixel_to_normalized(k, pixel);
          Rgb color = scene.background;
          for (const Placed* p : candidates) {
            const double dx = n.x() * p->center.z() - p->center.x();
            const double dy = n.y() * p->center.z() - p->center.y();
            const double a = p->cos_r * dx + p->sin_r * dy;
            const double b = -p->sin_r * dx + p->cos_r * dy;
            if (inside_shape(p->object->shape, p->object->width, p->object->height, a, b)) {
              color = p->object->color;
              out.truth[p->truth_index].coverage_px += inv;
              break;
            }
          }
          acc_r += color.r;
          acc_g += color.g;
          acc_b += color.b;
        }
      }
      auto q = [&](double v) { return static_cast<std::uint8_t>(std::lround(v * inv)); };
      out.frame.set(x, y, {q(acc_r), q(acc_g), q(acc_b)});
    }
  }

  if (opt.salt_density > 0.0 || opt.hue_jitter_deg > 0.0 || opt.additive_sigma > 0.0) {
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> hue_noise(0.0, std::max(opt.hue_jitter_deg, 1e-300));
    std::normal_distribution<double> add_noise(0.0, std::max(opt.additive_sigma, 1e-300));
    std::uniform_int_distribution<int> byte(0, 255);
    for (int y = 0; y < opt.height; ++y) {
      for (int x = 0; x < opt.width; ++x) {
        Rgb c = out.frame.at(x, y);
        if (opt.hue_jitter_deg > 0.0) {
          Hsv h = rgb_to_hsv(c);
          h.h += hue_noise(rng);
          c = hsv_to_rgb(h);
        }
        if (opt.additive_sigma > 0.0) {
          auto n = [&](std::uint8_t v) {
            return static_cast<std::uint8_t>(std::clamp<long>(std::lround(v + add_noise(rng)), 0, 255));
          };
          c = {n(c.r), n(c.g), n(c.b)};
        }
        if (opt.salt_density > 0.0 && unit(rng) < opt.salt_density)
          c = {static_cast<std::uint8_t>(byte(rng)), static_cast<std::uint8_t>(byte(rng)),
               static_cast<std::uint8_t>(byte(rng))};
        out.frame.set(x, y, c);
      }
    }
  }
  return out;
}

}  // namespace scorpion::vision
