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
#include <vector>

#include "sim/types.hpp"
#include "vision/image.hpp"
#include "vision/types.hpp"

namespace scorpion::vision {

enum class Shape { Rectangle, Disc, TMarker };

/// Flat-shaded planar primitive facing the camera. `width` runs along the
/// object's local x axis (its length axis), `height` along local y; for a
/// disc `width` is the diameter. A T marker's bar and stem are one third of
/// the box in thickness.
struct SceneObject {
  std::string label;
  Shape shape = Shape::Rectangle;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();  // world, m
  double width = 0.1, height = 0.1;                    // m
  double rotation = 0.0;                               // in-plane, rad
  Rgb color;
};

struct Scene {
  Rgb background{20, 60, 70};
  std::vector<SceneObject> objects;
};

struct RenderOptions {
  int width = 640, height = 480;
  int supersample = 3;          // samples per pixel along each axis
  double salt_density = 0.0;    // fraction of pixels replaced by random colours
  double hue_jitter_deg = 0.0;  // per-pixel gaussian hue noise
  double additive_sigma = 0.0;  // per-channel gaussian noise, 8-bit units
  std::uint64_t seed = 0;
};

struct RenderResult {
  ImageFrame frame;
  std::vector<GroundTruthObject> truth;
};

/// Renders the scene through a distorting pinhole camera placed at
/// `camera_pose` (camera axes: z forward, x right, y down; identity pose
/// aligns them with the world axes). Objects behind the camera or entirely
/// outside the frame are culled.
RenderResult render_scene(const Scene& scene, const sim::Pose& camera_pose, const Intrinsics& intrinsics,
                          const RenderOptions& options);

/// Same, with the camera given as a camera-to-world rotation and position.
RenderResult render_scene(const Scene& scene, const Eigen::Matrix3d& world_from_camera,
                          const Eigen::Vector3d& camera_position, const Intrinsics& intrinsics,
                          const RenderOptions& options);

/// Camera-to-world rotation of a forward-looking camera on a vehicle with
/// the given attitude (camera z along body x, camera x along body y).
Eigen::Matrix3d vehicle_camera_rotation(const sim::Pose& vehicle_pose);

}  // namespace scorpion::vision
