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

#include <filesystem>
#include <string>
#include <vector>

#include "pano/homography.hpp"
#include "pano/spherical.hpp"

namespace scorpion::pano {

struct FrameEntry {
  std::string file;  // relative to the manifest directory
  double yaw = 0.0;  // rad
};

/// Correspondences between two frames, stored one "sx sy dx dy" per line.
struct PairEntry {
  std::size_t from = 0, to = 0;
  std::string file;
};

struct Manifest {
  Intrinsics intrinsics;
  std::vector<FrameEntry> frames;
  std::vector<PairEntry> pairs;
  int canvas_height = 512;
  double min_overlap_fraction = 0.2;
};

/// YAML manifest. Throws ConfigError with the offending key on malformed
/// input.
Manifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const Manifest& manifest);

std::vector<Correspondence> read_correspondences(const std::filesystem::path& path);
void write_correspondences(const std::filesystem::path& path, const std::vector<Correspondence>& corrs);

struct YawRefinement {
  std::vector<double> yaws;
  std::vector<RansacResult> fits;  // one per pair, in manifest order
};

/// Replaces manifest yaws with the chain of yaw increments recovered by
/// RANSAC from each pair's correspondences (pixels are undistorted first).
/// The first frame of each chain keeps its manifest yaw.
YawRefinement refine_yaws(const Manifest& manifest, const std::vector<std::vector<Correspondence>>& pair_corrs,
                          const RansacOptions& options);

}  // namespace scorpion::pano
