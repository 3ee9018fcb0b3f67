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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mission/report.hpp"
#include "pano/manifest.hpp"

namespace scorpion::mission {

/// Synthetic yaw sweep over the procedural environment sphere.
struct SweepRecipe {
  std::string name = "sweep";
  int frames = 12;
  std::uint64_t seed = 1;
  int width = 640, height = 480;
  double hfov_deg = 60.0;
  double yaw_offset_deg = 0.0;
  double yaw_noise_deg = 0.0;         // error added to the manifest yaws
  std::vector<int> omit;              // frame indices left out of the sweep
  int correspondences = 0;            // per adjacent pair; 0 writes none
  double outlier_fraction = 0.3;
  int canvas_height = 256;
};

/// True when the recipe text declares `kind: sweep`.
bool is_sweep_recipe(const std::filesystem::path& path);
SweepRecipe parse_sweep_recipe(const std::string& text, const std::string& source = "<recipe>");
SweepRecipe load_sweep_recipe(const std::filesystem::path& path);

/// Writes frames/NNN.png, manifest.yaml, pairs/NNN.txt and corpus.yaml.
pano::Manifest generate_sweep(const SweepRecipe& recipe, const std::filesystem::path& dir);

struct PhotosphereOptions {
  std::optional<double> max_seam_error;  // defaults to 2/255
  std::uint64_t seed = 0;                // RANSAC
};

/// Refines yaws from the manifest's correspondences when present, then
/// composites panorama.png and weights.png into `out_dir`. A coverage gap
/// yields a failing report that names the gap instead of a panorama.
ExperimentReport run_photosphere(const std::filesystem::path& frames_dir, const std::filesystem::path& manifest_path,
                                 const std::filesystem::path& out_dir, const PhotosphereOptions& options = {});

}  // namespace scorpion::mission
