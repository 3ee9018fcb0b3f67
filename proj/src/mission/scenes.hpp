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

#include <optional>
#include <string>
#include <vector>

#include "vision/markers.hpp"
#include "vision/render.hpp"

namespace scorpion::mission {

/// Built-in worksites selectable from mission scripts. "empty" has no
/// objects; "anode" is a mock anode-replacement site 3 m ahead of the
/// origin with a reference bar, the anode and red, blue and yellow T markers.
std::optional<vision::Scene> named_scene(const std::string& name);
std::vector<std::string> scene_names();

/// Marker colours used by the synthetic scenes and their HSV bands.
inline constexpr vision::Rgb kMarkerRed{220, 35, 35};
inline constexpr vision::Rgb kMarkerBlue{40, 70, 230};
inline constexpr vision::Rgb kMarkerYellow{235, 215, 40};
std::vector<vision::ColorBand> standard_bands();

}  // namespace scorpion::mission
