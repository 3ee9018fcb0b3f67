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

#include "mission/scenes.hpp"

namespace scorpion::mission {

std::vector<vision::ColorBand> standard_bands() {
  return {{"red", {340.0, 20.0, 0.45, 1.0, 0.3, 1.0}},
          {"blue", {200.0, 250.0, 0.45, 1.0, 0.3, 1.0}},
          {"yellow", {40.0, 70.0, 0.45, 1.0, 0.3, 1.0}}};
}

std::vector<std::string> scene_names() { return {"empty", "anode"}; }

std::optional<vision::Scene> named_scene(const std::string& name) {
  using vision::Shape;
  if (name == "empty") return vision::Scene{};
  if (name == "anode") {
    vision::Scene s;
    s.objects = {
        {"reference", Shape::Rectangle, {3.0, -0.45, 2.35}, 0.5, 0.04, 0.0, {245, 245, 245}},
        {"anode", Shape::Rectangle, {3.0, 0.0, 2.0}, 0.3, 0.12, 0.0, {150, 150, 155}},
        {"red", Shape::TMarker, {3.0, -0.55, 1.7}, 0.25, 0.25, 0.0, kMarkerRed},
        {"blue", Shape::TMarker, {3.0, 0.55, 1.7}, 0.25, 0.25, 0.3, kMarkerBlue},
        {"yellow", Shape::TMarker, {3.0, 0.45, 2.35}, 0.25, 0.25, -0.2, kMarkerYellow},
    };
    return s;
  }
  return std::nullopt;
}

}  // namespace scorpion::mission
