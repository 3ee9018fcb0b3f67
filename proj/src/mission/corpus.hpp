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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mission/report.hpp"
#include "vision/evaluate.hpp"
#include "vision/markers.hpp"
#include "vision/render.hpp"

namespace scorpion::mission {

/// Deterministic description of a synthetic vision corpus.
struct CorpusRecipe {
  enum class Kind { Length, Markers };
  std::string name = "corpus";
  Kind kind = Kind::Markers;
  int frames = 20;
  std::uint64_t seed = 1;
  int width = 640, height = 480;
  vision::Intrinsics intrinsics{500.0, 500.0, 319.5, 239.5, 0.0, 0.0};
  double depth_min = 2.0, depth_max = 6.0;
  int markers_per_frame = 4;
  int distractors_per_frame = 2;
  double marker_size_min = 0.25, marker_size_max = 0.45;
  vision::RenderOptions noise;  // only the noise fields are used
  vision::DetectorNoise detector;
  std::optional<double> min_marker_accuracy;
  std::optional<double> max_length_error;  // fraction
};

CorpusRecipe parse_recipe(const std::string& text, const std::string& source = "<recipe>");
CorpusRecipe load_recipe(const std::filesystem::path& path);

struct CorpusFrame {
  std::string file;  // relative to the corpus directory
  std::vector<vision::GroundTruthObject> truth;
};

struct Corpus {
  CorpusRecipe recipe;
  std::vector<CorpusFrame> frames;
  std::vector<std::string> warnings;
};

/// Renders the corpus into `dir`: frames/NNN.png, truth.jsonl (one record
/// per frame) and corpus.yaml (the recipe).
Corpus generate_corpus(const CorpusRecipe& recipe, const std::filesystem::path& dir);

/// Reads a corpus directory. Frames on disk without a truth record are
/// reported in `warnings` and left out.
Corpus read_corpus(const std::filesystem::path& dir);

std::string truth_record(const CorpusFrame& frame);
CorpusFrame parse_truth_record(const std::string& line, const std::string& where);

/// HSV bands from YAML: a list of {label, hue: [lo, hi], sat: [lo, hi], val: [lo, hi]}.
std::vector<vision::ColorBand> load_bands(const std::filesystem::path& path);

struct LengthSample {
  std::string frame, label;
  double truth_m = 0.0, measured_m = 0.0;
  double error() const { return std::abs(measured_m - truth_m) / truth_m; }
};

/// Calibrates on the frame's "reference" object and measures every other
/// object with endpoints, refining all endpoints to sub-pixel edges.
std::vector<LengthSample> measure_frame(const vision::ImageFrame& image, const CorpusFrame& frame,
                                        const vision::Intrinsics& intrinsics);

/// Runs marker detection, length measurement and detection evaluation over
/// the corpus, writes frames.csv, lengths.csv, detections.jsonl and the
/// report into `out_dir`.
ExperimentReport evaluate_corpus(const std::filesystem::path& corpus_dir, const std::vector<vision::ColorBand>& bands,
                                 const std::filesystem::path& out_dir);

/// Detection-evaluation fixture with exact expected values written as
/// fractions ("11/15").
struct MapFixture {
  std::string name;
  double iou_threshold = 0.5;
  std::vector<vision::EvaluationImage> images;
  double map = 0.0, precision = 0.0, recall = 0.0;
  std::map<std::string, double> ap;
  std::vector<std::string> flagged;
};

MapFixture load_map_fixture(const std::filesystem::path& path);

/// Largest absolute difference between the evaluator and the fixture over
/// mAP, precision, recall and every listed AP; infinity when the flagged
/// classes differ.
double map_fixture_deviation(const MapFixture& fixture);

}  // namespace scorpion::mission
