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

#include "mission/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <random>
#include <spdlog/spdlog.h>
#include <sstream>
#include <yaml-cpp/yaml.h>

#include "common/error.hpp"
#include "common/math.hpp"
#include "json.hpp"
#include "mission/scenes.hpp"
#include "vision/image.hpp"
#include "vision/measure.hpp"

namespace scorpion::mission {

namespace {

[[noreturn]] void fail(const std::string& source, const YAML::Node& node, const std::string& what) {
  const auto mark = node.Mark();
  throw ConfigError(source + (mark.line >= 0 ? ":" + std::to_string(mark.line + 1) : "") + ": " + what);
}

template <class T>
void read(const std::string& src, const YAML::Node& map, const char* key, T& out) {
  if (const auto n = map[key]) {
    try {
      out = n.as<T>();
    } catch (const YAML::BadConversion&) {
      fail(src, n, std::string("bad value for '") + key + "'");
    }
  }
}

void check_keys(const std::string& src, const YAML::Node& node, const std::string& name,
                std::initializer_list<const char*> keys) {
  if (!node.IsMap()) fail(src, node, "'" + name + "' must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; }))
      fail(src, kv.first, "unknown key '" + key + "' in '" + name + "'");
  }
}

std::string kind_name(CorpusRecipe::Kind k) { return k == CorpusRecipe::Kind::Length ? "length" : "markers"; }

std::string emit_recipe(const CorpusRecipe& r) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "corpus_version" << YAML::Value << 1;
  out << YAML::Key << "name" << YAML::Value << r.name;
  out << YAML::Key << "kind" << YAML::Value << kind_name(r.kind);
  out << YAML::Key << "frames" << YAML::Value << r.frames;
  out << YAML::Key << "seed" << YAML::Value << r.seed;
  out << YAML::Key << "width" << YAML::Value << r.width;
  out << YAML::Key << "height" << YAML::Value << r.height;
  out << YAML::Key << "intrinsics" << YAML::Value << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "fx" << YAML::Value << r.intrinsics.fx << YAML::Key << "fy" << YAML::Value << r.intrinsics.fy;
  out << YAML::Key << "cx" << YAML::Value << r.intrinsics.cx << YAML::Key << "cy" << YAML::Value << r.intrinsics.cy;
  out << YAML::Key << "k1" << YAML::Value << r.intrinsics.k1 << YAML::Key << "k2" << YAML::Value << r.intrinsics.k2;
  out << YAML::EndMap;
  out << YAML::Key << "depth_range" << YAML::Value << YAML::Flow << YAML::BeginSeq << r.depth_min << r.depth_max
      << YAML::EndSeq;
  out << YAML::Key << "markers_per_frame" << YAML::Value << r.markers_per_frame;
  out << YAML::Key << "distractors_per_frame" << YAML::Value << r.distractors_per_frame;
  out << YAML::Key << "marker_size_range" << YAML::Value << YAML::Flow << YAML::BeginSeq << r.marker_size_min
      << r.marker_size_max << YAML::EndSeq;
  out << YAML::Key << "noise" << YAML::Value << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "salt_density" << YAML::Value << r.noise.salt_density;
  out << YAML::Key << "hue_jitter_deg" << YAML::Value << r.noise.hue_jitter_deg;
  out << YAML::Key << "additive_sigma" << YAML::Value << r.noise.additive_sigma;
  out << YAML::EndMap;
  out << YAML::Key << "detector" << YAML::Value << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "box_sigma_px" << YAML::Value << r.detector.box_sigma_px;
  out << YAML::Key << "miss_rate" << YAML::Value << r.detector.miss_rate;
  out << YAML::Key << "false_positive_rate" << YAML::Value << r.detector.false_positive_rate;
  out << YAML::Key << "confidence_sigma" << YAML::Value << r.detector.confidence_sigma;
  out << YAML::EndMap;
  if (r.min_marker_accuracy || r.max_length_error) {
    out << YAML::Key << "criteria" << YAML::Value << YAML::BeginMap;
    if (r.min_marker_accuracy) out << YAML::Key << "min_marker_accuracy" << YAML::Value << *r.min_marker_accuracy;
    if (r.max_length_error) out << YAML::Key << "max_length_error" << YAML::Value << *r.max_length_error;
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

vision::SceneObject billboard(std::string label, vision::Shape shape, double u, double v, double z, double w,
                              double h, double rotation, vision::Rgb color, const vision::Intrinsics& k) {
  const Eigen::Vector3d p{(u - k.cx) * z / k.fx, (v - k.cy) * z / k.fy, z};
  return {std::move(label), shape, p, w, h, rotation, color};
}

bool overlaps(const vision::Box& a, const std::vector<vision::Box>& placed, double margin) {
  for (const auto& b : placed)
    if (a.x_min - margin < b.x_max && b.x_min - margin < a.x_max && a.y_min - margin < b.y_max &&
        b.y_min - margin < a.y_max)
      return true;
  return false;
}

vision::Scene length_scene(const CorpusRecipe& r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double z = r.depth_min + (r.depth_max - r.depth_min) * u(rng);
  const auto& k = r.intrinsics;
  vision::Scene scene;
  const double ref_len = 1.0;
  const double tgt_len = 0.6 + 0.6 * u(rng);
  const double tgt_rot = (u(rng) - 0.5) * 0.8;
  // Reference in the upper left quadrant, target in the lower right, both at depth z.
  scene.objects.push_back(billboard("reference", vision::Shape::Rectangle, k.cx - 0.25 * k.fx, k.cy - 0.2 * k.fy, z,
                                    ref_len, 0.05, 0.0, {240, 240, 60}, k));
  scene.objects.push_back(billboard("target", vision::Shape::Rectangle, k.cx + 0.2 * k.fx, k.cy + 0.15 * k.fy, z,
                                    tgt_len, 0.06, tgt_rot, kMarkerRed, k));
  return scene;
}

vision::Scene marker_scene(const CorpusRecipe& r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto& k = r.intrinsics;
  const std::pair<const char*, vision::Rgb> colors[] = {
      {"red", kMarkerRed}, {"blue", kMarkerBlue}, {"yellow", kMarkerYellow}};
  vision::Scene scene;
  std::vector<vision::Box> placed;
  auto place = [&](bool marker, int index) {
    for (int attempt = 0; attempt < 200; ++attempt) {
      const double z = r.depth_min + (r.depth_max - r.depth_min) * u(rng);
      const double size = r.marker_size_min + (r.marker_size_max - r.marker_size_min) * u(rng);
      const double half_px = 0.75 * size * k.fx / z;
      const double cx = half_px + 8 + (r.width - 2 * half_px - 16) * u(rng);
      const double cy = half_px + 8 + (r.height - 2 * half_px - 16) * u(rng);
      const double quarter = std::floor(4.0 * u(rng));
      const double jitter = (u(rng) - 0.5) * 0.1;
      const double rot = marker ? quarter * 0.5 * kPi + jitter : (u(rng) - 0.5) * 2.0 * kPi;
      const auto& [label, color] = colors[static_cast<std::size_t>(index) % 3];
      const vision::Box box{cx - half_px, cy - half_px, cx + half_px, cy + half_px};
      if (cx - half_px < 0 || cy - half_px < 0 || overlaps(box, placed, 6.0)) continue;
      placed.push_back(box);
      vision::Shape shape = vision::Shape::TMarker;
      double h = size;
      if (!marker) {
        shape = (index % 2 == 0) ? vision::Shape::Disc : vision::Shape::Rectangle;
        if (shape == vision::Shape::Rectangle) h = size * (0.3 + 0.4 * u(rng));
      }
      scene.objects.push_back(billboard(marker ? label : std::string("distractor_") + label, shape, cx, cy, z, size,
                                        h, rot, color, k));
      return;
    }
  };
  const int offset = static_cast<int>(rng() % 3);
  for (int i = 0; i < r.markers_per_frame; ++i) place(true, i + offset);
  for (int i = 0; i < r.distractors_per_frame; ++i) place(false, i + offset + 1);
  return scene;
}

std::string frame_name(int i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frames/%03d.png", i);
  return buf;
}

std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

CorpusRecipe parse_recipe(const std::string& text, const std::string& src) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(src + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  check_keys(src, root, "recipe",
             {"corpus_version", "name", "kind", "frames", "seed", "width", "height", "intrinsics", "depth_range",
              "markers_per_frame", "distractors_per_frame", "marker_size_range", "noise", "detector", "criteria"});
  if (!root["corpus_version"] || root["corpus_version"].as<int>() != 1)
    fail(src, root, "missing or unsupported 'corpus_version' (expected 1)");
  CorpusRecipe r;
  read(src, root, "name", r.name);
  std::string kind = kind_name(r.kind);
  read(src, root, "kind", kind);
  if (kind == "length") {
    r.kind = CorpusRecipe::Kind::Length;
  } else if (kind == "markers") {
    r.kind = CorpusRecipe::Kind::Markers;
  } else {
    fail(src, root["kind"], "'kind' must be length or markers");
  }
  read(src, root, "frames", r.frames);
  read(src, root, "seed", r.seed);
  read(src, root, "width", r.width);
  read(src, root, "height", r.height);
  if (r.frames <= 0 || r.width <= 0 || r.height <= 0) fail(src, root, "frames, width and height must be positive");
  if (const auto k = root["intrinsics"]) {
    check_keys(src, k, "intrinsics", {"fx", "fy", "cx", "cy", "k1", "k2"});
    read(src, k, "fx", r.intrinsics.fx);
    read(src, k, "fy", r.intrinsics.fy);
    read(src, k, "cx", r.intrinsics.cx);
    read(src, k, "cy", r.intrinsics.cy);
    read(src, k, "k1", r.intrinsics.k1);
    read(src, k, "k2", r.intrinsics.k2);
  }
  auto pair = [&](const char* key, double& lo, double& hi) {
    if (const auto n = root[key]) {
      if (!n.IsSequence() || n.size() != 2) fail(src, n, std::string("'") + key + "' must be [lo, hi]");
      lo = n[0].as<double>();
      hi = n[1].as<double>();
      if (!(lo > 0 && hi >= lo)) fail(src, n, std::string("'") + key + "' must satisfy 0 < lo <= hi");
    }
  };
  pair("depth_range", r.depth_min, r.depth_max);
  pair("marker_size_range", r.marker_size_min, r.marker_size_max);
  read(src, root, "markers_per_frame", r.markers_per_frame);
  read(src, root, "distractors_per_frame", r.distractors_per_frame);
  if (const auto n = root["noise"]) {
    check_keys(src, n, "noise", {"salt_density", "hue_jitter_deg", "additive_sigma"});
    read(src, n, "salt_density", r.noise.salt_density);
    read(src, n, "hue_jitter_deg", r.noise.hue_jitter_deg);
    read(src, n, "additive_sigma", r.noise.additive_sigma);
  }
  if (const auto d = root["detector"]) {
    check_keys(src, d, "detector", {"box_sigma_px", "miss_rate", "false_positive_rate", "confidence_sigma"});
    read(src, d, "box_sigma_px", r.detector.box_sigma_px);
    read(src, d, "miss_rate", r.detector.miss_rate);
    read(src, d, "false_positive_rate", r.detector.false_positive_rate);
    read(src, d, "confidence_sigma", r.detector.confidence_sigma);
  }
  if (const auto c = root["criteria"]) {
    check_keys(src, c, "criteria", {"min_marker_accuracy", "max_length_error"});
    if (c["min_marker_accuracy"]) r.min_marker_accuracy = c["min_marker_accuracy"].as<double>();
    if (c["max_length_error"]) r.max_length_error = c["max_length_error"].as<double>();
  }
  return r;
}

CorpusRecipe load_recipe(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open recipe");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_recipe(ss.str(), path.string());
}

std::string truth_record(const CorpusFrame& frame) {
  nlohmann::json j;
  j["frame"] = frame.file;
  j["objects"] = nlohmann::json::array();
  for (const auto& g : frame.truth) {
    j["objects"].push_back({{"label", g.label},
                            {"box", {g.box.x_min, g.box.y_min, g.box.x_max, g.box.y_max}},
                            {"length_m", g.length_m},
                            {"endpoints", {g.endpoints[0], g.endpoints[1], g.endpoints[2], g.endpoints[3]}},
                            {"marker", g.marker},
                            {"coverage_px", g.coverage_px}});
  }
  return j.dump();
}

CorpusFrame parse_truth_record(const std::string& line, const std::string& where) {
  try {
    const auto j = nlohmann::json::parse(line);
    CorpusFrame f;
    f.file = j.at("frame").get<std::string>();
    for (const auto& o : j.at("objects")) {
      vision::GroundTruthObject g;
      g.label = o.at("label").get<std::string>();
      const auto b = o.at("box").get<std::vector<double>>();
      if (b.size() != 4) throw ConfigError(where + ": box needs 4 numbers");
      g.box = {b[0], b[1], b[2], b[3]};
      g.length_m = o.value("length_m", 0.0);
      if (o.contains("endpoints")) {
        const auto e = o.at("endpoints").get<std::vector<double>>();
        if (e.size() != 4) throw ConfigError(where + ": endpoints need 4 numbers");
        g.endpoints << e[0], e[1], e[2], e[3];
      }
      g.marker = o.value("marker", false);
      g.coverage_px = o.value("coverage_px", 0.0);
      f.truth.push_back(g);
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

Corpus generate_corpus(const CorpusRecipe& recipe, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "frames");
  Corpus corpus;
  corpus.recipe = recipe;
  std::mt19937_64 rng(recipe.seed);
  std::ofstream truth(dir / "truth.jsonl");
  for (int i = 0; i < recipe.frames; ++i) {
    const auto scene = recipe.kind == CorpusRecipe::Kind::Length ? length_scene(recipe, rng) : marker_scene(recipe, rng);
    vision::RenderOptions opt = recipe.noise;
    opt.width = recipe.width;
    opt.height = recipe.height;
    opt.seed = recipe.seed * 1000003ULL + static_cast<std::uint64_t>(i);
    const auto rendered = vision::render_scene(scene, sim::Pose{}, recipe.intrinsics, opt);
    CorpusFrame f{frame_name(i), rendered.truth};
    vision::write_png(dir / f.file, rendered.frame);
    truth << truth_record(f) << "\n";
    corpus.frames.push_back(std::move(f));
  }
  std::ofstream(dir / "corpus.yaml") << emit_recipe(recipe);
  if (!truth) throw IoError("cannot write " + (dir / "truth.jsonl").string());
  return corpus;
}

Corpus read_corpus(const std::filesystem::path& dir) {
  Corpus c;
  c.recipe = load_recipe(dir / "corpus.yaml");
  std::ifstream in(dir / "truth.jsonl");
  std::vector<std::string> recorded;
  if (in) {
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (line.empty()) continue;
      c.frames.push_back(parse_truth_record(line, (dir / "truth.jsonl").string() + ":" + std::to_string(n)));
      recorded.push_back(c.frames.back().file);
    }
  } else {
    c.warnings.push_back("no truth.jsonl; every frame skipped");
  }
  if (std::filesystem::is_directory(dir / "frames")) {
    std::vector<std::string> on_disk;
    for (const auto& e : std::filesystem::directory_iterator(dir / "frames"))
      if (e.path().extension() == ".png") on_disk.push_back("frames/" + e.path().filename().string());
    std::sort(on_disk.begin(), on_disk.end());
    for (const auto& f : on_disk)
      if (std::find(recorded.begin(), recorded.end(), f) == recorded.end())
        c.warnings.push_back(f + ": no ground truth, skipped");
  }
  return c;
}

std::vector<vision::ColorBand> load_bands(const std::filesystem::path& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path.string());
  } catch (const YAML::Exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  const std::string src = path.string();
  if (!root.IsSequence() || root.size() == 0) fail(src, root, "bands file must be a non-empty list");
  std::vector<vision::ColorBand> bands;
  for (const auto& b : root) {
    check_keys(src, b, "band", {"label", "hue", "sat", "val"});
    vision::ColorBand band;
    read(src, b, "label", band.label);
    if (band.label.empty()) fail(src, b, "band needs a 'label'");
    auto range = [&](const char* key, double& lo, double& hi) {
      if (const auto n = b[key]) {
        if (!n.IsSequence() || n.size() != 2) fail(src, n, std::string("'") + key + "' must be [lo, hi]");
        lo = n[0].as<double>();
        hi = n[1].as<double>();
      }
    };
    range("hue", band.range.hue_lo, band.range.hue_hi);
    range("sat", band.range.sat_lo, band.range.sat_hi);
    range("val", band.range.val_lo, band.range.val_hi);
    bands.push_back(band);
  }
  return bands;
}

std::vector<LengthSample> measure_frame(const vision::ImageFrame& image, const CorpusFrame& frame,
                                        const vision::Intrinsics& k) {
  std::vector<LengthSample> out;
  const auto ref = std::find_if(frame.truth.begin(), frame.truth.end(),
                                [](const vision::GroundTruthObject& g) { return g.label == "reference"; });
  if (ref == frame.truth.end()) return out;
  const auto& e = ref->endpoints;
  const Eigen::Vector2d r1 = vision::refine_subpixel(image, {e[0], e[1]});
  const Eigen::Vector2d r2 = vision::refine_subpixel(image, {e[2], e[3]});
  const auto scale = vision::calibrate(r1, r2, ref->length_m, k);
  vision::MeasureOptions opt;
  opt.frame = &image;
  for (const auto& g : frame.truth) {
    if (&g == &*ref || g.length_m <= 0) continue;
    const auto& t = g.endpoints;
    if (!image.contains(t[0], t[1]) || !image.contains(t[2], t[3])) continue;
    out.push_back({frame.file, g.label, g.length_m, vision::measure_length({t[0], t[1]}, {t[2], t[3]}, scale, k, opt)});
  }
  return out;
}

ExperimentReport evaluate_corpus(const std::filesystem::path& corpus_dir, const std::vector<vision::ColorBand>& bands,
                                 const std::filesystem::path& out_dir) {
  const Corpus corpus = read_corpus(corpus_dir);
  const auto& recipe = corpus.recipe;
  std::filesystem::create_directories(out_dir);
  ExperimentReport report;
  report.scenario = "vision-eval:" + recipe.name;
  report.notes = corpus.warnings;
  for (const auto& w : corpus.warnings) spdlog::warn("{}: {}", corpus_dir.string(), w);

  std::ofstream frames_csv(out_dir / "frames.csv");
  frames_csv << "frame,markers,true_positives,false_positives,accuracy\n";
  std::ofstream lengths_csv(out_dir / "lengths.csv");
  lengths_csv << "frame,label,truth_m,measured_m,error_pct\n";
  std::ofstream detections_out(out_dir / "detections.jsonl");

  vision::MarkerAccuracy total;
  std::vector<LengthSample> lengths;
  std::vector<vision::EvaluationImage> eval_images;
  for (std::size_t i = 0; i < corpus.frames.size(); ++i) {
    const auto& f = corpus.frames[i];
    const auto path = corpus_dir / f.file;
    if (!std::filesystem::exists(path)) {
      report.notes.push_back(f.file + ": frame missing, skipped");
      spdlog::warn("{}: frame missing, skipped", path.string());
      continue;
    }
    const auto image = vision::read_png(path);
    const auto dets = vision::detect_markers(image, bands);
    const auto acc = vision::score_markers(dets, f.truth);
    total.ground_truth += acc.ground_truth;
    total.true_positives += acc.true_positives;
    total.false_positives += acc.false_positives;
    frames_csv << f.file << "," << acc.ground_truth << "," << acc.true_positives << "," << acc.false_positives << ","
               << g6(acc.accuracy()) << "\n";

    if (recipe.kind == CorpusRecipe::Kind::Length) {
      for (const auto& s : measure_frame(image, f, recipe.intrinsics)) {
        lengths_csv << s.frame << "," << s.label << "," << g6(s.truth_m) << "," << g6(s.measured_m) << ","
                    << g6(100.0 * s.error()) << "\n";
        lengths.push_back(s);
      }
    }

    const auto detections = vision::synthetic_detector(image.width(), image.height(), f.truth, recipe.detector,
                                                       recipe.seed * 7919ULL + i);
    nlohmann::json rec{{"frame", f.file}, {"detections", nlohmann::json::array()}};
    for (const auto& d : detections)
      rec["detections"].push_back(
          {{"label", d.label}, {"box", {d.box.x_min, d.box.y_min, d.box.x_max, d.box.y_max}}, {"confidence", d.confidence}});
    detections_out << rec.dump() << "\n";
    eval_images.push_back({detections, f.truth});
  }

  report.metrics.push_back({"frames_evaluated", static_cast<double>(eval_images.size()), ""});
  report.metrics.push_back({"markers", static_cast<double>(total.ground_truth), ""});
  report.metrics.push_back({"marker_true_positives", static_cast<double>(total.true_positives), ""});
  report.metrics.push_back({"marker_false_positives", static_cast<double>(total.false_positives), ""});
  report.metrics.push_back({"marker_accuracy", total.accuracy(), ""});
  double worst = 0.0;
  for (const auto& s : lengths) worst = std::max(worst, s.error());
  if (!lengths.empty()) {
    report.metrics.push_back({"length_samples", static_cast<double>(lengths.size()), ""});
    report.metrics.push_back({"max_length_error_pct", 100.0 * worst, "%"});
  }
  if (!eval_images.empty()) {
    const auto ev = vision::evaluate_detections(eval_images, 0.5);
    report.metrics.push_back({"synthetic_detector_map50", ev.map, ""});
    report.metrics.push_back({"synthetic_detector_precision", ev.precision, ""});
    report.metrics.push_back({"synthetic_detector_recall", ev.recall, ""});
  }
  if (recipe.min_marker_accuracy)
    report.criteria.push_back({"marker accuracy", total.ground_truth ? total.accuracy() : NAN, ">=",
                               *recipe.min_marker_accuracy, false});
  if (recipe.max_length_error)
    report.criteria.push_back({"max length error", lengths.empty() ? NAN : worst, "<=", *recipe.max_length_error, false});
  for (const char* name : {"frames.csv", "lengths.csv", "detections.jsonl"})
    report.artifacts.push_back((out_dir / name).string());
  report.write(out_dir);
  return report;
}

namespace {

double fraction(const std::string& text, const std::string& where) {
  const auto slash = text.find('/');
  try {
    std::size_t used = 0;
    const double num = std::stod(text.substr(0, slash), &used);
    if (slash == std::string::npos) {
      if (used != text.size()) throw std::invalid_argument(text);
      return num;
    }
    const std::string den_text = text.substr(slash + 1);
    const double den = std::stod(den_text, &used);
    if (used != den_text.size() || den == 0.0) throw std::invalid_argument(text);
    return num / den;
  } catch (const std::logic_error&) {
    throw ConfigError(where + ": '" + text + "' is not a fraction");
  }
}

vision::Box box_of(const nlohmann::json& j) {
  const auto b = j.get<std::vector<double>>();
  if (b.size() != 4) throw ConfigError("box needs 4 numbers");
  return {b[0], b[1], b[2], b[3]};
}

}  // namespace

MapFixture load_map_fixture(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open fixture");
  const std::string where = path.string();
  MapFixture f;
  f.name = path.stem().string();
  try {
    const auto j = nlohmann::json::parse(in);
    f.iou_threshold = j.at("iou_threshold").get<double>();
    for (const auto& im : j.at("images")) {
      vision::EvaluationImage e;
      for (const auto& g : im.at("truth")) {
        vision::GroundTruthObject o;
        o.label = g.at("label").get<std::string>();
        o.box = box_of(g.at("box"));
        e.truth.push_back(o);
      }
      for (const auto& d : im.at("detections"))
        e.detections.push_back({d.at("label").get<std::string>(), box_of(d.at("box")), d.at("confidence").get<double>()});
      f.images.push_back(std::move(e));
    }
    const auto& x = j.at("expected");
    f.map = fraction(x.at("map").get<std::string>(), where);
    f.precision = fraction(x.at("precision").get<std::string>(), where);
    f.recall = fraction(x.at("recall").get<std::string>(), where);
    for (const auto& [label, value] : x.at("ap").items()) f.ap[label] = fraction(value.get<std::string>(), where);
    if (x.contains("flagged")) f.flagged = x.at("flagged").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return f;
}

double map_fixture_deviation(const MapFixture& f) {
  const auto r = vision::evaluate_detections(f.images, f.iou_threshold);
  std::vector<std::string> flagged;
  for (const auto& [label, m] : r.per_class)
    if (m.flagged) flagged.push_back(label);
  auto expected_flags = f.flagged;
  std::sort(expected_flags.begin(), expected_flags.end());
  if (flagged != expected_flags) return std::numeric_limits<double>::infinity();
  double dev = std::max({std::abs(r.map - f.map), std::abs(r.precision - f.precision), std::abs(r.recall - f.recall)});
  for (const auto& [label, ap] : f.ap) {
    const auto it = r.per_class.find(label);
    if (it == r.per_class.end()) return std::numeric_limits<double>::infinity();
    dev = std::max(dev, std::abs(it->second.ap - ap));
  }
  return dev;
}

}  // namespace scorpion::mission
