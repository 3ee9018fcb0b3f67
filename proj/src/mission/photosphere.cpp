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

#include "mission/photosphere.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <yaml-cpp/yaml.h>

#include "common/error.hpp"
#include "common/math.hpp"
#include "pano/spherical.hpp"
#include "pano/synthetic.hpp"
#include "vision/image.hpp"

namespace scorpion::mission {

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open recipe");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

[[noreturn]] void fail(const std::string& src, const YAML::Node& node, const std::string& what) {
  const auto mark = node.Mark();
  throw ConfigError(src + (mark.line >= 0 ? ":" + std::to_string(mark.line + 1) : "") + ": " + what);
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

std::string numbered(const char* dir, int i, const char* ext) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s/%03d.%s", dir, i, ext);
  return buf;
}

std::string deg_interval(double a, double b) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "[%g°,%g°)", a, b);
  return buf;
}

}  // namespace

bool is_sweep_recipe(const std::filesystem::path& path) {
  try {
    const YAML::Node root = YAML::Load(read_text(path));
    return root.IsMap() && root["kind"] && root["kind"].as<std::string>() == "sweep";
  } catch (const YAML::Exception&) {
    return false;
  }
}

SweepRecipe parse_sweep_recipe(const std::string& text, const std::string& src) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(src + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw ConfigError(src + ": recipe must be a mapping");
  static const char* const keys[] = {"corpus_version", "name", "kind", "frames", "seed", "width", "height",
                                     "hfov_deg", "yaw_offset_deg", "yaw_noise_deg", "omit", "correspondences",
                                     "outlier_fraction", "canvas_height"};
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (std::find(std::begin(keys), std::end(keys), key) == std::end(keys))
      fail(src, kv.first, "unknown key '" + key + "'");
  }
  if (!root["corpus_version"] || root["corpus_version"].as<int>() != 1)
    fail(src, root, "missing or unsupported 'corpus_version' (expected 1)");
  if (!root["kind"] || root["kind"].as<std::string>() != "sweep") fail(src, root, "'kind' must be sweep");
  SweepRecipe r;
  read(src, root, "name", r.name);
  read(src, root, "frames", r.frames);
  read(src, root, "seed", r.seed);
  read(src, root, "width", r.width);
  read(src, root, "height", r.height);
  read(src, root, "hfov_deg", r.hfov_deg);
  read(src, root, "yaw_offset_deg", r.yaw_offset_deg);
  read(src, root, "yaw_noise_deg", r.yaw_noise_deg);
  read(src, root, "omit", r.omit);
  read(src, root, "correspondences", r.correspondences);
  read(src, root, "outlier_fraction", r.outlier_fraction);
  read(src, root, "canvas_height", r.canvas_height);
  if (r.frames < 2 || r.width <= 0 || r.height <= 0 || r.canvas_height <= 0)
    fail(src, root, "frames must be at least 2 and sizes positive");
  if (!(r.hfov_deg > 0.0 && r.hfov_deg < 180.0)) fail(src, root["hfov_deg"], "'hfov_deg' must be in (0, 180)");
  if (r.correspondences < 0 || !(r.outlier_fraction >= 0.0 && r.outlier_fraction < 1.0))
    fail(src, root, "correspondences must be non-negative and outlier_fraction in [0, 1)");
  return r;
}

SweepRecipe load_sweep_recipe(const std::filesystem::path& path) {
  return parse_sweep_recipe(read_text(path), path.string());
}

pano::Manifest generate_sweep(const SweepRecipe& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "frames");
  pano::Manifest m;
  const double f = 0.5 * r.width / std::tan(0.5 * r.hfov_deg * kPi / 180.0);
  m.intrinsics = {f, f, 0.5 * (r.width - 1), 0.5 * (r.height - 1), 0.0, 0.0};
  m.canvas_height = r.canvas_height;
  std::mt19937_64 rng(r.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> true_yaws;
  for (int i = 0; i < r.frames; ++i) {
    if (std::find(r.omit.begin(), r.omit.end(), i) != r.omit.end()) continue;
    const double yaw = (r.yaw_offset_deg + 360.0 * i / r.frames) * kPi / 180.0;
    const auto file = numbered("frames", i, "png");
    vision::write_png(dir / file, pano::render_yaw_frame(m.intrinsics, r.width, r.height, yaw));
    const double err = true_yaws.empty() ? 0.0 : r.yaw_noise_deg * noise(rng) * kPi / 180.0;
    m.frames.push_back({file, yaw + err});
    true_yaws.push_back(yaw);
  }
  if (r.correspondences > 0) {
    std::filesystem::create_directories(dir / "pairs");
    for (std::size_t i = 0; i + 1 < true_yaws.size(); ++i) {
      const auto h = pano::rotation_homography(m.intrinsics, true_yaws[i], true_yaws[i + 1]);
      const auto corrs = pano::make_correspondences(h, r.correspondences, r.outlier_fraction, r.width, r.height,
                                                    r.seed * 1000003ULL + i);
      const auto file = numbered("pairs", static_cast<int>(i), "txt");
      pano::write_correspondences(dir / file, corrs.corrs);
      m.pairs.push_back({i, i + 1, file});
    }
  }
  pano::write_manifest(dir / "manifest.yaml", m);
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap << YAML::Key << "corpus_version" << YAML::Value << 1 << YAML::Key << "name" << YAML::Value
    << r.name << YAML::Key << "kind" << YAML::Value << "sweep" << YAML::Key << "frames" << YAML::Value << r.frames
    << YAML::Key << "seed" << YAML::Value << r.seed << YAML::Key << "width" << YAML::Value << r.width << YAML::Key
    << "height" << YAML::Value << r.height << YAML::Key << "hfov_deg" << YAML::Value << r.hfov_deg << YAML::Key
    << "yaw_offset_deg" << YAML::Value << r.yaw_offset_deg << YAML::Key << "yaw_noise_deg" << YAML::Value
    << r.yaw_noise_deg << YAML::Key << "omit" << YAML::Value << YAML::Flow << r.omit << YAML::Key
    << "correspondences" << YAML::Value << r.correspondences << YAML::Key << "outlier_fraction" << YAML::Value
    << r.outlier_fraction << YAML::Key << "canvas_height" << YAML::Value << r.canvas_height << YAML::EndMap;
  std::ofstream(dir / "corpus.yaml") << e.c_str() << "\n";
  return m;
}

ExperimentReport run_photosphere(const std::filesystem::path& frames_dir, const std::filesystem::path& manifest_path,
                                 const std::filesystem::path& out_dir, const PhotosphereOptions& options) {
  const pano::Manifest m = pano::read_manifest(manifest_path);
  std::filesystem::create_directories(out_dir);
  ExperimentReport report;
  report.scenario = "photosphere";
  std::vector<double> yaws;
  for (const auto& f : m.frames) yaws.push_back(f.yaw);

  if (!m.pairs.empty()) {
    std::vector<std::vector<pano::Correspondence>> corrs;
    const auto base = manifest_path.parent_path();
    for (const auto& p : m.pairs) corrs.push_back(pano::read_correspondences(base / p.file));
    pano::RansacOptions ro;
    ro.seed = options.seed;
    const auto refined = pano::refine_yaws(m, corrs, ro);
    double max_shift = 0.0;
    int min_inliers = std::numeric_limits<int>::max();
    for (std::size_t i = 0; i < yaws.size(); ++i) max_shift = std::max(max_shift, std::abs(refined.yaws[i] - yaws[i]));
    for (const auto& fit : refined.fits) min_inliers = std::min(min_inliers, fit.inlier_count);
    yaws = refined.yaws;
    report.metrics.push_back({"refined_pairs", static_cast<double>(refined.fits.size()), ""});
    report.metrics.push_back({"min_pair_inliers", static_cast<double>(min_inliers), ""});
    report.metrics.push_back({"max_yaw_correction_deg", max_shift * 180.0 / kPi, "deg"});
  }

  std::ofstream yaw_csv(out_dir / "yaws.csv");
  yaw_csv << "frame,manifest_yaw_rad,used_yaw_rad\n";
  yaw_csv.precision(17);
  for (std::size_t i = 0; i < yaws.size(); ++i)
    yaw_csv << m.frames[i].file << "," << m.frames[i].yaw << "," << yaws[i] << "\n";
  report.artifacts.push_back((out_dir / "yaws.csv").string());

  const auto gaps = pano::coverage_gaps(yaws, m.intrinsics, [&] {
    return vision::read_png(frames_dir / m.frames.front().file).width();
  }());
  report.metrics.push_back({"coverage_gaps", static_cast<double>(gaps.size()), ""});
  double gap_deg = 0.0;
  for (const auto& [a, b] : gaps) {
    gap_deg += b - a;
    report.notes.push_back("coverage gap " + deg_interval(a, b));
  }
  report.metrics.push_back({"coverage_deg", 360.0 - gap_deg, "deg"});
  report.criteria.push_back({"full 360 coverage", 360.0 - gap_deg, ">=", 360.0, false});

  const double seam_limit = options.max_seam_error.value_or(2.0 / 255.0);
  if (!gaps.empty()) {
    report.criteria.push_back({"wrap seam error", NAN, "<", seam_limit, false});
    report.write(out_dir);
    return report;
  }

  std::vector<pano::YawFrame> frames;
  for (std::size_t i = 0; i < m.frames.size(); ++i)
    frames.push_back({vision::read_png(frames_dir / m.frames[i].file), yaws[i]});
  pano::CompositeOptions co;
  co.min_overlap_fraction = m.min_overlap_fraction;
  pano::PanoramaCanvas canvas;
  try {
    canvas = pano::composite_equirect(frames, m.intrinsics, m.canvas_height, co);
  } catch (const pano::CompositingError& e) {
    report.notes.push_back(e.what());
    report.criteria.push_back({"wrap seam error", NAN, "<", seam_limit, false});
    report.write(out_dir);
    return report;
  }
  vision::write_png(out_dir / "panorama.png", canvas.image);
  vision::write_png_gray(out_dir / "weights.png", canvas.width, canvas.height, pano::weight_map_gray(canvas));
  report.artifacts.push_back((out_dir / "panorama.png").string());
  report.artifacts.push_back((out_dir / "weights.png").string());
  const double seam = pano::wrap_seam_error(canvas);
  report.metrics.push_back({"canvas_width", static_cast<double>(canvas.width), "px"});
  report.metrics.push_back({"canvas_height", static_cast<double>(canvas.height), "px"});
  report.metrics.push_back({"band_top_lat_deg",
                            pano::canvas_lonlat(0, canvas.band_top, canvas.width, canvas.height).lat * 180.0 / kPi,
                            "deg"});
  report.metrics.push_back({"wrap_seam_error", seam, ""});
  report.metrics.push_back({"wrap_seam_error_8bit", seam * 255.0, "/255"});
  report.criteria.push_back({"wrap seam error", seam, "<", seam_limit, false});
  report.write(out_dir);
  return report;
}

}  // namespace scorpion::mission
