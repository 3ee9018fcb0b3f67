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

#include "pano/manifest.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <iomanip>
#include <sstream>

#include "pano/synthetic.hpp"
#include "vision/camera.hpp"

namespace scorpion::pano {

namespace {

template <typename T>
T required(const YAML::Node& node, const std::string& key, const std::string& where) {
  if (!node[key]) throw ConfigError(where + ": missing key '" + key + "'");
  try {
    return node[key].as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where + ": invalid value for '" + key + "'");
  }
}

}  // namespace

Manifest read_manifest(const std::filesystem::path& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path.string());
  } catch (const YAML::BadFile&) {
    throw IoError("cannot read manifest " + path.string());
  } catch (const YAML::Exception& e) {
    throw ConfigError("manifest " + path.string() + ": " + e.what());
  }
  Manifest m;
  const std::string where = path.filename().string();
  const YAML::Node k = root["intrinsics"];
  if (!k) throw ConfigError(where + ": missing key 'intrinsics'");
  m.intrinsics.fx = required<double>(k, "fx", where + " intrinsics");
  m.intrinsics.fy = required<double>(k, "fy", where + " intrinsics");
  m.intrinsics.cx = required<double>(k, "cx", where + " intrinsics");
  m.intrinsics.cy = required<double>(k, "cy", where + " intrinsics");
  m.intrinsics.k1 = k["k1"] ? k["k1"].as<double>() : 0.0;
  m.intrinsics.k2 = k["k2"] ? k["k2"].as<double>() : 0.0;
  if (!(m.intrinsics.fx > 0.0 && m.intrinsics.fy > 0.0)) throw ConfigError(where + ": focal lengths must be positive");
  if (root["canvas_height"]) m.canvas_height = root["canvas_height"].as<int>();
  if (root["min_overlap_fraction"]) m.min_overlap_fraction = root["min_overlap_fraction"].as<double>();
  const YAML::Node frames = root["frames"];
  if (!frames || !frames.IsSequence() || frames.size() == 0) throw ConfigError(where + ": 'frames' must be a non-empty list");
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const std::string w = where + " frames[" + std::to_string(i) + "]";
    m.frames.push_back({required<std::string>(frames[i], "file", w), required<double>(frames[i], "yaw", w)});
  }
  if (const YAML::Node pairs = root["correspondences"]) {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const std::string w = where + " correspondences[" + std::to_string(i) + "]";
      PairEntry p{required<std::size_t>(pairs[i], "from", w), required<std::size_t>(pairs[i], "to", w),
                  required<std::string>(pairs[i], "file", w)};
      if (p.from >= m.frames.size() || p.to >= m.frames.size() || p.from == p.to)
        throw ConfigError(w + ": frame index out of range");
      m.pairs.push_back(p);
    }
  }
  return m;
}

void write_manifest(const std::filesystem::path& path, const Manifest& m) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "intrinsics" << YAML::Value << YAML::Flow << YAML::BeginMap;
  e << YAML::Key << "fx" << YAML::Value << m.intrinsics.fx << YAML::Key << "fy" << YAML::Value << m.intrinsics.fy;
  e << YAML::Key << "cx" << YAML::Value << m.intrinsics.cx << YAML::Key << "cy" << YAML::Value << m.intrinsics.cy;
  e << YAML::Key << "k1" << YAML::Value << m.intrinsics.k1 << YAML::Key << "k2" << YAML::Value << m.intrinsics.k2;
  e << YAML::EndMap;
  e << YAML::Key << "canvas_height" << YAML::Value << m.canvas_height;
  e << YAML::Key << "min_overlap_fraction" << YAML::Value << m.min_overlap_fraction;
  e << YAML::Key << "frames" << YAML::Value << YAML::BeginSeq;
  for (const auto& f : m.frames)
    e << YAML::Flow << YAML::BeginMap << YAML::Key << "file" << YAML::Value << f.file << YAML::Key << "yaw"
      << YAML::Value << f.yaw << YAML::EndMap;
  e << YAML::EndSeq;
  if (!m.pairs.empty()) {
    e << YAML::Key << "correspondences" << YAML::Value << YAML::BeginSeq;
    for (const auto& p : m.pairs)
      e << YAML::Flow << YAML::BeginMap << YAML::Key << "from" << YAML::Value << p.from << YAML::Key << "to"
        << YAML::Value << p.to << YAML::Key << "file" << YAML::Value << p.file << YAML::EndMap;
    e << YAML::EndSeq;
  }
  e << YAML::EndMap;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write manifest " + path.string());
  out << e.c_str() << '\n';
}

std::vector<Correspondence> read_correspondences(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read correspondences " + path.string());
  std::vector<Correspondence> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    Correspondence c;
    if (!(ss >> c.src.x() >> c.src.y() >> c.dst.x() >> c.dst.y()) || !c.src.allFinite() || !c.dst.allFinite())
      throw ConfigError(path.filename().string() + ":" + std::to_string(line_no) + ": expected four finite numbers");
    out.push_back(c);
  }
  return out;
}

void write_correspondences(const std::filesystem::path& path, const std::vector<Correspondence>& corrs) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write correspondences " + path.string());
  out << std::setprecision(17);
  for (const auto& c : corrs) out << c.src.x() << ' ' << c.src.y() << ' ' << c.dst.x() << ' ' << c.dst.y() << '\n';
}

YawRefinement refine_yaws(const Manifest& m, const std::vector<std::vector<Correspondence>>& pair_corrs,
                          const RansacOptions& options) {
  if (pair_corrs.size() != m.pairs.size()) throw ArgumentError("refine_yaws: one correspondence list per pair");
  YawRefinement out;
  for (const auto& f : m.frames) out.yaws.push_back(f.yaw);
  Intrinsics pinhole = m.intrinsics;
  pinhole.k1 = pinhole.k2 = 0.0;
  for (std::size_t i = 0; i < m.pairs.size(); ++i) {
    std::vector<Correspondence> undistorted = pair_corrs[i];
    for (auto& c : undistorted) {
      c.src = vision::undistort_pixel(m.intrinsics, c.src);
      c.dst = vision::undistort_pixel(m.intrinsics, c.dst);
    }
    RansacResult fit = ransac_homography(undistorted, options);
    out.yaws[m.pairs[i].to] = out.yaws[m.pairs[i].from] + yaw_from_homography(pinhole, fit.h);
    out.fits.push_back(std::move(fit));
  }
  return out;
}

}  // namespace scorpion::pano
