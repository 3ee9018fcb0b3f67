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

#include "mission/tools.hpp"

#include <fstream>
#include <sstream>
#include <yaml-cpp/yaml.h>

#include "net/live_runner.hpp"
#include "net/udp.hpp"
#include "sim/layout.hpp"
#include "telemetry/csv.hpp"

namespace scorpion::mission {

namespace {

[[noreturn]] void fail(const std::string& src, const YAML::Node& node, const std::string& what) {
  const auto mark = node.Mark();
  throw ConfigError(src + (mark.line >= 0 ? ":" + std::to_string(mark.line + 1) : "") + ": " + what);
}

Eigen::VectorXd vector_of(const std::string& src, const YAML::Node& node, const char* key) {
  if (!node.IsSequence() || node.size() == 0) fail(src, node, std::string("'") + key + "' must be a list of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(node.size()));
  for (std::size_t i = 0; i < node.size(); ++i) {
    try {
      v[static_cast<Eigen::Index>(i)] = node[i].as<double>();
    } catch (const YAML::BadConversion&) {
      fail(src, node[i], std::string("'") + key + "' entries must be numbers");
    }
  }
  return v;
}

std::vector<double> to_list(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

alloc::AllocationProblem parse_allocation_instance(const std::string& text, const std::string& src,
                                                   const runtime::SessionConfig& defaults) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(src + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw ConfigError(src + ": instance must be a mapping");
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (key != "b" && key != "tau" && key != "weights" && key != "lower" && key != "upper" && key != "epsilon")
      fail(src, kv.first, "unknown key '" + key + "'");
  }
  alloc::AllocationProblem p;
  p.b = sim::build_allocation_matrix(defaults.layout);
  p.weights = defaults.controller.axis_weights;
  p.lower = defaults.layout.lower_limits();
  p.upper = defaults.layout.upper_limits();
  p.epsilon = defaults.controller.epsilon;
  if (const auto b = root["b"]) {
    if (!b.IsSequence() || b.size() == 0) fail(src, b, "'b' must be a list of rows");
    const auto cols = b[0].IsSequence() ? b[0].size() : 0;
    p.b.resize(static_cast<Eigen::Index>(b.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < b.size(); ++r) {
      const auto row = vector_of(src, b[r], "b");
      if (static_cast<std::size_t>(row.size()) != cols) fail(src, b[r], "'b' rows must have equal length");
      p.b.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    const auto n = p.b.cols(), m = p.b.rows();
    if (!root["lower"] && n != p.lower.size()) fail(src, b, "'lower' is required when 'b' changes the thruster count");
    if (!root["upper"] && n != p.upper.size()) fail(src, b, "'upper' is required when 'b' changes the thruster count");
    if (!root["weights"] && m != p.weights.size()) fail(src, b, "'weights' is required when 'b' changes the axis count");
  }
  if (!root["tau"]) throw ConfigError(src + ": missing key 'tau'");
  p.tau = vector_of(src, root["tau"], "tau");
  if (const auto n = root["weights"]) p.weights = vector_of(src, n, "weights");
  if (const auto n = root["lower"]) p.lower = vector_of(src, n, "lower");
  if (const auto n = root["upper"]) p.upper = vector_of(src, n, "upper");
  if (const auto n = root["epsilon"]) {
    try {
      p.epsilon = n.as<double>();
    } catch (const YAML::BadConversion&) {
      fail(src, n, "'epsilon' must be a number");
    }
  }
  try {
    alloc::validate(p);
  } catch (const ArgumentError& e) {
    throw ConfigError(src + ": " + e.what());
  }
  return p;
}

alloc::AllocationProblem load_allocation_instance(const std::filesystem::path& path,
                                                  const runtime::SessionConfig& defaults) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open instance");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_allocation_instance(ss.str(), path.string(), defaults);
}

nlohmann::json allocation_dump(const alloc::AllocationProblem& p, const alloc::AllocationResult& r) {
  return {{"thrust", to_list(r.thrust)},
          {"wrench", to_list(p.b * r.thrust)},
          {"tau", to_list(p.tau)},
          {"residual", to_list(r.residual)},
          {"saturated", r.saturated},
          {"objective", alloc::objective(p, r.thrust)},
          {"iterations", r.iterations}};
}

std::uint64_t replay_log(const std::filesystem::path& csv, const ReplayOptions& options) {
  const auto frames = telemetry::read_csv_log(csv);
  if (frames.empty()) return 0;
  net::UdpSender sender(options.host, options.port);
  return net::replay_frames(frames, sender, options.speed, options.stop);
}

}  // namespace scorpion::mission
