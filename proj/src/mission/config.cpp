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

#include "mission/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <yaml-cpp/yaml.h>

#include "common/error.hpp"
#include "sim/layout.hpp"

namespace scorpion::mission {

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& what) const {
    const auto mark = node.Mark();
    std::string where = source_;
    if (mark.line >= 0) where += ":" + std::to_string(mark.line + 1);
    throw ConfigError(where + ": " + what);
  }

  void require_map(const YAML::Node& node, const std::string& name, std::set<std::string> keys) const {
    if (!node.IsMap()) fail(node, "'" + name + "' must be a mapping");
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!keys.count(key)) fail(kv.first, "unknown key '" + key + "' in '" + name + "'");
    }
  }

  double number(const YAML::Node& node, const std::string& name) const {
    if (!node.IsScalar()) fail(node, "'" + name + "' must be a number");
    try {
      const double v = node.as<double>();
      if (!std::isfinite(v)) fail(node, "'" + name + "' must be finite");
      return v;
    } catch (const YAML::BadConversion&) {
      fail(node, "'" + name + "' must be a number");
    }
  }

  void read(const YAML::Node& map, const char* key, double& out) const {
    if (const auto n = map[key]) out = number(n, key);
  }

  void read(const YAML::Node& map, const char* key, bool& out) const {
    if (const auto n = map[key]) {
      try {
        out = n.as<bool>();
      } catch (const YAML::BadConversion&) {
        fail(n, std::string("'") + key + "' must be true or false");
      }
    }
  }

  void read(const YAML::Node& map, const char* key, int& out) const {
    if (const auto n = map[key]) {
      const double v = number(n, key);
      if (v != std::floor(v)) fail(n, std::string("'") + key + "' must be an integer");
      out = static_cast<int>(v);
    }
  }

  void read(const YAML::Node& map, const char* key, std::uint16_t& out) const {
    if (const auto n = map[key]) {
      const double v = number(n, key);
      if (v != std::floor(v) || v < 0 || v > 65535) fail(n, std::string("'") + key + "' must be a port number");
      out = static_cast<std::uint16_t>(v);
    }
  }

  void read(const YAML::Node& map, const char* key, std::string& out) const {
    if (const auto n = map[key]) {
      if (!n.IsScalar()) fail(n, std::string("'") + key + "' must be a string");
      out = n.as<std::string>();
    }
  }

  template <int N>
  void read(const YAML::Node& map, const char* key, Eigen::Matrix<double, N, 1>& out) const {
    if (const auto n = map[key]) out = vector<N>(n, key);
  }

  template <int N>
  Eigen::Matrix<double, N, 1> vector(const YAML::Node& n, const std::string& key) const {
    if (!n.IsSequence() || n.size() != static_cast<std::size_t>(N))
      fail(n, "'" + key + "' must be a list of " + std::to_string(N) + " numbers");
    Eigen::Matrix<double, N, 1> v;
    for (int i = 0; i < N; ++i) v[i] = number(n[static_cast<std::size_t>(i)], key);
    return v;
  }

 private:
  std::string source_;
};

template <class T>
YAML::Node seq(const T& v) {
  YAML::Node n(YAML::NodeType::Sequence);
  for (Eigen::Index i = 0; i < v.size(); ++i) n.push_back(v[i]);
  n.SetStyle(YAML::EmitterStyle::Flow);
  return n;
}

}  // namespace

Config parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  Reader r(source);
  if (!root.IsMap()) throw ConfigError(source + ": configuration must be a mapping");
  r.require_map(root, "configuration",
                {"config_version", "vehicle", "thrusters", "environment", "manipulator", "controller", "simulation",
                 "camera", "telemetry"});
  if (!root["config_version"]) throw ConfigError(source + ": missing 'config_version'");
  int version = 0;
  r.read(root, "config_version", version);
  if (version != kConfigVersion)
    r.fail(root["config_version"], "unsupported config_version " + std::to_string(version) + " (expected " +
                                       std::to_string(kConfigVersion) + ")");

  Config cfg;
  auto& s = cfg.session;
  if (const auto v = root["vehicle"]) {
    r.require_map(v, "vehicle",
                  {"mass", "inertia", "added_mass", "quadratic_drag", "buoyancy_offset", "cob_offset",
                   "max_linear_speed", "max_angular_speed", "gravity"});
    auto& p = s.vehicle;
    r.read(v, "mass", p.mass);
    r.read(v, "inertia", p.inertia);
    r.read(v, "added_mass", p.added_mass);
    r.read(v, "quadratic_drag", p.quadratic_drag);
    r.read(v, "buoyancy_offset", p.buoyancy_offset);
    r.read(v, "cob_offset", p.cob_offset);
    r.read(v, "max_linear_speed", p.max_linear_speed);
    r.read(v, "max_angular_speed", p.max_angular_speed);
    r.read(v, "gravity", p.gravity);
    if (!(p.mass > 0)) r.fail(v["mass"] ? v["mass"] : v, "'mass' must be positive");
    if ((p.quadratic_drag.array() < 0).any()) r.fail(v["quadratic_drag"], "drag coefficients must be >= 0");
    if ((p.inertia.array() <= 0).any()) r.fail(v["inertia"], "inertia must be positive");
  }
  if (const auto t = root["thrusters"]) {
    if (!t.IsSequence() || t.size() == 0) r.fail(t, "'thrusters' must be a non-empty list");
    sim::ThrusterLayout layout;
    for (const auto& e : t) {
      r.require_map(e, "thruster", {"position", "direction", "f_min", "f_max"});
      sim::Thruster th;
      th.f_min = sim::kT200ReverseLimit;
      th.f_max = sim::kT200ForwardLimit;
      if (!e["position"] || !e["direction"]) r.fail(e, "thruster needs 'position' and 'direction'");
      r.read(e, "position", th.position);
      r.read(e, "direction", th.direction);
      r.read(e, "f_min", th.f_min);
      r.read(e, "f_max", th.f_max);
      layout.thrusters.push_back(th);
    }
    try {
      sim::validate_layout(layout);
      sim::build_allocation_matrix(layout);
    } catch (const ConfigError& e) {
      r.fail(t, e.what());
    }
    s.layout = layout;
  }
  if (const auto e = root["environment"]) {
    r.require_map(e, "environment",
                  {"surface_pressure_pa", "water_density", "gravity", "pressure_noise_sigma", "housing_pressure_pa",
                   "housing_temp_c", "temp_noise_sigma", "imu_position_sigma", "imu_angle_sigma", "leak_time_s",
                   "noise"});
    auto& env = s.environment;
    r.read(e, "surface_pressure_pa", env.surface_pressure_pa);
    r.read(e, "water_density", env.water_density);
    r.read(e, "gravity", env.gravity);
    r.read(e, "pressure_noise_sigma", env.pressure_noise_sigma);
    r.read(e, "housing_pressure_pa", env.housing_pressure_pa);
    r.read(e, "housing_temp_c", env.housing_temp_c);
    r.read(e, "temp_noise_sigma", env.temp_noise_sigma);
    r.read(e, "imu_position_sigma", env.imu_position_sigma);
    r.read(e, "imu_angle_sigma", env.imu_angle_sigma);
    r.read(e, "leak_time_s", env.leak_time_s);
    r.read(e, "noise", env.noise);
  }
  if (const auto m = root["manipulator"]) {
    r.require_map(m, "manipulator", {"max_yaw_rate", "max_jaw_rate"});
    r.read(m, "max_yaw_rate", s.manipulator.max_yaw_rate);
    r.read(m, "max_jaw_rate", s.manipulator.max_jaw_rate);
  }
  if (const auto c = root["controller"]) {
    r.require_map(c, "controller",
                  {"kp", "ki", "kd", "kaw", "i_max", "rate_damping", "derivative_alpha", "axis_weights", "max_demand",
                   "incremental_ramp", "max_slew", "epsilon", "initial_mode"});
    auto& cc = s.controller;
    r.read(c, "kp", cc.gains.kp);
    r.read(c, "ki", cc.gains.ki);
    r.read(c, "kd", cc.gains.kd);
    r.read(c, "kaw", cc.gains.kaw);
    r.read(c, "i_max", cc.gains.i_max);
    r.read(c, "rate_damping", cc.gains.rate_damping);
    r.read(c, "derivative_alpha", cc.gains.derivative_alpha);
    r.read(c, "axis_weights", cc.axis_weights);
    r.read(c, "max_demand", cc.max_demand);
    r.read(c, "incremental_ramp", cc.incremental_ramp);
    r.read(c, "max_slew", cc.max_slew);
    r.read(c, "epsilon", cc.epsilon);
    int mode = static_cast<int>(cc.initial_mode);
    r.read(c, "initial_mode", mode);
    const auto parsed = control::mode_from_byte(static_cast<std::uint8_t>(mode));
    if (mode < 0 || mode > 2 || !parsed) r.fail(c["initial_mode"], "'initial_mode' must be 0, 1 or 2");
    cc.initial_mode = *parsed;
    if ((cc.gains.i_max.array() <= 0).any()) r.fail(c["i_max"], "'i_max' must be positive");
    if ((cc.axis_weights.array() <= 0).any()) r.fail(c["axis_weights"], "'axis_weights' must be positive");
    if (!(cc.gains.derivative_alpha > 0 && cc.gains.derivative_alpha <= 1))
      r.fail(c["derivative_alpha"], "'derivative_alpha' must be in (0, 1]");
  }
  if (const auto sim_node = root["simulation"]) {
    r.require_map(sim_node, "simulation", {"dt", "seed", "initial_pose", "trim"});
    r.read(sim_node, "dt", s.dt);
    if (!(s.dt > 0 && s.dt <= 0.1)) r.fail(sim_node["dt"], "'dt' must be in (0, 0.1]");
    if (const auto seed = sim_node["seed"]) {
      try {
        s.seed = seed.as<std::uint64_t>();
      } catch (const YAML::BadConversion&) {
        r.fail(seed, "'seed' must be a non-negative integer");
      }
    }
    Vector6d pose = s.initial_pose.vector();
    r.read(sim_node, "initial_pose", pose);
    s.initial_pose = sim::Pose::from_vector(pose).normalized();
    r.read(sim_node, "trim", s.trim);
  }
  if (const auto cam = root["camera"]) {
    r.require_map(cam, "camera", {"fx", "fy", "cx", "cy", "k1", "k2", "width", "height", "body_offset"});
    auto& k = s.camera.intrinsics;
    r.read(cam, "fx", k.fx);
    r.read(cam, "fy", k.fy);
    r.read(cam, "cx", k.cx);
    r.read(cam, "cy", k.cy);
    r.read(cam, "k1", k.k1);
    r.read(cam, "k2", k.k2);
    r.read(cam, "width", s.camera.width);
    r.read(cam, "height", s.camera.height);
    r.read(cam, "body_offset", s.camera.body_offset);
    if (!(k.fx > 0 && k.fy > 0) || s.camera.width <= 0 || s.camera.height <= 0)
      r.fail(cam, "camera focal lengths and size must be positive");
  }
  if (const auto t = root["telemetry"]) {
    r.require_map(t, "telemetry", {"host", "rate_hz", "telemetry_port", "command_port", "bridge_port"});
    auto& tel = cfg.telemetry;
    r.read(t, "host", tel.host);
    r.read(t, "rate_hz", tel.rate_hz);
    if (!(tel.rate_hz >= 1 && tel.rate_hz <= 50)) r.fail(t["rate_hz"], "'rate_hz' must be within [1, 50]");
    r.read(t, "telemetry_port", tel.telemetry_port);
    r.read(t, "command_port", tel.command_port);
    r.read(t, "bridge_port", tel.bridge_port);
  }
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open configuration");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::string dump_config(const Config& cfg) {
  const auto& s = cfg.session;
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  YAML::Node root;
  root["config_version"] = kConfigVersion;
  auto v = root["vehicle"];
  v["mass"] = s.vehicle.mass;
  v["inertia"] = seq(s.vehicle.inertia);
  v["added_mass"] = seq(s.vehicle.added_mass);
  v["quadratic_drag"] = seq(s.vehicle.quadratic_drag);
  v["buoyancy_offset"] = s.vehicle.buoyancy_offset;
  v["cob_offset"] = seq(s.vehicle.cob_offset);
  v["max_linear_speed"] = s.vehicle.max_linear_speed;
  v["max_angular_speed"] = s.vehicle.max_angular_speed;
  v["gravity"] = s.vehicle.gravity;
  for (const auto& th : s.layout.thrusters) {
    YAML::Node n;
    n["position"] = seq(th.position);
    n["direction"] = seq(th.direction);
    n["f_min"] = th.f_min;
    n["f_max"] = th.f_max;
    root["thrusters"].push_back(n);
  }
  auto e = root["environment"];
  e["surface_pressure_pa"] = s.environment.surface_pressure_pa;
  e["water_density"] = s.environment.water_density;
  e["gravity"] = s.environment.gravity;
  e["pressure_noise_sigma"] = s.environment.pressure_noise_sigma;
  e["housing_pressure_pa"] = s.environment.housing_pressure_pa;
  e["housing_temp_c"] = s.environment.housing_temp_c;
  e["temp_noise_sigma"] = s.environment.temp_noise_sigma;
  e["imu_position_sigma"] = s.environment.imu_position_sigma;
  e["imu_angle_sigma"] = s.environment.imu_angle_sigma;
  e["leak_time_s"] = s.environment.leak_time_s;
  e["noise"] = s.environment.noise;
  root["manipulator"]["max_yaw_rate"] = s.manipulator.max_yaw_rate;
  root["manipulator"]["max_jaw_rate"] = s.manipulator.max_jaw_rate;
  auto c = root["controller"];
  const auto& cc = s.controller;
  c["kp"] = seq(cc.gains.kp);
  c["ki"] = seq(cc.gains.ki);
  c["kd"] = seq(cc.gains.kd);
  c["kaw"] = seq(cc.gains.kaw);
  c["i_max"] = seq(cc.gains.i_max);
  c["rate_damping"] = seq(cc.gains.rate_damping);
  c["derivative_alpha"] = cc.gains.derivative_alpha;
  c["axis_weights"] = seq(cc.axis_weights);
  c["max_demand"] = seq(cc.max_demand);
  c["incremental_ramp"] = seq(cc.incremental_ramp);
  c["max_slew"] = cc.max_slew;
  c["epsilon"] = cc.epsilon;
  c["initial_mode"] = static_cast<int>(cc.initial_mode);
  auto sim_node = root["simulation"];
  sim_node["dt"] = s.dt;
  sim_node["seed"] = s.seed;
  sim_node["initial_pose"] = seq(s.initial_pose.vector());
  sim_node["trim"] = seq(s.trim);
  auto cam = root["camera"];
  const auto& k = s.camera.intrinsics;
  cam["fx"] = k.fx;
  cam["fy"] = k.fy;
  cam["cx"] = k.cx;
  cam["cy"] = k.cy;
  cam["k1"] = k.k1;
  cam["k2"] = k.k2;
  cam["width"] = s.camera.width;
  cam["height"] = s.camera.height;
  cam["body_offset"] = seq(s.camera.body_offset);
  auto t = root["telemetry"];
  t["host"] = cfg.telemetry.host;
  t["rate_hz"] = cfg.telemetry.rate_hz;
  t["telemetry_port"] = cfg.telemetry.telemetry_port;
  t["command_port"] = cfg.telemetry.command_port;
  t["bridge_port"] = cfg.telemetry.bridge_port;
  out << root;
  return std::string(out.c_str()) + "\n";
}

}  // namespace scorpion::mission
