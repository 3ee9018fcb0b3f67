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

#include "telemetry/json_codec.hpp"

#include <cmath>

namespace scorpion::telemetry {

using nlohmann::json;

namespace {

constexpr const char* kPoseKeys[] = {"x", "y", "z", "roll", "pitch", "yaw"};
constexpr const char* kTwistKeys[] = {"u", "v", "w", "p", "q", "r"};

double number(const json& j, const char* key) {
  if (!j.contains(key)) throw BridgeRequestError("malformed", std::string("missing field '") + key + "'");
  const json& v = j.at(key);
  if (!v.is_number()) throw BridgeRequestError("malformed", std::string("field '") + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw BridgeRequestError("invalid_value", std::string("field '") + key + "' is not finite");
  return d;
}

template <std::size_t N>
std::array<double, N> number_array(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array() || j.at(key).size() != N)
    throw BridgeRequestError("malformed", std::string("field '") + key + "' must be an array of " + std::to_string(N) +
                                              " numbers");
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    const json& v = j.at(key)[i];
    if (!v.is_number()) throw BridgeRequestError("malformed", std::string("field '") + key + "' must hold numbers");
    out[i] = v.get<double>();
    if (!std::isfinite(out[i])) throw BridgeRequestError("invalid_value", std::string("field '") + key + "' is not finite");
  }
  return out;
}

}  // namespace

json frame_to_json(const TelemetryFrame& f) {
  json j;
  j["type"] = "telemetry";
  j["timestamp_us"] = f.timestamp_us;
  for (std::size_t i = 0; i < 6; ++i) j[kPoseKeys[i]] = static_cast<double>(f.pose[i]);
  for (std::size_t i = 0; i < 6; ++i) j[kTwistKeys[i]] = static_cast<double>(f.twist[i]);
  j["depth_m"] = static_cast<double>(f.depth_m);
  j["temp_c"] = static_cast<double>(f.temp_c);
  j["int_pressure_pa"] = static_cast<double>(f.int_pressure_pa);
  j["water_pressure_pa"] = static_cast<double>(f.water_pressure_pa);
  j["leak"] = f.leak;
  for (std::size_t i = 0; i < 8; ++i) j["f" + std::to_string(i + 1)] = static_cast<double>(f.thrust[i]);
  j["mode"] = f.mode;
  j["manip_yaw"] = static_cast<double>(f.manip_yaw);
  j["manip_jaw"] = static_cast<double>(f.manip_jaw);
  j["faults"] = f.faults;
  return j;
}

TelemetryFrame frame_from_json(const json& j) {
  TelemetryFrame f;
  f.timestamp_us = j.at("timestamp_us").get<std::uint64_t>();
  for (std::size_t i = 0; i < 6; ++i) f.pose[i] = j.at(kPoseKeys[i]).get<float>();
  for (std::size_t i = 0; i < 6; ++i) f.twist[i] = j.at(kTwistKeys[i]).get<float>();
  f.depth_m = j.at("depth_m").get<float>();
  f.temp_c = j.at("temp_c").get<float>();
  f.int_pressure_pa = j.at("int_pressure_pa").get<float>();
  f.water_pressure_pa = j.at("water_pressure_pa").get<float>();
  f.leak = j.at("leak").get<std::uint8_t>();
  for (std::size_t i = 0; i < 8; ++i) f.thrust[i] = j.at("f" + std::to_string(i + 1)).get<float>();
  f.mode = j.at("mode").get<std::uint8_t>();
  f.manip_yaw = j.at("manip_yaw").get<float>();
  f.manip_jaw = j.at("manip_jaw").get<float>();
  f.faults = j.at("faults").get<std::uint8_t>();
  return f;
}

ParsedRequest parse_request(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw BridgeRequestError("malformed", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw BridgeRequestError("malformed", "message must be a JSON object");
  if (!j.contains("type") || !j.at("type").is_string()) throw BridgeRequestError("malformed", "missing string field 'type'");
  ParsedRequest out{PingRequest{}, std::nullopt};
  if (j.contains("seq")) {
    if (!j.at("seq").is_number_integer()) throw BridgeRequestError("malformed", "'seq' must be an integer");
    out.seq = j.at("seq").get<std::int64_t>();
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "joystick") {
    const auto a = number_array<6>(j, "axes");
    JoystickWrench w;
    for (std::size_t i = 0; i < 6; ++i) w.axes[i] = static_cast<float>(a[i]);
    out.request = Command{w};
  } else if (type == "set_mode") {
    const double m = number(j, "mode");
    if (m != 0.0 && m != 1.0 && m != 2.0) throw BridgeRequestError("invalid_value", "mode must be 0, 1 or 2");
    out.request = Command{SetMode{static_cast<std::uint8_t>(m)}};
  } else if (type == "set_hold") {
    if (!j.contains("pose") || !j.at("pose").is_object()) throw BridgeRequestError("malformed", "missing object 'pose'");
    SetHoldSetpoint s;
    for (std::size_t i = 0; i < 6; ++i) s.pose[i] = number(j.at("pose"), kPoseKeys[i]);
    out.request = Command{s};
  } else if (type == "manipulator") {
    out.request = Command{ManipulatorCmd{static_cast<float>(number(j, "yaw_rate")), static_cast<float>(number(j, "jaw_rate"))}};
  } else if (type == "trim") {
    out.request = Command{TrimFeedForward{number_array<6>(j, "wrench")}};
  } else if (type == "estop") {
    out.request = Command{EmergencyStop{}};
  } else if (type == "calibrate") {
    out.request = CalibrateRequest{number_array<2>(j, "p1"), number_array<2>(j, "p2"), number(j, "length_m")};
  } else if (type == "measure") {
    MeasureRequest m{number_array<2>(j, "p1"), number_array<2>(j, "p2"), true};
    if (j.contains("subpixel")) {
      if (!j.at("subpixel").is_boolean()) throw BridgeRequestError("malformed", "'subpixel' must be a boolean");
      m.subpixel = j.at("subpixel").get<bool>();
    }
    out.request = m;
  } else if (type == "get_frame") {
    out.request = GetFrameRequest{};
  } else if (type == "ping") {
    out.request = PingRequest{};
  } else {
    throw BridgeRequestError("unknown_type", "unknown message type '" + type + "'");
  }
  return out;
}

json command_to_json(const Command& c) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, JoystickWrench>) {
          json axes = json::array();
          for (float a : v.axes) axes.push_back(static_cast<double>(a));
          return {{"type", "joystick"}, {"axes", axes}};
        } else if constexpr (std::is_same_v<T, SetMode>) {
          return {{"type", "set_mode"}, {"mode", v.mode}};
        } else if constexpr (std::is_same_v<T, SetHoldSetpoint>) {
          json pose;
          for (std::size_t i = 0; i < 6; ++i) pose[kPoseKeys[i]] = v.pose[i];
          return {{"type", "set_hold"}, {"pose", pose}};
        } else if constexpr (std::is_same_v<T, ManipulatorCmd>) {
          return {{"type", "manipulator"},
                  {"yaw_rate", static_cast<double>(v.yaw_rate)},
                  {"jaw_rate", static_cast<double>(v.jaw_rate)}};
        } else if constexpr (std::is_same_v<T, TrimFeedForward>) {
          return {{"type", "trim"}, {"wrench", v.wrench}};
        } else {
          return {{"type", "estop"}};
        }
      },
      c);
}

json error_reply(const std::string& code, const std::string& detail, std::optional<std::int64_t> seq) {
  json j{{"error", code}, {"detail", detail}};
  if (seq) j["seq"] = *seq;
  return j;
}

}  // namespace scorpion::telemetry
