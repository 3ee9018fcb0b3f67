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

#include "mission/script.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "common/error.hpp"

namespace scorpion::mission {

namespace {

constexpr const char* kAxisNames[] = {"x", "y", "z", "roll", "pitch", "yaw"};
constexpr const char* kModeNames[] = {"manual", "incremental", "stationkeep"};

class LineParser {
 public:
  LineParser(std::vector<std::string> tokens, std::string where) : tokens_(std::move(tokens)), where_(std::move(where)) {}

  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(where_ + ": " + what); }

  bool done() const { return pos_ >= tokens_.size(); }
  const std::string& peek() const { return tokens_[pos_]; }

  std::string word(const char* what) {
    if (done()) fail(std::string("expected ") + what);
    return tokens_[pos_++];
  }

  bool accept(const char* keyword) {
    if (!done() && tokens_[pos_] == keyword) {
      ++pos_;
      return true;
    }
    return false;
  }

  double number(const char* what) {
    const std::string t = word(what);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(v))
      fail(std::string("expected ") + what + ", got '" + t + "'");
    return v;
  }

  std::uint64_t integer(const char* what) {
    const std::string t = word(what);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) fail(std::string("expected ") + what + ", got '" + t + "'");
    return v;
  }

  template <std::size_t N, class T>
  std::array<T, N> numbers(const char* what) {
    std::array<T, N> out{};
    for (auto& x : out) x = static_cast<T>(number(what));
    return out;
  }

  void end() const {
    if (!done()) fail("unexpected '" + tokens_[pos_] + "'");
  }

 private:
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
  std::string where_;
};

int parse_axis(LineParser& p) {
  const std::string a = p.word("axis");
  for (int i = 0; i < 6; ++i)
    if (a == kAxisNames[i]) return i;
  p.fail("unknown axis '" + a + "' (expected x, y, z, roll, pitch or yaw)");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::uint64_t action_tick(double time_s, double dt) {
  return static_cast<std::uint64_t>(std::ceil(time_s / dt - 1e-9 / dt));
}

std::uint64_t mission_ticks(const MissionScript& script, double dt) {
  return static_cast<std::uint64_t>(std::llround(script.duration_s / dt));
}

MissionScript parse_script(const std::string& text, const std::string& source) {
  MissionScript s;
  bool have_duration = false;
  double last_time = 0.0;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tokens;
    for (std::string t; ls >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;
    LineParser p(std::move(tokens), source + ":" + std::to_string(line_no));
    const std::string head = p.word("statement");
    if (head == "name") {
      s.name = p.word("name");
    } else if (head == "duration") {
      s.duration_s = p.number("duration in seconds");
      if (!(s.duration_s > 0)) p.fail("duration must be positive");
      have_duration = true;
    } else if (head == "seed") {
      s.seed = p.integer("seed");
    } else if (head == "limit") {
      const std::string kind = p.word("limit kind");
      const double v = p.number("limit in metres");
      if (!(v > 0)) p.fail("limit must be positive");
      if (kind == "hold") {
        s.hold_limit_m = v;
      } else if (kind == "drift") {
        s.drift_limit_m = v;
      } else {
        p.fail("unknown limit '" + kind + "' (expected hold or drift)");
      }
    } else if (head == "settle") {
      s.settle_s = p.number("settling allowance in seconds");
      if (s.settle_s < 0) p.fail("settle must not be negative");
    } else if (head == "informational") {
      s.informational = true;
    } else if (head == "at") {
      TimedAction a;
      a.line = line_no;
      a.time_s = p.number("action time in seconds");
      if (a.time_s < 0) p.fail("action time must not be negative");
      if (a.time_s < last_time) p.fail("action times must be non-decreasing");
      last_time = a.time_s;
      const std::string verb = p.word("action");
      if (verb == "mode") {
        const std::string m = p.word("mode");
        int mode = -1;
        for (int i = 0; i < 3; ++i)
          if (m == kModeNames[i] || m == std::to_string(i)) mode = i;
        if (mode < 0) p.fail("unknown mode '" + m + "' (expected manual, incremental or stationkeep)");
        a.payload = telemetry::Command{telemetry::SetMode{static_cast<std::uint8_t>(mode)}};
      } else if (verb == "joystick") {
        a.payload = telemetry::Command{telemetry::JoystickWrench{p.numbers<6, float>("joystick axis")}};
      } else if (verb == "hold") {
        a.payload = telemetry::Command{telemetry::SetHoldSetpoint{p.numbers<6, double>("hold pose component")}};
      } else if (verb == "trim") {
        a.payload = telemetry::Command{telemetry::TrimFeedForward{p.numbers<6, double>("trim wrench component")}};
      } else if (verb == "manipulator") {
        const double yaw = p.number("yaw rate");
        const double jaw = p.number("jaw rate");
        a.payload = telemetry::Command{telemetry::ManipulatorCmd{static_cast<float>(yaw), static_cast<float>(jaw)}};
      } else if (verb == "estop") {
        a.payload = telemetry::Command{telemetry::EmergencyStop{}};
      } else if (verb == "disturb") {
        runtime::Disturbance d;
        const std::string kind = p.word("disturbance kind");
        if (kind == "step") {
          d.kind = runtime::Disturbance::Kind::Step;
        } else if (kind == "sine") {
          d.kind = runtime::Disturbance::Kind::Sine;
        } else {
          p.fail("unknown disturbance kind '" + kind + "' (expected step or sine)");
        }
        d.axis = parse_axis(p);
        d.amplitude = p.number("amplitude");
        if (d.kind == runtime::Disturbance::Kind::Sine) {
          d.frequency_hz = p.number("frequency in Hz");
          if (!(d.frequency_hz > 0)) p.fail("frequency must be positive");
        }
        d.start_s = a.time_s;
        while (!p.done()) {
          if (p.accept("until")) {
            d.end_s = p.number("end time in seconds");
            if (!(d.end_s > d.start_s)) p.fail("'until' must be later than the start time");
          } else if (d.kind == runtime::Disturbance::Kind::Sine && p.accept("phase")) {
            d.phase = p.number("phase in radians");
          } else {
            break;
          }
        }
        a.payload = d;
      } else if (verb == "scene") {
        a.payload = SceneAction{p.word("scene name")};
      } else {
        p.fail("unknown action '" + verb + "'");
      }
      s.actions.push_back(std::move(a));
    } else {
      p.fail("unknown statement '" + head + "'");
    }
    p.end();
  }
  if (!have_duration) throw ConfigError(source + ": missing 'duration'");
  for (const auto& a : s.actions)
    if (a.time_s > s.duration_s)
      throw ConfigError(source + ":" + std::to_string(a.line) + ": action time is beyond the mission duration");
  return s;
}

MissionScript load_script(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open mission script");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_script(ss.str(), path.string());
}

std::string format_script(const MissionScript& s) {
  std::ostringstream out;
  out << "name " << s.name << "\n";
  out << "duration " << fmt(s.duration_s) << "\n";
  if (s.seed) out << "seed " << *s.seed << "\n";
  if (s.hold_limit_m) out << "limit hold " << fmt(*s.hold_limit_m) << "\n";
  if (s.drift_limit_m) out << "limit drift " << fmt(*s.drift_limit_m) << "\n";
  out << "settle " << fmt(s.settle_s) << "\n";
  if (s.informational) out << "informational\n";
  for (const auto& a : s.actions) {
    out << "at " << fmt(a.time_s) << " ";
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, telemetry::Command>) {
            std::visit(
                [&](const auto& c) {
                  using C = std::decay_t<decltype(c)>;
                  if constexpr (std::is_same_v<C, telemetry::SetMode>) {
                    out << "mode " << kModeNames[c.mode];
                  } else if constexpr (std::is_same_v<C, telemetry::JoystickWrench>) {
                    out << "joystick";
                    for (float x : c.axes) out << " " << fmt(x);
                  } else if constexpr (std::is_same_v<C, telemetry::SetHoldSetpoint>) {
                    out << "hold";
                    for (double x : c.pose) out << " " << fmt(x);
                  } else if constexpr (std::is_same_v<C, telemetry::TrimFeedForward>) {
                    out << "trim";
                    for (double x : c.wrench) out << " " << fmt(x);
                  } else if constexpr (std::is_same_v<C, telemetry::ManipulatorCmd>) {
                    out << "manipulator " << fmt(c.yaw_rate) << " " << fmt(c.jaw_rate);
                  } else {
                    out << "estop";
                  }
                },
                v);
          } else if constexpr (std::is_same_v<T, runtime::Disturbance>) {
            const bool sine = v.kind == runtime::Disturbance::Kind::Sine;
            out << "disturb " << (sine ? "sine " : "step ") << kAxisNames[v.axis] << " " << fmt(v.amplitude);
            if (sine) out << " " << fmt(v.frequency_hz);
            if (std::isfinite(v.end_s)) out << " until " << fmt(v.end_s);
            if (sine && v.phase != 0.0) out << " phase " << fmt(v.phase);
          } else {
            out << "scene " << v.name;
          }
        },
        a.payload);
    out << "\n";
  }
  return out.str();
}

}  // namespace scorpion::mission
