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

// Writes one JSON message per line for every message kind the bridge emits
// or accepts, produced by the real codec and session backend.
#include <fstream>
#include <iostream>

#include "net/bridge.hpp"
#include "net/session_backend.hpp"
#include "runtime/session.hpp"

using namespace scorpion;

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: bridge_samples OUT.jsonl\n";
    return 2;
  }
  std::ofstream out(argv[1]);
  runtime::SessionConfig cfg;
  vision::Scene scene;
  scene.objects.push_back({"red", vision::Shape::TMarker, {3.0, 0.0, 2.0}, 0.4, 0.4, 0.0, {220, 30, 30}});
  cfg.scene = scene;
  runtime::Session session(cfg);
  for (int i = 0; i < 3; ++i) session.tick();
  net::SessionBackend backend(session);

  out << telemetry::frame_to_json(session.snapshot()).dump() << "\n";
  out << nlohmann::json{{"type", "hello"}, {"schema", telemetry::kBridgeSchemaVersion}}.dump() << "\n";
  const std::pair<const char*, bool> requests[] = {
      {R"({"type":"ping","seq":1})", true},
      {R"({"type":"set_mode","mode":2,"seq":2})", true},
      {R"({"type":"get_frame","seq":3})", true},
      {R"({"type":"measure","p1":[300,240],"p2":[340,240]})", true},
      {R"({"type":"calibrate","p1":[300,240],"p2":[340,240],"length_m":0.1,"seq":4})", true},
      {R"({"type":"measure","p1":[300,240],"p2":[360,240],"subpixel":true,"seq":5})", true},
      {R"({"type":"warp","seq":6})", false},
      {R"({"type":"set_mode","mode":5})", false},
      {"{not json", false},
  };
  for (const auto& [text, conforming] : requests) {
    if (conforming) out << nlohmann::json::parse(text).dump() << "\n";
    out << net::handle_bridge_message(backend, text).dump() << "\n";
  }
  telemetry::Command commands[] = {
      telemetry::JoystickWrench{{0.1f, 0, 0, 0, 0, -1}}, telemetry::SetMode{1},
      telemetry::SetHoldSetpoint{{1, 2, 3, 0, 0, 0.5}}, telemetry::ManipulatorCmd{0.5f, -0.5f},
      telemetry::TrimFeedForward{{0, 0, 1, 0, 0, 0}},   telemetry::EmergencyStop{}};
  for (const auto& c : commands) out << telemetry::command_to_json(c).dump() << "\n";
  return 0;
}
