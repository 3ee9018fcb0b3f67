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

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "scorpion/scorpion.h"

namespace {

const std::filesystem::path kRepo = SCORPION_SOURCE_DIR;

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("scorpion_capi_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string take(char* text) {
  std::string s = text ? text : "";
  scorpion_string_free(text);
  return s;
}

std::vector<std::uint8_t> from_hex(const std::string& hex) {
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i + 1 < hex.size(); i += 2) out.push_back(std::stoi(hex.substr(i, 2), nullptr, 16));
  return out;
}

struct Config {
  scorpion_config* ptr = nullptr;
  Config() { REQUIRE(scorpion_config_default(&ptr) == SCORPION_OK); }
  ~Config() { scorpion_config_free(ptr); }
};

}  // namespace

TEST_CASE("status names and argument errors") {
  CHECK(std::string(scorpion_status_name(SCORPION_OK)) == "ok");
  CHECK(std::string(scorpion_status_name(SCORPION_E_CONFIG)) == "config");
  CHECK(std::string(scorpion_version()).size() > 0);
  CHECK(scorpion_config_default(nullptr) == SCORPION_E_ARGUMENT);
  CHECK(std::string(scorpion_last_error()).size() > 0);
  CHECK(scorpion_set_log_level(9) == SCORPION_E_ARGUMENT);
  CHECK(scorpion_set_log_level(4) == SCORPION_OK);
  scorpion_config_free(nullptr);
  scorpion_report_free(nullptr);
  scorpion_session_free(nullptr);
  scorpion_stop_free(nullptr);
  scorpion_string_free(nullptr);
}

TEST_CASE("configuration load, dump and errors") {
  scorpion_config* cfg = nullptr;
  REQUIRE(scorpion_config_load((kRepo / "config/scorpion.yaml").c_str(), &cfg) == SCORPION_OK);
  char* yaml = nullptr;
  REQUIRE(scorpion_config_dump(cfg, &yaml) == SCORPION_OK);
  const auto text = take(yaml);
  CHECK(text.find("config_version: 1") != std::string::npos);
  scorpion_config_free(cfg);

  const auto bad = scratch("bad_config.yaml");
  std::filesystem::create_directories(bad.parent_path());
  FILE* f = std::fopen(bad.c_str(), "w");
  std::fputs("config_version: 1\nvehicle:\n  masss: 3\n", f);
  std::fclose(f);
  cfg = nullptr;
  CHECK(scorpion_config_load(bad.c_str(), &cfg) == SCORPION_E_CONFIG);
  CHECK(cfg == nullptr);
  CHECK(std::string(scorpion_last_error()).find(":3") != std::string::npos);
  CHECK(scorpion_config_load("/nonexistent/scorpion.yaml", &cfg) != SCORPION_OK);
}

TEST_CASE("simulate reports metrics and criteria") {
  Config cfg;
  const auto out = scratch("simulate");
  scorpion_report* report = nullptr;
  REQUIRE(scorpion_simulate(cfg.ptr, (kRepo / "missions/examples/idle.mission").c_str(), out.c_str(), nullptr,
                            &report) == SCORPION_OK);
  CHECK(scorpion_report_passed(report) == 1);
  double ticks = 0;
  CHECK(scorpion_report_metric(report, "logged_ticks", &ticks) == SCORPION_OK);
  CHECK(ticks == 500.0);
  double missing = 0;
  CHECK(scorpion_report_metric(report, "no_such_metric", &missing) == SCORPION_E_NOT_FOUND);
  char* json = nullptr;
  REQUIRE(scorpion_report_json(report, &json) == SCORPION_OK);
  CHECK(take(json).find("\"drift from start\"") != std::string::npos);
  char* summary = nullptr;
  REQUIRE(scorpion_report_summary(report, &summary) == SCORPION_OK);
  CHECK(take(summary).find("result: PASS") != std::string::npos);
  scorpion_report_free(report);
  CHECK(std::filesystem::exists(out / "telemetry.csv"));
  CHECK(std::filesystem::exists(out / "report.json"));

  report = nullptr;
  CHECK(scorpion_simulate(cfg.ptr, "/nonexistent.mission", out.c_str(), nullptr, &report) != SCORPION_OK);
  CHECK(report == nullptr);
}

TEST_CASE("embedded session: stepping, commands and encoding") {
  Config cfg;
  scorpion_session* s = nullptr;
  REQUIRE(scorpion_session_new(cfg.ptr, &s) == SCORPION_OK);

  scorpion_telemetry t{};
  REQUIRE(scorpion_session_step(s, 10, &t) == SCORPION_OK);
  CHECK(t.timestamp_us == 9u * 20000u);
  CHECK(t.faults == 0);

  CHECK(scorpion_session_submit_json(s, "{\"type\":\"set_mode\",\"mode\":2,\"seq\":1}") == SCORPION_OK);
  REQUIRE(scorpion_session_step(s, 2, &t) == SCORPION_OK);
  CHECK(t.mode == 2);
  CHECK(scorpion_session_submit_json(s, "{\"type\":\"ping\",\"seq\":2}") == SCORPION_E_DECODE);
  CHECK(scorpion_session_submit_json(s, "{not json") == SCORPION_E_DECODE);

  CHECK(scorpion_session_submit_json(s, "{\"type\":\"joystick\",\"axes\":[1,0,0,0,0,0],\"seq\":3}") == SCORPION_OK);
  CHECK(scorpion_session_submit_json(s, "{\"type\":\"set_mode\",\"mode\":0,\"seq\":4}") == SCORPION_OK);
  REQUIRE(scorpion_session_step(s, 5, &t) == SCORPION_OK);
  double total = 0;
  for (float v : t.thrust) total += std::abs(v);
  CHECK(total > 0.0);

  const auto estop = from_hex("485901150000640f");
  CHECK(scorpion_session_submit_wire(s, estop.data(), estop.size()) == SCORPION_OK);
  REQUIRE(scorpion_session_step(s, 2, &t) == SCORPION_OK);
  CHECK((t.faults & 0x01) != 0);
  for (float v : t.thrust) CHECK(v == 0.0f);

  auto corrupt = estop;
  corrupt[7] ^= 0x01;
  CHECK(scorpion_session_submit_wire(s, corrupt.data(), corrupt.size()) == SCORPION_E_DECODE);

  size_t need = 0;
  std::uint8_t small[4];
  CHECK(scorpion_session_encode_telemetry(s, small, sizeof small, &need) == SCORPION_E_ARGUMENT);
  REQUIRE(need > 8);
  std::vector<std::uint8_t> buf(need);
  size_t size = 0;
  REQUIRE(scorpion_session_encode_telemetry(s, buf.data(), buf.size(), &size) == SCORPION_OK);
  CHECK(size == need);
  CHECK(buf[0] == 0x48);
  CHECK(buf[1] == 0x59);
  CHECK(buf[3] == 0x01);

  scorpion_telemetry again{};
  REQUIRE(scorpion_session_telemetry(s, &again) == SCORPION_OK);
  CHECK(again.timestamp_us == t.timestamp_us);
  scorpion_session_free(s);
}

TEST_CASE("live run with ephemeral ports") {
  setenv("SCORPION_CMD_PORT", "0", 1);
  setenv("SCORPION_WS_PORT", "0", 1);
  Config cfg;
  scorpion_live_options opt;
  scorpion_live_options_init(&opt);
  CHECK(opt.speed == 1.0);
  CHECK(opt.bridge != 0);
  opt.speed = 20.0;
  opt.duration_s = 2.0;
  const auto out = scratch("live");
  scorpion_report* report = nullptr;
  REQUIRE(scorpion_simulate_live(cfg.ptr, nullptr, out.c_str(), nullptr, &opt, &report) == SCORPION_OK);
  double ticks = 0;
  CHECK(scorpion_report_metric(report, "logged_ticks", &ticks) == SCORPION_OK);
  CHECK(ticks == 100.0);
  scorpion_report_free(report);

  scorpion_stop* stop = nullptr;
  REQUIRE(scorpion_stop_new(&stop) == SCORPION_OK);
  scorpion_stop_trigger(stop);
  CHECK(scorpion_stop_triggered(stop) == 1);
  opt.stop = stop;
  opt.duration_s = 0.0;
  opt.bridge = 0;
  report = nullptr;
  REQUIRE(scorpion_simulate_live(cfg.ptr, nullptr, out.c_str(), nullptr, &opt, &report) == SCORPION_OK);
  CHECK(scorpion_report_metric(report, "logged_ticks", &ticks) == SCORPION_OK);
  CHECK(ticks == 0.0);
  scorpion_report_free(report);
  scorpion_stop_free(stop);

  opt.stop = nullptr;
  opt.speed = 0.0;
  CHECK(scorpion_simulate_live(cfg.ptr, nullptr, out.c_str(), nullptr, &opt, &report) == SCORPION_E_ARGUMENT);
}

TEST_CASE("allocation debug dump") {
  Config cfg;
  char* json = nullptr;
  REQUIRE(scorpion_alloc_debug(cfg.ptr, (kRepo / "missions/alloc/surge.yaml").c_str(), &json) == SCORPION_OK);
  const auto text = take(json);
  CHECK(text.find("\"thrust\"") != std::string::npos);
  CHECK(text.find("\"residual\"") != std::string::npos);
  CHECK(scorpion_alloc_debug(cfg.ptr, (kRepo / "missions/examples/idle.mission").c_str(), &json) ==
        SCORPION_E_CONFIG);
}
