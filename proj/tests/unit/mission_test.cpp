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

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "common/error.hpp"
#include "doctest.h"
#include "mission/config.hpp"
#include "mission/corpus.hpp"
#include "mission/photosphere.hpp"
#include "mission/scenes.hpp"
#include "mission/script.hpp"
#include "mission/simulate.hpp"
#include "mission/tools.hpp"
#include "net/udp.hpp"
#include "telemetry/csv.hpp"

#include <thread>

using namespace scorpion;
using namespace scorpion::mission;

namespace {

const std::filesystem::path kRepo = SCORPION_SOURCE_DIR;

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("scorpion_mission_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_error(const std::string& text) {
  try {
    parse_config(text, "cfg.yaml");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string script_error(const std::string& text) {
  try {
    parse_script(text, "m.mission");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("committed configuration equals the built-in defaults") {
  const auto cfg = load_config(kRepo / "config/scorpion.yaml");
  CHECK(dump_config(cfg) == dump_config(Config{}));
}

TEST_CASE("configuration dump round trips") {
  auto cfg = Config{};
  cfg.session.dt = 0.01;
  cfg.session.seed = 99;
  cfg.session.controller.gains.kp[2] = 123.25;
  cfg.telemetry.rate_hz = 12.5;
  const auto text = dump_config(cfg);
  CHECK(dump_config(parse_config(text, "dump.yaml")) == text);
}

TEST_CASE("configuration errors carry file and line") {
  CHECK(config_error("simulation: {dt: 0.02}\n").find("config_version") != std::string::npos);
  CHECK(config_error("config_version: 2\n").find("cfg.yaml") == 0);
  const auto unknown = config_error("config_version: 1\nvehicle:\n  mass: 17\n  masss: 3\n");
  CHECK(unknown.find("cfg.yaml:4") == 0);
  CHECK(unknown.find("masss") != std::string::npos);
  CHECK(config_error("config_version: 1\nsimulation:\n  dt: fast\n").find("cfg.yaml:3") == 0);
  CHECK(config_error("config_version: 1\nsimulation:\n  dt: -1\n").find("cfg.yaml:3") == 0);
  // Four coplanar horizontal thrusters cannot actuate heave, roll or pitch.
  const auto rank = config_error(
      "config_version: 1\nthrusters:\n"
      "  - {position: [0.2, 0.15, 0], direction: [0.7071067811865476, -0.7071067811865476, 0], f_min: -50, f_max: 60}\n"
      "  - {position: [0.2, -0.15, 0], direction: [0.7071067811865476, 0.7071067811865476, 0], f_min: -50, f_max: 60}\n"
      "  - {position: [-0.2, 0.15, 0], direction: [0.7071067811865476, 0.7071067811865476, 0], f_min: -50, f_max: 60}\n"
      "  - {position: [-0.2, -0.15, 0], direction: [0.7071067811865476, -0.7071067811865476, 0], f_min: -50, f_max: 60}\n");
  CHECK(rank.find("cfg.yaml") == 0);
  CHECK(rank.find("heave") != std::string::npos);
  CHECK(config_error("config_version: 1\ntelemetry:\n  rate_hz: 80\n").find("cfg.yaml:3") == 0);
}

TEST_CASE("script parsing covers every statement") {
  const auto s = parse_script(
      "# comment\n"
      "name demo\nduration 30\nseed 4\nlimit hold 0.2\nlimit drift 1.5\nsettle 5\ninformational\n"
      "at 0 scene anode\n"
      "at 0 mode stationkeep\n"
      "at 1 joystick 0.1 0 0 0 0 -0.2\n"
      "at 2 hold 1 2 3 0 0 0.5\n"
      "at 3 trim 0 0 1 0 0 0\n"
      "at 4 manipulator 0.3 -0.1\n"
      "at 5 disturb step y 10 until 8\n"
      "at 6 disturb sine yaw 2 0.5 phase 1.5\n"
      "at 7 mode 1\n"
      "at 29.5 estop\n",
      "demo.mission");
  CHECK(s.name == "demo");
  CHECK(s.duration_s == 30.0);
  CHECK(s.seed == 4u);
  CHECK(s.hold_limit_m == 0.2);
  CHECK(s.drift_limit_m == 1.5);
  CHECK(s.settle_s == 5.0);
  CHECK(s.informational);
  REQUIRE(s.actions.size() == 10);
  CHECK(std::get<SceneAction>(s.actions[0].payload).name == "anode");
  CHECK(s.actions[0].line == 9);
  const auto& d = std::get<runtime::Disturbance>(s.actions[7].payload);
  CHECK(d.start_s == 6.0);
  CHECK(d.frequency_hz == 0.5);
  CHECK(d.phase == 1.5);
  CHECK(std::holds_alternative<telemetry::EmergencyStop>(std::get<telemetry::Command>(s.actions[9].payload)));
  CHECK(parse_script(format_script(s), "again").actions.size() == s.actions.size());
  CHECK(format_script(parse_script(format_script(s), "again")) == format_script(s));
}

TEST_CASE("committed missions round trip through the canonical form") {
  for (const auto dir : {"missions/battery", "missions/examples"})
    for (const auto& e : std::filesystem::directory_iterator(kRepo / dir)) {
      if (e.path().extension() != ".mission") continue;
      CAPTURE(e.path());
      const auto s = load_script(e.path());
      CHECK(format_script(parse_script(format_script(s), "canonical")) == format_script(s));
    }
}

TEST_CASE("script errors name the line") {
  CHECK(script_error("name x\n").find("duration") != std::string::npos);
  CHECK(script_error("duration 10\nat 1 fly\n").find("m.mission:2:") == 0);
  CHECK(script_error("duration 10\nat 5 estop\nat 4 estop\n").find("m.mission:3: action times must be non-decreasing") == 0);
  CHECK(script_error("duration 10\nat 11 estop\n").find("m.mission:2:") == 0);
  CHECK(script_error("duration 10\nat 1 mode hover\n").find("m.mission:2: unknown mode") == 0);
  CHECK(script_error("duration 10\nat 1 disturb step w 3\n").find("unknown axis 'w'") != std::string::npos);
  CHECK(script_error("duration 10\nat 1 joystick 1 2 3\n").find("m.mission:2:") == 0);
  CHECK(script_error("duration 10\nat 1 joystick 1 0 0 0 0 0 7\n").find("unexpected '7'") != std::string::npos);
  CHECK(script_error("duration 10\nat 2 disturb step x 1 until 1\n").find("until") != std::string::npos);
  CHECK(script_error("duration 10\nlimit speed 3\n").find("m.mission:2: unknown limit") == 0);
  CHECK(script_error("duration -1\n").find("m.mission:1: duration must be positive") == 0);
  CHECK(script_error("duration 10\nwarp 9\n").find("m.mission:2: unknown statement") == 0);
}

TEST_CASE("actions land on the first tick at or after their time") {
  CHECK(action_tick(0.0, 0.02) == 0);
  CHECK(action_tick(0.02, 0.02) == 1);
  CHECK(action_tick(0.03, 0.02) == 2);
  CHECK(action_tick(5.0, 0.02) == 250);
  CHECK(action_tick(0.1, 0.1) == 1);
  CHECK(action_tick(0.3, 0.1) == 3);
  MissionScript s;
  s.duration_s = 120.0;
  CHECK(mission_ticks(s, 0.02) == 6000);
}

TEST_CASE("idle mission stays in place") {
  const auto cfg = load_config(kRepo / "config/scorpion.yaml");
  const auto script = load_script(kRepo / "missions/examples/idle.mission");
  const auto result = run_mission(cfg, script, {scratch("idle"), std::nullopt});
  CHECK(result.report.passed());
  REQUIRE(result.report.metric("max_drift_m"));
  CHECK(*result.report.metric("max_drift_m") < 0.01);
  CHECK(result.ticks == mission_ticks(script, cfg.session.dt));
  const auto frames = telemetry::read_csv_log(result.csv);
  CHECK(frames.size() == result.ticks);
}

TEST_CASE("same seed gives byte-identical logs and a different seed does not") {
  const auto cfg = load_config(kRepo / "config/scorpion.yaml");
  const auto script = load_script(kRepo / "missions/examples/anode_task.mission");
  const auto a = run_mission(cfg, script, {scratch("det_a"), std::nullopt});
  const auto b = run_mission(cfg, script, {scratch("det_b"), std::nullopt});
  const auto c = run_mission(cfg, script, {scratch("det_c"), 8});
  CHECK(slurp(a.csv) == slurp(b.csv));
  CHECK(slurp(a.csv) != slurp(c.csv));
  auto ja = a.report.to_json(), jb = b.report.to_json();
  ja.erase("artifacts");
  jb.erase("artifacts");
  CHECK(ja.dump() == jb.dump());
}

TEST_CASE("the report is reproducible from the logged CSV") {
  const auto cfg = load_config(kRepo / "config/scorpion.yaml");
  const auto script = load_script(kRepo / "missions/battery/10_lateral_step.mission");
  const auto out = scratch("from_csv");
  const auto run = run_mission(cfg, script, {out, std::nullopt});
  const auto again = mission_report(telemetry::read_csv_log(run.csv), script, cfg.session.dt);
  auto logged = run.report.to_json();
  logged.erase("artifacts");
  auto recomputed = again.to_json();
  recomputed.erase("artifacts");
  CHECK(recomputed.dump() == logged.dump());
}

TEST_CASE("hold analysis measures from the disturbance onset") {
  const auto cfg = load_config(kRepo / "config/scorpion.yaml");
  const auto script = parse_script(
      "duration 40\nlimit hold 0.15\nat 2 mode stationkeep\nat 10 disturb step y 10\n", "late.mission");
  const auto run = run_mission(cfg, script, {scratch("late"), std::nullopt});
  const auto h = analyze_hold(telemetry::read_csv_log(run.csv), script, cfg.session.dt);
  CHECK(h.engaged);
  CHECK(h.engage_time_s == doctest::Approx(2.0));
  CHECK(h.reference_time_s == doctest::Approx(10.0));
  CHECK(h.window_samples == static_cast<std::size_t>(std::lround((40.0 - 20.0) / cfg.session.dt)));
  REQUIRE(h.settling_time_s);
  CHECK(*h.settling_time_s < 30.0);
  CHECK(h.max_error_m <= h.peak_error_m);
  CHECK(run.report.passed());
}

TEST_CASE("an emergency stop mid-mission is logged and halts thrust") {
  const auto cfg = load_config(kRepo / "config/scorpion.yaml");
  const auto script = parse_script("duration 6\nat 0 mode manual\nat 1 joystick 0.5 0 0 0 0 0\nat 3 estop\n", "stop");
  const auto run = run_mission(cfg, script, {scratch("estop"), std::nullopt});
  const auto frames = telemetry::read_csv_log(run.csv);
  const auto k = action_tick(3.0, cfg.session.dt);
  REQUIRE(frames.size() > k + 2);
  bool moving = false;
  for (double f : frames[k - 1].thrust) moving = moving || f != 0.0;
  CHECK(moving);
  for (std::size_t i = k + 1; i < frames.size(); ++i)
    for (double f : frames[i].thrust) CHECK(f == 0.0);
}

TEST_CASE("stationkeep battery passes with the doubled case informational") {
  const auto cfg = load_config(kRepo / "config/scorpion.yaml");
  const auto report = run_battery(cfg, kRepo / "missions/battery", scratch("battery"), std::nullopt);
  CHECK(report.passed());
  REQUIRE(report.metric("worst_hold_error_m"));
  CHECK(*report.metric("worst_hold_error_m") <= 0.15);
  bool informational_row = false;
  for (const auto& c : report.criteria) {
    if (c.name.find("double_lateral") != std::string::npos) informational_row = c.informational;
    if (c.name.find("zero: hold") != std::string::npos) CHECK(c.measured < 0.01);
  }
  CHECK(informational_row);
}

TEST_CASE("unknown scene names are rejected before running") {
  const auto cfg = load_config(kRepo / "config/scorpion.yaml");
  const auto script = parse_script("duration 1\nat 0 scene reef\n", "scene.mission");
  CHECK_THROWS_AS(mission_session_config(cfg, script, std::nullopt), ConfigError);
}

TEST_CASE("corpus recipes parse and reject unknown keys") {
  const auto r = load_recipe(kRepo / "corpora/markers_noisy.yaml");
  CHECK(r.kind == CorpusRecipe::Kind::Markers);
  CHECK(r.noise.salt_density == 0.01);
  CHECK(r.noise.hue_jitter_deg == 4.0);
  CHECK(r.min_marker_accuracy == 0.94);
  const auto len = load_recipe(kRepo / "corpora/length.yaml");
  CHECK(len.frames == 20);
  CHECK(len.intrinsics.k1 == -0.05);
  CHECK(len.max_length_error == 0.05);
  try {
    parse_recipe("corpus_version: 1\nkind: markers\nframez: 3\n", "r.yaml");
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("r.yaml:3") == 0);
  }
  CHECK_THROWS_AS(parse_recipe("kind: markers\n", "r.yaml"), ConfigError);
  CHECK(is_sweep_recipe(kRepo / "corpora/sweep.yaml"));
  CHECK_FALSE(is_sweep_recipe(kRepo / "corpora/length.yaml"));
}

TEST_CASE("committed bands file matches the standard bands") {
  const auto bands = load_bands(kRepo / "config/bands.yaml");
  const auto standard = standard_bands();
  REQUIRE(bands.size() == standard.size());
  for (std::size_t i = 0; i < bands.size(); ++i) {
    CHECK(bands[i].label == standard[i].label);
    CHECK(bands[i].range.hue_lo == standard[i].range.hue_lo);
    CHECK(bands[i].range.hue_hi == standard[i].range.hue_hi);
    CHECK(bands[i].range.sat_lo == standard[i].range.sat_lo);
    CHECK(bands[i].range.val_lo == standard[i].range.val_lo);
  }
}

TEST_CASE("generated corpus is deterministic and truth survives the round trip") {
  auto r = load_recipe(kRepo / "corpora/markers_clean.yaml");
  r.frames = 3;
  const auto dir_a = scratch("corpus_a"), dir_b = scratch("corpus_b");
  const auto a = generate_corpus(r, dir_a);
  generate_corpus(r, dir_b);
  for (const auto& f : a.frames) CHECK(slurp(dir_a / f.file) == slurp(dir_b / f.file));
  CHECK(slurp(dir_a / "truth.jsonl") == slurp(dir_b / "truth.jsonl"));
  const auto back = read_corpus(dir_a);
  REQUIRE(back.frames.size() == 3);
  CHECK(back.warnings.empty());
  CHECK(back.recipe.seed == r.seed);
  for (std::size_t i = 0; i < 3; ++i) {
    REQUIRE(back.frames[i].truth.size() == a.frames[i].truth.size());
    for (std::size_t j = 0; j < a.frames[i].truth.size(); ++j) {
      CHECK(back.frames[i].truth[j].label == a.frames[i].truth[j].label);
      CHECK(back.frames[i].truth[j].box == a.frames[i].truth[j].box);
      CHECK(back.frames[i].truth[j].marker == a.frames[i].truth[j].marker);
    }
  }
  int markers = 0;
  for (const auto& g : a.frames[0].truth) markers += g.marker ? 1 : 0;
  CHECK(markers == r.markers_per_frame);
}

TEST_CASE("vision evaluation skips frames without truth") {
  auto r = load_recipe(kRepo / "corpora/markers_clean.yaml");
  r.frames = 4;
  const auto dir = scratch("skip");
  generate_corpus(r, dir);
  // Drop the last truth record.
  auto truth = slurp(dir / "truth.jsonl");
  truth.erase(truth.rfind('\n', truth.size() - 2) + 1);
  std::ofstream(dir / "truth.jsonl") << truth;
  const auto report = evaluate_corpus(dir, standard_bands(), dir / "eval");
  CHECK(report.metric("frames_evaluated") == 3.0);
  REQUIRE(report.notes.size() == 1);
  CHECK(report.notes[0].find("frames/003.png") != std::string::npos);
  CHECK(report.metric("marker_accuracy") == 1.0);
  CHECK(report.passed());
  const auto frames_csv = slurp(dir / "eval/frames.csv");
  CHECK(std::count(frames_csv.begin(), frames_csv.end(), '\n') == 4);
}

TEST_CASE("length evaluation calibrates on the reference bar") {
  auto r = load_recipe(kRepo / "corpora/length.yaml");
  r.frames = 3;
  const auto dir = scratch("length");
  generate_corpus(r, dir);
  const auto report = evaluate_corpus(dir, standard_bands(), dir / "eval");
  CHECK(report.metric("length_samples") == 3.0);
  REQUIRE(report.metric("max_length_error_pct"));
  CHECK(*report.metric("max_length_error_pct") < 5.0);
  CHECK(report.passed());
}

TEST_CASE("photosphere from a generated sweep") {
  auto r = load_sweep_recipe(kRepo / "corpora/sweep.yaml");
  r.width = 320;
  r.height = 240;
  r.canvas_height = 128;
  const auto dir = scratch("sweep");
  generate_sweep(r, dir);
  const auto a = run_photosphere(dir, dir / "manifest.yaml", dir / "a");
  const auto b = run_photosphere(dir, dir / "manifest.yaml", dir / "b");
  CHECK(a.passed());
  CHECK(a.metric("refined_pairs") == 11.0);
  CHECK(slurp(dir / "a/panorama.png") == slurp(dir / "b/panorama.png"));
  CHECK(slurp(dir / "a/weights.png") == slurp(dir / "b/weights.png"));
  const auto yaws = slurp(dir / "a/yaws.csv");
  CHECK(std::count(yaws.begin(), yaws.end(), '\n') == 13);
}

TEST_CASE("photosphere with a missing sector names the gap") {
  auto r = load_sweep_recipe(kRepo / "corpora/sweep.yaml");
  r.width = 320;
  r.height = 240;
  r.yaw_noise_deg = 0.0;
  r.correspondences = 0;
  r.omit = {5, 6};
  const auto dir = scratch("gap");
  generate_sweep(r, dir);
  const auto report = run_photosphere(dir, dir / "manifest.yaml", dir / "out");
  CHECK_FALSE(report.passed());
  REQUIRE(report.notes.size() == 1);
  CHECK(report.notes[0] == "coverage gap [150°,180°)");
  CHECK_FALSE(std::filesystem::exists(dir / "out/panorama.png"));
}

TEST_CASE("allocation instances default to the configured vehicle") {
  const auto cfg = load_config(kRepo / "config/scorpion.yaml");
  const auto p = parse_allocation_instance("tau: [10, 0, 0, 0, 0, 2]\n", "i.yaml", cfg.session);
  CHECK(p.b.rows() == 6);
  CHECK(p.b.cols() == 8);
  const auto r = alloc::allocate(p);
  const auto dump = allocation_dump(p, r);
  CHECK(dump["thrust"].size() == 8);
  CHECK(dump["wrench"][0].get<double>() == doctest::Approx(10.0).epsilon(1e-4));
  CHECK(dump["saturated"].empty());

  const auto toy = parse_allocation_instance(
      "b: [[1, 1], [0, 1]]\ntau: [5, 1]\nweights: [1, 1]\nlower: [-1, -1]\nupper: [2, 2]\nepsilon: 0\n", "toy.yaml",
      cfg.session);
  CHECK(toy.b.cols() == 2);
  const auto t = alloc::allocate(toy);
  CHECK(t.thrust[0] == doctest::Approx(2.0));
  CHECK(t.thrust[1] == doctest::Approx(2.0));

  auto err = [&](const std::string& text) {
    try {
      parse_allocation_instance(text, "i.yaml", cfg.session);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(err("b: [[1, 1]]\ntau: [1]\n").find("i.yaml:1") == 0);
  CHECK(err("tau: [1, 2]\n").find("i.yaml") == 0);
  CHECK(err("tau: [1, 0, 0, 0, 0, 0]\nweights: [1, 1, 1, 1, 1, -1]\n").find("i.yaml") == 0);
  CHECK(err("tau: [1, 0, 0, 0, 0, 0]\nbogus: 1\n").find("i.yaml:2") == 0);
}

TEST_CASE("replay then re-log reproduces the CSV") {
  const auto cfg = load_config(kRepo / "config/scorpion.yaml");
  const auto script = parse_script("duration 2\nat 0 mode manual\nat 0.5 joystick 0.2 0.1 0 0 0 0.3\n", "r.mission");
  const auto run = run_mission(cfg, script, {scratch("replay"), std::nullopt});
  net::TelemetryReceiver receiver;
  std::vector<std::string> rows;
  std::thread reader([&] {
    while (auto f = receiver.receive(std::chrono::milliseconds(1000))) rows.push_back(telemetry::format_csv_row(*f));
  });
  ReplayOptions opt;
  opt.port = receiver.port();
  opt.speed = 20.0;
  const auto sent = replay_log(run.csv, opt);
  reader.join();
  CHECK(sent == run.ticks);
  std::string relog = std::string(telemetry::kCsvHeader) + "\n";
  for (const auto& r : rows) relog += r + "\n";
  CHECK(relog == slurp(run.csv));
}

TEST_CASE("replay of an empty log sends nothing and a bad row is named") {
  const auto dir = scratch("replay_bad");
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "empty.csv") << telemetry::kCsvHeader << "\n";
  ReplayOptions opt;
  opt.port = 9;
  CHECK(replay_log(dir / "empty.csv", opt) == 0);
  std::ofstream(dir / "bad.csv") << telemetry::kCsvHeader << "\n" << "1,2,3\n";
  try {
    replay_log(dir / "bad.csv", opt);
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
}

TEST_CASE("detection evaluation reproduces the exact mAP fixtures") {
  int fixtures = 0;
  for (const auto& e : std::filesystem::directory_iterator(std::filesystem::path(SCORPION_FIXTURE_DIR) / "map")) {
    if (e.path().extension() != ".json") continue;
    CAPTURE(e.path());
    ++fixtures;
    CHECK(map_fixture_deviation(load_map_fixture(e.path())) <= 1e-12);
  }
  CHECK(fixtures == 4);
}
