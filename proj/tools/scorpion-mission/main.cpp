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

#include <scorpion/scorpion.h>

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <optional>
#include <string>

#include "CLI11.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCriterion = 1;
constexpr int kExitUsage = 2;

scorpion_stop* g_stop = nullptr;

extern "C" void on_signal(int) { scorpion_stop_trigger(g_stop); }

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  int log_level = 2;
};

/// Owns a library handle and frees it with `Free`.
template <class T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(ptr); }
  T** out() { return &ptr; }
};

using Config = Handle<scorpion_config, scorpion_config_free>;
using Report = Handle<scorpion_report, scorpion_report_free>;

int error_exit(scorpion_status status) {
  std::fprintf(stderr, "error (%s): %s\n", scorpion_status_name(status), scorpion_last_error());
  return kExitUsage;
}

int print_string(scorpion_status status, char* text) {
  if (status != SCORPION_OK) return error_exit(status);
  std::fputs(text, stdout);
  if (*text && text[std::strlen(text) - 1] != '\n') std::fputc('\n', stdout);
  scorpion_string_free(text);
  return kExitPass;
}

int finish(scorpion_status status, const Report& report) {
  if (status != SCORPION_OK) return error_exit(status);
  char* summary = nullptr;
  if (const auto s = scorpion_report_summary(report.ptr, &summary); s != SCORPION_OK) return error_exit(s);
  print_string(SCORPION_OK, summary);
  return scorpion_report_passed(report.ptr) ? kExitPass : kExitCriterion;
}

scorpion_status load_config(const Globals& g, Config& config) {
  return g.config_path.empty() ? scorpion_config_default(config.out())
                               : scorpion_config_load(g.config_path.c_str(), config.out());
}

std::string out_dir(const Globals& g, const char* command) {
  return g.out.empty() ? (std::filesystem::path("out") / command).string() : g.out;
}

const std::uint64_t* seed_ptr(const Globals& g) { return g.seed ? &*g.seed : nullptr; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scorpion ROV digital twin: missions, acceptance experiments, vision and photosphere tools"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_path, "YAML configuration (built-in defaults when omitted)")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Seed overriding the script and configuration");
  app.add_option("--out", g.out, "Output directory (default out/<subcommand>)");
  app.add_option("--log-level", g.log_level, "0 trace .. 6 off")->check(CLI::Range(0, 6));

  std::string mission;
  bool live = false, no_bridge = false;
  double speed = 1.0, duration = 0.0;
  std::uint16_t telemetry_port = 0, command_port = 0, bridge_port = 0;
  auto* simulate = app.add_subcommand("simulate", "Run a mission script headless, or against the wall clock with --live");
  simulate->add_option("mission", mission, "Mission script")->check(CLI::ExistingFile);
  simulate->add_flag("--live", live, "Pace to the wall clock and open telemetry, command and bridge endpoints");
  simulate->add_option("--speed", speed, "Simulated seconds per wall-clock second (live)")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--duration", duration, "Live run length in seconds (default: script duration or until Ctrl-C)")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--telemetry-port", telemetry_port, "UDP telemetry port (live)");
  simulate->add_option("--command-port", command_port, "TCP command port (live)");
  simulate->add_option("--bridge-port", bridge_port, "WebSocket bridge port (live)");
  simulate->add_flag("--no-bridge", no_bridge, "Do not open the WebSocket bridge (live)");

  std::string battery = std::string(SCORPION_DATA_DIR) + "/missions/battery";
  auto* stationkeep = app.add_subcommand("stationkeep-test", "Run the station-keeping disturbance battery");
  stationkeep->add_option("--battery", battery, "Directory of .mission files")->check(CLI::ExistingDirectory);

  std::string corpus, bands;
  auto* vision = app.add_subcommand("vision-eval", "Evaluate marker detection, length measurement and detection mAP");
  vision->add_option("corpus", corpus, "Corpus directory")->required()->check(CLI::ExistingDirectory);
  vision->add_option("--bands", bands, "HSV bands YAML (built-in red/blue/yellow when omitted)")
      ->check(CLI::ExistingFile);

  std::string recipe;
  auto* gen = app.add_subcommand("gen-corpus", "Render a synthetic corpus from a recipe");
  gen->add_option("recipe", recipe, "Recipe YAML")->required()->check(CLI::ExistingFile);

  std::string frames, manifest;
  auto* photo = app.add_subcommand("photosphere", "Composite a yaw sweep into an equirectangular panorama");
  photo->add_option("frames", frames, "Directory holding the frames")->required()->check(CLI::ExistingDirectory);
  photo->add_option("--manifest", manifest, "Manifest (default <frames>/manifest.yaml)")->check(CLI::ExistingFile);

  std::string csv, host = "127.0.0.1";
  double replay_speed = 1.0;
  std::uint16_t replay_port = 0;
  auto* replay = app.add_subcommand("replay", "Re-publish a telemetry CSV log over UDP");
  replay->add_option("log", csv, "Telemetry CSV")->required()->check(CLI::ExistingFile);
  replay->add_option("--speed", replay_speed, "Playback rate multiplier")->check(CLI::PositiveNumber);
  replay->add_option("--host", host, "Destination host");
  replay->add_option("--telemetry-port", replay_port, "Destination UDP port (default SCORPION_TELEM_PORT or 14550)");

  std::string instance;
  auto* alloc = app.add_subcommand("alloc-debug", "Solve one thrust allocation instance and dump the result");
  alloc->add_option("instance", instance, "Instance YAML")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  if (simulate->parsed() && !live && mission.empty()) {
    std::fprintf(stderr, "simulate: a mission script is required without --live\n");
    return kExitUsage;
  }

  if (const auto s = scorpion_set_log_level(g.log_level); s != SCORPION_OK) return error_exit(s);
  Handle<scorpion_stop, scorpion_stop_free> stop;
  if (const auto s = scorpion_stop_new(stop.out()); s != SCORPION_OK) return error_exit(s);
  g_stop = stop.ptr;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  Config config;
  Report report;
  if (simulate->parsed()) {
    if (const auto s = load_config(g, config); s != SCORPION_OK) return error_exit(s);
    if (!live)
      return finish(scorpion_simulate(config.ptr, mission.c_str(), out_dir(g, "simulate").c_str(), seed_ptr(g),
                                      report.out()),
                    report);
    scorpion_live_options opt;
    scorpion_live_options_init(&opt);
    opt.speed = speed;
    opt.duration_s = duration;
    opt.telemetry_port = telemetry_port;
    opt.command_port = command_port;
    opt.bridge_port = bridge_port;
    opt.bridge = no_bridge ? 0 : 1;
    opt.stop = stop.ptr;
    return finish(scorpion_simulate_live(config.ptr, mission.empty() ? nullptr : mission.c_str(),
                                         out_dir(g, "simulate").c_str(), seed_ptr(g), &opt, report.out()),
                  report);
  }
  if (stationkeep->parsed()) {
    if (const auto s = load_config(g, config); s != SCORPION_OK) return error_exit(s);
    return finish(scorpion_stationkeep_test(config.ptr, battery.c_str(), out_dir(g, "stationkeep-test").c_str(),
                                            seed_ptr(g), report.out()),
                  report);
  }
  if (vision->parsed())
    return finish(scorpion_vision_eval(corpus.c_str(), bands.empty() ? nullptr : bands.c_str(),
                                       out_dir(g, "vision-eval").c_str(), report.out()),
                  report);
  if (gen->parsed()) {
    std::size_t n = 0;
    const auto dir = out_dir(g, "gen-corpus");
    if (const auto s = scorpion_generate_corpus(recipe.c_str(), dir.c_str(), &n); s != SCORPION_OK)
      return error_exit(s);
    std::printf("wrote %zu frames to %s\n", n, dir.c_str());
    return kExitPass;
  }
  if (photo->parsed())
    return finish(scorpion_photosphere(frames.c_str(), manifest.empty() ? nullptr : manifest.c_str(),
                                       out_dir(g, "photosphere").c_str(), g.seed.value_or(0), report.out()),
                  report);
  if (replay->parsed()) {
    std::uint64_t sent = 0;
    const auto s = scorpion_replay(csv.c_str(), host.c_str(), replay_port, replay_speed, stop.ptr, &sent);
    if (s != SCORPION_OK) return error_exit(s);
    std::printf("replayed %llu frames to %s\n", static_cast<unsigned long long>(sent), host.c_str());
    return kExitPass;
  }
  if (alloc->parsed()) {
    if (const auto s = load_config(g, config); s != SCORPION_OK) return error_exit(s);
    char* json = nullptr;
    const auto s = scorpion_alloc_debug(config.ptr, instance.c_str(), &json);
    return print_string(s, json);
  }
  return kExitUsage;
}
