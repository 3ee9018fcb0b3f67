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

#include "scorpion/scorpion.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <filesystem>
#include <new>
#include <optional>
#include <string>

#include "common/error.hpp"
#include "mission/config.hpp"
#include "mission/corpus.hpp"
#include "mission/photosphere.hpp"
#include "mission/scenes.hpp"
#include "mission/script.hpp"
#include "mission/simulate.hpp"
#include "mission/tools.hpp"
#include "net/ports.hpp"
#include "runtime/session.hpp"
#include "telemetry/json_codec.hpp"
#include "telemetry/protocol.hpp"

using namespace scorpion;

struct scorpion_config {
  mission::Config config;
};

struct scorpion_report {
  mission::ExperimentReport report;
};

struct scorpion_stop {
  std::atomic<bool> flag{false};
};

struct scorpion_session {
  explicit scorpion_session(const runtime::SessionConfig& c) : session(c) {}
  runtime::Session session;
};

namespace {

thread_local std::string g_last_error;

scorpion_status fail(scorpion_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

/// Runs `body`, mapping exceptions onto status codes.
template <class F>
scorpion_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return SCORPION_OK;
  } catch (const ConfigError& e) {
    return fail(SCORPION_E_CONFIG, e.what());
  } catch (const ArgumentError& e) {
    return fail(SCORPION_E_ARGUMENT, e.what());
  } catch (const IoError& e) {
    return fail(SCORPION_E_IO, e.what());
  } catch (const SimulationFault& e) {
    return fail(SCORPION_E_SIMULATION, e.what());
  } catch (const telemetry::DecodeError& e) {
    return fail(SCORPION_E_DECODE, e.what());
  } catch (const telemetry::BridgeRequestError& e) {
    return fail(SCORPION_E_DECODE, e.code() + ": " + e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(SCORPION_E_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SCORPION_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SCORPION_E_INTERNAL, e.what());
  } catch (...) {
    return fail(SCORPION_E_INTERNAL, "unknown exception");
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw ArgumentError(std::string(what) + " must not be null");
}

char* duplicate(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::optional<std::uint64_t> seed_of(const uint64_t* seed) {
  return seed ? std::optional<std::uint64_t>(*seed) : std::nullopt;
}

scorpion_report* wrap(mission::ExperimentReport r) { return new scorpion_report{std::move(r)}; }

void to_c(const telemetry::TelemetryFrame& f, scorpion_telemetry* out) {
  out->timestamp_us = f.timestamp_us;
  std::copy(f.pose.begin(), f.pose.end(), out->pose);
  std::copy(f.twist.begin(), f.twist.end(), out->twist);
  out->depth_m = f.depth_m;
  out->temp_c = f.temp_c;
  out->int_pressure_pa = f.int_pressure_pa;
  out->water_pressure_pa = f.water_pressure_pa;
  out->leak = f.leak;
  std::copy(f.thrust.begin(), f.thrust.end(), out->thrust);
  out->mode = f.mode;
  out->manip_yaw = f.manip_yaw;
  out->manip_jaw = f.manip_jaw;
  out->faults = f.faults;
}

}  // namespace

extern "C" {

const char* scorpion_version(void) { return "0.1.0"; }

const char* scorpion_status_name(scorpion_status status) {
  switch (status) {
    case SCORPION_OK: return "ok";
    case SCORPION_E_ARGUMENT: return "argument";
    case SCORPION_E_CONFIG: return "config";
    case SCORPION_E_IO: return "io";
    case SCORPION_E_SIMULATION: return "simulation";
    case SCORPION_E_DECODE: return "decode";
    case SCORPION_E_NOT_FOUND: return "not_found";
    case SCORPION_E_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* scorpion_last_error(void) { return g_last_error.c_str(); }

void scorpion_string_free(char* text) { std::free(text); }

scorpion_status scorpion_set_log_level(int level) {
  return guarded([&] {
    if (level < 0 || level > 6) throw ArgumentError("log level must be in [0, 6]");
    spdlog::set_level(static_cast<spdlog::level::level_enum>(level));
  });
}

scorpion_status scorpion_config_default(scorpion_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new scorpion_config{};
  });
}

scorpion_status scorpion_config_load(const char* path, scorpion_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new scorpion_config{mission::load_config(path)};
  });
}

scorpion_status scorpion_config_dump(const scorpion_config* config, char** yaml) {
  return guarded([&] {
    require(config, "config");
    require(yaml, "yaml");
    *yaml = duplicate(mission::dump_config(config->config));
  });
}

void scorpion_config_free(scorpion_config* config) { delete config; }

scorpion_status scorpion_stop_new(scorpion_stop** out) {
  return guarded([&] {
    require(out, "out");
    *out = new scorpion_stop{};
  });
}

void scorpion_stop_trigger(scorpion_stop* stop) {
  if (stop) stop->flag.store(true);
}

int scorpion_stop_triggered(const scorpion_stop* stop) { return stop && stop->flag.load() ? 1 : 0; }

void scorpion_stop_free(scorpion_stop* stop) { delete stop; }

int scorpion_report_passed(const scorpion_report* report) { return report && report->report.passed() ? 1 : 0; }

scorpion_status scorpion_report_summary(const scorpion_report* report, char** text) {
  return guarded([&] {
    require(report, "report");
    require(text, "text");
    *text = duplicate(report->report.summary());
  });
}

scorpion_status scorpion_report_json(const scorpion_report* report, char** json) {
  return guarded([&] {
    require(report, "report");
    require(json, "json");
    *json = duplicate(report->report.to_json().dump(2));
  });
}

scorpion_status scorpion_report_metric(const scorpion_report* report, const char* name, double* value) {
  scorpion_status status = SCORPION_OK;
  const auto s = guarded([&] {
    require(report, "report");
    require(name, "name");
    require(value, "value");
    const auto m = report->report.metric(name);
    if (!m) {
      status = fail(SCORPION_E_NOT_FOUND, std::string("no metric named '") + name + "'");
      return;
    }
    *value = *m;
  });
  return s != SCORPION_OK ? s : status;
}

void scorpion_report_free(scorpion_report* report) { delete report; }

scorpion_status scorpion_simulate(const scorpion_config* config, const char* script_path, const char* out_dir,
                                  const uint64_t* seed, scorpion_report** report) {
  return guarded([&] {
    require(config, "config");
    require(script_path, "script_path");
    require(out_dir, "out_dir");
    require(report, "report");
    const auto script = mission::load_script(script_path);
    *report = wrap(mission::run_mission(config->config, script, {out_dir, seed_of(seed)}).report);
  });
}

void scorpion_live_options_init(scorpion_live_options* options) {
  if (!options) return;
  *options = scorpion_live_options{};
  options->speed = 1.0;
  options->bridge = 1;
}

scorpion_status scorpion_simulate_live(const scorpion_config* config, const char* script_path, const char* out_dir,
                                       const uint64_t* seed, const scorpion_live_options* options,
                                       scorpion_report** report) {
  return guarded([&] {
    require(config, "config");
    require(out_dir, "out_dir");
    require(options, "options");
    require(report, "report");
    if (!(options->speed > 0.0)) throw ArgumentError("speed must be positive");
    std::optional<mission::MissionScript> script;
    if (script_path) script = mission::load_script(script_path);
    mission::LiveRunOptions live;
    live.out_dir = out_dir;
    live.seed = seed_of(seed);
    live.speed = options->speed;
    if (options->duration_s > 0.0) live.duration_s = options->duration_s;
    if (options->telemetry_port) live.telemetry_port = options->telemetry_port;
    if (options->command_port) live.command_port = options->command_port;
    if (options->bridge_port) live.bridge_port = options->bridge_port;
    live.bridge = options->bridge != 0;
    if (options->stop) live.stop = &options->stop->flag;
    *report = wrap(mission::run_live(config->config, script, live).report);
  });
}

scorpion_status scorpion_stationkeep_test(const scorpion_config* config, const char* battery_dir, const char* out_dir,
                                          const uint64_t* seed, scorpion_report** report) {
  return guarded([&] {
    require(config, "config");
    require(battery_dir, "battery_dir");
    require(out_dir, "out_dir");
    require(report, "report");
    *report = wrap(mission::run_battery(config->config, battery_dir, out_dir, seed_of(seed)));
  });
}

scorpion_status scorpion_generate_corpus(const char* recipe_path, const char* out_dir, size_t* frames) {
  return guarded([&] {
    require(recipe_path, "recipe_path");
    require(out_dir, "out_dir");
    std::size_t n = 0;
    if (mission::is_sweep_recipe(recipe_path)) {
      n = mission::generate_sweep(mission::load_sweep_recipe(recipe_path), out_dir).frames.size();
    } else {
      n = mission::generate_corpus(mission::load_recipe(recipe_path), out_dir).frames.size();
    }
    if (frames) *frames = n;
  });
}

scorpion_status scorpion_vision_eval(const char* corpus_dir, const char* bands_path, const char* out_dir,
                                     scorpion_report** report) {
  return guarded([&] {
    require(corpus_dir, "corpus_dir");
    require(out_dir, "out_dir");
    require(report, "report");
    const auto bands = bands_path ? mission::load_bands(bands_path) : mission::standard_bands();
    *report = wrap(mission::evaluate_corpus(corpus_dir, bands, out_dir));
  });
}

scorpion_status scorpion_photosphere(const char* frames_dir, const char* manifest_path, const char* out_dir,
                                     uint64_t seed, scorpion_report** report) {
  return guarded([&] {
    require(frames_dir, "frames_dir");
    require(out_dir, "out_dir");
    require(report, "report");
    const std::filesystem::path manifest =
        manifest_path ? std::filesystem::path(manifest_path) : std::filesystem::path(frames_dir) / "manifest.yaml";
    mission::PhotosphereOptions opt;
    opt.seed = seed;
    *report = wrap(mission::run_photosphere(frames_dir, manifest, out_dir, opt));
  });
}

scorpion_status scorpion_replay(const char* csv_path, const char* host, uint16_t port, double speed,
                                const scorpion_stop* stop, uint64_t* frames_sent) {
  return guarded([&] {
    require(csv_path, "csv_path");
    require(host, "host");
    if (!(speed > 0.0)) throw ArgumentError("speed must be positive");
    mission::ReplayOptions opt;
    opt.host = host;
    opt.port = port ? port : net::port_from_env(net::kTelemetryPortEnv, net::kDefaultTelemetryPort);
    opt.speed = speed;
    opt.stop = stop ? &stop->flag : nullptr;
    const auto sent = mission::replay_log(csv_path, opt);
    if (frames_sent) *frames_sent = sent;
  });
}

scorpion_status scorpion_alloc_debug(const scorpion_config* config, const char* instance_path, char** json) {
  return guarded([&] {
    require(config, "config");
    require(instance_path, "instance_path");
    require(json, "json");
    const auto problem = mission::load_allocation_instance(instance_path, config->config.session);
    *json = duplicate(mission::allocation_dump(problem, alloc::allocate(problem)).dump(2));
  });
}

scorpion_status scorpion_session_new(const scorpion_config* config, scorpion_session** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    *out = new scorpion_session(config->config.session);
  });
}

scorpion_status scorpion_session_step(scorpion_session* session, uint64_t ticks, scorpion_telemetry* last) {
  return guarded([&] {
    require(session, "session");
    telemetry::TelemetryFrame f = session->session.snapshot();
    for (uint64_t i = 0; i < ticks && !session->session.halted(); ++i) f = session->session.tick();
    if (last) to_c(f, last);
    if (session->session.halted()) throw SimulationFault("simulation halted on a non-finite state");
  });
}

scorpion_status scorpion_session_submit_wire(scorpion_session* session, const uint8_t* frame, size_t size) {
  return guarded([&] {
    require(session, "session");
    require(frame, "frame");
    const auto message = telemetry::decode(std::vector<std::uint8_t>(frame, frame + size));
    const auto command = telemetry::as_command(message);
    if (!command) throw telemetry::DecodeError(telemetry::DecodeErrorKind::UnknownType, 3, "not a command message");
    session->session.submit(*command);
  });
}

scorpion_status scorpion_session_submit_json(scorpion_session* session, const char* json) {
  return guarded([&] {
    require(session, "session");
    require(json, "json");
    const auto parsed = telemetry::parse_request(json);
    const auto* command = std::get_if<telemetry::Command>(&parsed.request);
    if (!command) throw telemetry::BridgeRequestError("unknown_type", "not a vehicle command");
    session->session.submit(*command);
  });
}

scorpion_status scorpion_session_telemetry(const scorpion_session* session, scorpion_telemetry* out) {
  return guarded([&] {
    require(session, "session");
    require(out, "out");
    to_c(session->session.snapshot(), out);
  });
}

scorpion_status scorpion_session_encode_telemetry(const scorpion_session* session, uint8_t* buffer, size_t capacity,
                                                  size_t* size) {
  return guarded([&] {
    require(session, "session");
    require(size, "size");
    const auto bytes = telemetry::encode(session->session.snapshot());
    *size = bytes.size();
    if (capacity < bytes.size() || buffer == nullptr) throw ArgumentError("buffer too small for the telemetry frame");
    std::memcpy(buffer, bytes.data(), bytes.size());
  });
}

void scorpion_session_free(scorpion_session* session) { delete session; }

}  // extern "C"
