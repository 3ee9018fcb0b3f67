/*
 * Copyright 2026 The Scorpion Twin Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the Scorpion ROV digital twin.
 *
 * Every function returns a scorpion_status. On failure a human-readable
 * message is available from scorpion_last_error() on the calling thread
 * until the next call into the library from that thread. Handles are opaque
 * and owned by the caller once returned; release them with the matching
 * *_free function (all accept NULL). Strings returned through char** are
 * NUL-terminated, heap-allocated and released with scorpion_string_free().
 *
 * A session handle must be used from one thread at a time. Configuration
 * and report handles are immutable after creation and may be shared.
 */

#ifndef SCORPION_SCORPION_H
#define SCORPION_SCORPION_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SCORPION_BUILDING_LIBRARY)
#    define SCORPION_API __declspec(dllexport)
#  else
#    define SCORPION_API __declspec(dllimport)
#  endif
#else
#  define SCORPION_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum scorpion_status {
  SCORPION_OK = 0,
  SCORPION_E_ARGUMENT = 1,   /* null pointer or value outside the documented range */
  SCORPION_E_CONFIG = 2,     /* configuration, script, recipe, manifest or instance file */
  SCORPION_E_IO = 3,         /* file or socket failure */
  SCORPION_E_SIMULATION = 4, /* the integrator left the finite range */
  SCORPION_E_DECODE = 5,     /* malformed wire frame or JSON command */
  SCORPION_E_NOT_FOUND = 6,  /* named metric absent from a report */
  SCORPION_E_INTERNAL = 7
} scorpion_status;

typedef struct scorpion_config scorpion_config;
typedef struct scorpion_report scorpion_report;
typedef struct scorpion_session scorpion_session;
typedef struct scorpion_stop scorpion_stop;

/* Library ------------------------------------------------------------- */

SCORPION_API const char* scorpion_version(void);
SCORPION_API const char* scorpion_status_name(scorpion_status status);
SCORPION_API const char* scorpion_last_error(void);
SCORPION_API void scorpion_string_free(char* text);

/* 0 trace, 1 debug, 2 info, 3 warn, 4 error, 5 critical, 6 off. */
SCORPION_API scorpion_status scorpion_set_log_level(int level);

/* Configuration ------------------------------------------------------- */

SCORPION_API scorpion_status scorpion_config_default(scorpion_config** out);
SCORPION_API scorpion_status scorpion_config_load(const char* path, scorpion_config** out);
/* YAML text holding every effective setting. */
SCORPION_API scorpion_status scorpion_config_dump(const scorpion_config* config, char** yaml);
SCORPION_API void scorpion_config_free(scorpion_config* config);

/* Cancellation -------------------------------------------------------- */

SCORPION_API scorpion_status scorpion_stop_new(scorpion_stop** out);
/* Safe to call from a signal handler. */
SCORPION_API void scorpion_stop_trigger(scorpion_stop* stop);
SCORPION_API int scorpion_stop_triggered(const scorpion_stop* stop);
SCORPION_API void scorpion_stop_free(scorpion_stop* stop);

/* Reports ------------------------------------------------------------- */

/* 1 when every non-informational criterion passed, else 0. */
SCORPION_API int scorpion_report_passed(const scorpion_report* report);
SCORPION_API scorpion_status scorpion_report_summary(const scorpion_report* report, char** text);
SCORPION_API scorpion_status scorpion_report_json(const scorpion_report* report, char** json);
SCORPION_API scorpion_status scorpion_report_metric(const scorpion_report* report, const char* name, double* value);
SCORPION_API void scorpion_report_free(scorpion_report* report);

/* Commands ------------------------------------------------------------ */
/* Each command writes its artifacts plus report.json and summary.txt into
 * out_dir. A NULL seed pointer keeps the script or configuration seed. */

SCORPION_API scorpion_status scorpion_simulate(const scorpion_config* config, const char* script_path,
                                               const char* out_dir, const uint64_t* seed, scorpion_report** report);

typedef struct scorpion_live_options {
  double speed;              /* simulated seconds per wall-clock second, > 0 */
  double duration_s;         /* <= 0: script duration, or until stopped without a script */
  uint16_t telemetry_port;   /* 0: SCORPION_TELEM_PORT, then configuration */
  uint16_t command_port;     /* 0: SCORPION_CMD_PORT, then configuration */
  uint16_t bridge_port;      /* 0: SCORPION_WS_PORT, then configuration */
  int bridge;                /* nonzero opens the WebSocket bridge */
  const scorpion_stop* stop; /* optional */
} scorpion_live_options;

SCORPION_API void scorpion_live_options_init(scorpion_live_options* options);

/* script_path may be NULL for an open-ended session driven over the network. */
SCORPION_API scorpion_status scorpion_simulate_live(const scorpion_config* config, const char* script_path,
                                                    const char* out_dir, const uint64_t* seed,
                                                    const scorpion_live_options* options, scorpion_report** report);

SCORPION_API scorpion_status scorpion_stationkeep_test(const scorpion_config* config, const char* battery_dir,
                                                       const char* out_dir, const uint64_t* seed,
                                                       scorpion_report** report);

/* Renders a corpus (markers, length or sweep recipe) into out_dir. */
SCORPION_API scorpion_status scorpion_generate_corpus(const char* recipe_path, const char* out_dir, size_t* frames);

/* bands_path may be NULL for the built-in red, blue and yellow bands. */
SCORPION_API scorpion_status scorpion_vision_eval(const char* corpus_dir, const char* bands_path, const char* out_dir,
                                                  scorpion_report** report);

/* manifest_path may be NULL for frames_dir/manifest.yaml. */
SCORPION_API scorpion_status scorpion_photosphere(const char* frames_dir, const char* manifest_path,
                                                  const char* out_dir, uint64_t seed, scorpion_report** report);

/* port 0: SCORPION_TELEM_PORT, then 14550. An empty log sends nothing. */
SCORPION_API scorpion_status scorpion_replay(const char* csv_path, const char* host, uint16_t port, double speed,
                                             const scorpion_stop* stop, uint64_t* frames_sent);

/* JSON dump of the allocation result for a YAML instance file. */
SCORPION_API scorpion_status scorpion_alloc_debug(const scorpion_config* config, const char* instance_path,
                                                  char** json);

/* Embedded session ---------------------------------------------------- */

typedef struct scorpion_telemetry {
  uint64_t timestamp_us;
  float pose[6];  /* x y z roll pitch yaw */
  float twist[6]; /* u v w p q r */
  float depth_m;
  float temp_c;
  float int_pressure_pa;
  float water_pressure_pa;
  uint8_t leak;
  float thrust[8];
  uint8_t mode;
  float manip_yaw;
  float manip_jaw;
  uint8_t faults;
} scorpion_telemetry;

SCORPION_API scorpion_status scorpion_session_new(const scorpion_config* config, scorpion_session** out);
/* Advances `ticks` control periods; `last` (optional) receives the final frame. */
SCORPION_API scorpion_status scorpion_session_step(scorpion_session* session, uint64_t ticks, scorpion_telemetry* last);
/* Queues a binary command envelope for the next tick. */
SCORPION_API scorpion_status scorpion_session_submit_wire(scorpion_session* session, const uint8_t* frame, size_t size);
/* Queues a console JSON command for the next tick. */
SCORPION_API scorpion_status scorpion_session_submit_json(scorpion_session* session, const char* json);
SCORPION_API scorpion_status scorpion_session_telemetry(const scorpion_session* session, scorpion_telemetry* out);
/* Latest frame as a wire envelope; *size receives the required length even
 * when capacity is too small (then SCORPION_E_ARGUMENT). */
SCORPION_API scorpion_status scorpion_session_encode_telemetry(const scorpion_session* session, uint8_t* buffer,
                                                               size_t capacity, size_t* size);
SCORPION_API void scorpion_session_free(scorpion_session* session);

#ifdef __cplusplus
}
#endif

#endif /* SCORPION_SCORPION_H */
