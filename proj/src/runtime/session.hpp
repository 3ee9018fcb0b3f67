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

#pragma once

#include <atomic>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "control/controller.hpp"
#include "sim/sensors.hpp"
#include "sim/types.hpp"
#include "telemetry/protocol.hpp"
#include "vision/render.hpp"

namespace scorpion::runtime {

/// External load on one axis. Forces (axes 0-2) act in the world frame,
/// torques (axes 3-5) in the body frame. A step holds `amplitude` from
/// `start_s` until `end_s`; a sine adds amplitude * sin(2 pi f (t - start) + phase)
/// over the same window.
struct Disturbance {
  enum class Kind { Step, Sine };
  Kind kind = Kind::Step;
  int axis = 0;
  double amplitude = 0.0;
  double start_s = 0.0;
  double end_s = std::numeric_limits<double>::infinity();
  double frequency_hz = 0.0;
  double phase = 0.0;
};

/// Sum of active disturbances at time t: world force in head<3>, body torque in tail<3>.
Vector6d disturbance_at(const std::vector<Disturbance>& list, double t);

struct CameraConfig {
  vision::Intrinsics intrinsics{500.0, 500.0, 319.5, 239.5, 0.0, 0.0};
  int width = 640, height = 480;
  Eigen::Vector3d body_offset{0.25, 0.0, 0.0};  // camera position in the body frame, m
};

struct SessionConfig {
  sim::VehicleParams vehicle;
  sim::ThrusterLayout layout = sim::default_layout();
  sim::Environment environment;
  sim::ManipulatorLimits manipulator;
  control::ControllerConfig controller;
  double dt = 0.02;
  std::uint64_t seed = 0;
  sim::Pose initial_pose = [] {
    sim::Pose p;
    p.z = 2.0;
    return p;
  }();
  Vector6d trim = Vector6d::Zero();
  std::vector<Disturbance> disturbances;
  std::optional<vision::Scene> scene;
  CameraConfig camera;
};

struct SessionCounters {
  std::uint64_t commands_applied = 0;
  std::uint64_t commands_rejected = 0;
  std::uint64_t joystick_clamps = 0;
  std::uint64_t solver_faults = 0;
};

/// The simulated vehicle with its controller and sensors, advanced one
/// control tick at a time. `submit` and `snapshot` may be called from other
/// threads; everything else belongs to the thread calling `tick`.
class Session {
 public:
  explicit Session(SessionConfig config);

  void submit(const telemetry::Command& command);

  /// Applies queued commands in arrival order, runs the controller, records
  /// the telemetry frame for the current state, then advances the simulation
  /// by one step. Returns the recorded frame.
  telemetry::TelemetryFrame tick();

  /// Most recent frame (default-constructed before the first tick).
  telemetry::TelemetryFrame snapshot() const;

  void add_disturbance(const Disturbance& d) { config_.disturbances.push_back(d); }
  /// Replaces the scene seen by the camera (thread-safe).
  void set_scene(std::optional<vision::Scene> scene);
  /// OR-ed into every subsequent frame, e.g. after a log write failure.
  void raise_fault(std::uint8_t bits) { external_faults_.fetch_or(bits); }

  double time() const { return static_cast<double>(ticks_) * config_.dt; }
  std::uint64_t ticks() const { return ticks_; }
  std::uint64_t timestamp_us() const { return ticks_ * dt_us_; }
  bool halted() const { return halted_; }
  bool estop_latched() const { return estop_; }

  const SessionConfig& config() const { return config_; }
  const sim::VehicleState& state() const { return state_; }
  const control::ControllerState& controller_state() const { return ctl_state_; }
  const control::Controller& controller() const { return controller_; }
  const sim::ManipulatorState& manipulator() const { return manip_; }
  SessionCounters counters() const;

  /// Camera view from a telemetry pose (thread-safe: uses only immutable config).
  vision::RenderResult render_camera(const std::array<float, 6>& pose, const vision::RenderOptions& options) const;

 private:
  void apply(const telemetry::Command& c);

  SessionConfig config_;
  std::uint64_t dt_us_;
  control::Controller controller_;
  sim::AllocationMatrix b_;
  sim::SensorModel sensors_;
  sim::VehicleState state_;
  control::ControllerState ctl_state_;
  sim::ManipulatorState manip_;
  sim::ManipulatorCommand manip_cmd_;
  Vector6d joystick_ = Vector6d::Zero();
  Vector6d trim_;
  bool estop_ = false;
  bool halted_ = false;
  std::uint64_t ticks_ = 0;
  std::atomic<std::uint8_t> external_faults_{0};

  mutable std::mutex queue_mutex_;
  std::vector<telemetry::Command> queue_;
  mutable std::mutex scene_mutex_;
  std::shared_ptr<const vision::Scene> scene_;
  mutable std::mutex snapshot_mutex_;
  telemetry::TelemetryFrame snapshot_;
  SessionCounters counters_;
};

}  // namespace scorpion::runtime
