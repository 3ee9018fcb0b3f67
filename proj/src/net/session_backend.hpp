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

#include <chrono>
#include <mutex>
#include <optional>

#include "net/bridge.hpp"
#include "runtime/session.hpp"
#include "vision/measure.hpp"

namespace scorpion::net {

/// Bridge backend over a running Session: commands go to the session queue,
/// frames are rendered from the latest telemetry pose (at most `max_frame_hz`
/// fresh renders per second), and measurements use the calibration set by the
/// most recent calibrate request.
class SessionBackend : public BridgeBackend {
 public:
  explicit SessionBackend(runtime::Session& session, double max_frame_hz = 5.0);

  void submit(const telemetry::Command& command) override;
  telemetry::TelemetryFrame snapshot() const override;
  nlohmann::json calibrate(const telemetry::CalibrateRequest& request) override;
  nlohmann::json measure(const telemetry::MeasureRequest& request) override;
  nlohmann::json frame() override;

  std::optional<vision::CalibrationScale> calibration() const;

 private:
  struct CachedFrame {
    vision::ImageFrame image;
    std::uint64_t timestamp_us = 0;
  };
  const CachedFrame& latest_frame();

  runtime::Session& session_;
  std::chrono::steady_clock::duration min_interval_;
  std::optional<CachedFrame> cache_;
  std::chrono::steady_clock::time_point rendered_at_{};
  mutable std::mutex mutex_;
  std::optional<vision::CalibrationScale> calibration_;
};

}  // namespace scorpion::net
