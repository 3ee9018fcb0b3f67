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

#include "net/live_runner.hpp"

#include <spdlog/spdlog.h>
#include <thread>

#include "common/error.hpp"

namespace scorpion::net {

LiveRunner::LiveRunner(runtime::Session& session, LiveOptions options)
    : session_(session), options_(std::move(options)) {
  if (!(options_.speed > 0.0)) throw ArgumentError("speed must be positive");
}

LiveRunner::~LiveRunner() { shutdown(); }

void LiveRunner::start() {
  if (options_.csv) {
    log_ = std::make_unique<telemetry::CsvLogger>(*options_.csv);
    if (log_->failed()) {
      spdlog::error("telemetry log: {}", log_->last_error());
      session_.raise_fault(telemetry::kFaultLogWrite);
    }
  }
  if (options_.commands) {
    commands_ = std::make_unique<CommandServer>([this](const telemetry::Command& c) { session_.submit(c); },
                                                *options_.commands);
    commands_->start();
  }
  if (options_.bridge) {
    backend_ = std::make_unique<SessionBackend>(session_);
    bridge_ = std::make_unique<WebSocketBridge>(*backend_, *options_.bridge);
    bridge_->start();
  }
  if (options_.telemetry) {
    publisher_ = std::make_unique<TelemetryPublisher>(
        [this]() -> std::optional<telemetry::TelemetryFrame> {
          if (session_.ticks() == 0) return std::nullopt;
          return session_.snapshot();
        },
        *options_.telemetry);
    publisher_->start();
  }
}

std::uint64_t LiveRunner::run() {
  using clock = std::chrono::steady_clock;
  const double dt = session_.config().dt;
  const auto wall_step = std::chrono::duration<double>(dt / options_.speed);
  const auto t0 = clock::now();
  const std::uint64_t start_ticks = session_.ticks();
  const std::uint64_t limit =
      options_.duration_s ? static_cast<std::uint64_t>(std::llround(*options_.duration_s / dt)) : UINT64_MAX;
  bool reported_log_failure = false;
  std::uint64_t n = 0;
  while (n < limit && !stop_requested_ && !(options_.stop && options_.stop->load()) && !session_.halted()) {
    if (options_.before_tick) options_.before_tick(session_);
    const auto frame = session_.tick();
    ++n;
    if (log_ && !log_->write(frame) && !reported_log_failure) {
      reported_log_failure = true;
      spdlog::error("telemetry log: {}", log_->last_error());
      session_.raise_fault(telemetry::kFaultLogWrite);
    }
    std::this_thread::sleep_until(t0 + std::chrono::duration_cast<clock::duration>(wall_step * static_cast<double>(n)));
  }
  if (log_) log_->flush();
  return session_.ticks() - start_ticks;
}

void LiveRunner::shutdown() {
  if (publisher_) publisher_->stop();
  if (bridge_) bridge_->stop();
  if (commands_) commands_->stop();
  if (log_) log_->close();
}

std::uint16_t LiveRunner::command_port() const { return commands_ ? commands_->port() : 0; }
std::uint16_t LiveRunner::bridge_port() const { return bridge_ ? bridge_->port() : 0; }

std::uint64_t replay_frames(const std::vector<telemetry::TelemetryFrame>& frames, UdpSender& sender, double speed,
                            const std::atomic<bool>* stop) {
  if (!(speed > 0.0)) throw ArgumentError("speed must be positive");
  if (frames.empty()) return 0;
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const std::uint64_t first = frames.front().timestamp_us;
  std::uint64_t sent = 0;
  for (const auto& f : frames) {
    if (stop && stop->load()) break;
    const double offset_s = static_cast<double>(f.timestamp_us - first) * 1e-6 / speed;
    std::this_thread::sleep_until(t0 + std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(offset_s)));
    if (sender.send(f)) ++sent;
  }
  return sent;
}

}  // namespace scorpion::net
