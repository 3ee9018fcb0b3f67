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
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "net/ports.hpp"
#include "telemetry/protocol.hpp"

namespace scorpion::net {

/// Delay before the next attempt after `failures` consecutive socket
/// failures: 100 ms * 2^(failures - 1), capped at 5 s. Zero failures, zero delay.
std::chrono::milliseconds backoff_delay(int failures);

/// One-envelope-per-datagram telemetry sender. Socket errors close the
/// socket; the next send after the backoff delay reopens it.
class UdpSender {
 public:
  UdpSender(std::string host, std::uint16_t port);
  ~UdpSender();
  UdpSender(const UdpSender&) = delete;
  UdpSender& operator=(const UdpSender&) = delete;

  /// False when the datagram could not be sent, including while backing off.
  bool send(const telemetry::TelemetryFrame& frame);

  int consecutive_failures() const { return failures_; }
  std::uint64_t sent() const { return sent_; }
  std::uint64_t errors() const { return errors_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int failures_ = 0;
  std::chrono::steady_clock::time_point retry_at_{};
  std::uint64_t sent_ = 0, errors_ = 0;
};

struct PublisherOptions {
  std::string host = "127.0.0.1";
  std::uint16_t port = kDefaultTelemetryPort;
  double rate_hz = 20.0;  // [1, 50]
};

using FrameSource = std::function<std::optional<telemetry::TelemetryFrame>()>;

/// Publishes the latest frame from `source` at a fixed rate on a background
/// thread. A frame whose timestamp is not newer than the last one sent is
/// skipped, so published timestamps are strictly increasing.
class TelemetryPublisher {
 public:
  TelemetryPublisher(FrameSource source, PublisherOptions options);
  ~TelemetryPublisher();
  TelemetryPublisher(const TelemetryPublisher&) = delete;
  TelemetryPublisher& operator=(const TelemetryPublisher&) = delete;

  void start();
  void stop();

  std::uint64_t frames_sent() const { return frames_sent_.load(); }
  std::uint64_t send_errors() const { return send_errors_.load(); }
  const PublisherOptions& options() const { return options_; }

 private:
  void run();

  FrameSource source_;
  PublisherOptions options_;
  std::thread thread_;
  std::mutex mutex_;
  std::condition_variable wake_;
  bool stopping_ = false;
  std::atomic<std::uint64_t> frames_sent_{0};
  std::atomic<std::uint64_t> send_errors_{0};
};

/// Blocking UDP receiver for telemetry datagrams, used by tests and tools.
class TelemetryReceiver {
 public:
  /// Binds 127.0.0.1:`port`; port 0 picks a free port.
  explicit TelemetryReceiver(std::uint16_t port = 0);
  ~TelemetryReceiver();
  TelemetryReceiver(const TelemetryReceiver&) = delete;
  TelemetryReceiver& operator=(const TelemetryReceiver&) = delete;

  std::uint16_t port() const;

  /// Next valid frame, or nullopt after `timeout` without one. Datagrams
  /// that fail to decode are counted and dropped.
  std::optional<telemetry::TelemetryFrame> receive(std::chrono::milliseconds timeout);
  std::uint64_t rejected() const { return rejected_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::uint64_t rejected_ = 0;
};

}  // namespace scorpion::net
