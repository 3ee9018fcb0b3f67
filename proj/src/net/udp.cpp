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

#include "net/udp.hpp"

#include <algorithm>
#include <boost/asio.hpp>
#include <spdlog/spdlog.h>

#include "common/error.hpp"

namespace scorpion::net {

namespace asio = boost::asio;
using asio::ip::udp;

std::chrono::milliseconds backoff_delay(int failures) {
  if (failures <= 0) return std::chrono::milliseconds(0);
  const int shift = std::min(failures - 1, 6);
  return std::min(std::chrono::milliseconds(100) * (1 << shift), std::chrono::milliseconds(5000));
}

struct UdpSender::Impl {
  asio::io_context io;
  udp::socket socket{io};
  std::string host;
  std::uint16_t port;
  udp::endpoint endpoint;

  boost::system::error_code open() {
    boost::system::error_code ec;
    udp::resolver resolver(io);
    auto results = resolver.resolve(udp::v4(), host, std::to_string(port), ec);
    if (ec) return ec;
    endpoint = *results.begin();
    socket.open(udp::v4(), ec);
    return ec;
  }
};

UdpSender::UdpSender(std::string host, std::uint16_t port) : impl_(std::make_unique<Impl>()) {
  impl_->host = std::move(host);
  impl_->port = port;
}

UdpSender::~UdpSender() = default;

bool UdpSender::send(const telemetry::TelemetryFrame& frame) {
  const auto now = std::chrono::steady_clock::now();
  if (failures_ > 0 && now < retry_at_) return false;
  boost::system::error_code ec;
  if (!impl_->socket.is_open()) ec = impl_->open();
  if (!ec) {
    const auto bytes = telemetry::encode(frame);
    impl_->socket.send_to(asio::buffer(bytes), impl_->endpoint, 0, ec);
  }
  if (ec) {
    ++errors_;
    ++failures_;
    impl_->socket.close();
    const auto delay = backoff_delay(failures_);
    retry_at_ = now + delay;
    spdlog::warn("telemetry send to {}:{} failed: {}; retrying in {} ms", impl_->host, impl_->port, ec.message(),
                 delay.count());
    return false;
  }
  failures_ = 0;
  ++sent_;
  return true;
}

TelemetryPublisher::TelemetryPublisher(FrameSource source, PublisherOptions options)
    : source_(std::move(source)), options_(std::move(options)) {
  if (!(options_.rate_hz >= 1.0 && options_.rate_hz <= 50.0))
    throw ArgumentError("telemetry rate must be within [1, 50] Hz");
}

TelemetryPublisher::~TelemetryPublisher() { stop(); }

void TelemetryPublisher::start() {
  if (thread_.joinable()) return;
  {
    std::lock_guard lock(mutex_);
    stopping_ = false;
  }
  thread_ = std::thread([this] { run(); });
}

void TelemetryPublisher::stop() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  wake_.notify_all();
  if (thread_.joinable()) thread_.join();
}

void TelemetryPublisher::run() {
  UdpSender sender(options_.host, options_.port);
  const auto period = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(1.0 / options_.rate_hz));
  auto next = std::chrono::steady_clock::now();
  std::optional<std::uint64_t> last_timestamp;
  std::unique_lock lock(mutex_);
  while (!stopping_) {
    lock.unlock();
    if (auto frame = source_(); frame && (!last_timestamp || frame->timestamp_us > *last_timestamp)) {
      if (sender.send(*frame)) {
        last_timestamp = frame->timestamp_us;
        frames_sent_.fetch_add(1);
      } else {
        send_errors_.store(sender.errors());
      }
    }
    next += period;
    const auto now = std::chrono::steady_clock::now();
    if (next < now - period) next = now;
    lock.lock();
    wake_.wait_until(lock, next, [this] { return stopping_; });
  }
}

struct TelemetryReceiver::Impl {
  asio::io_context io;
  udp::socket socket{io};
};

TelemetryReceiver::TelemetryReceiver(std::uint16_t port) : impl_(std::make_unique<Impl>()) {
  boost::system::error_code ec;
  impl_->socket.open(udp::v4(), ec);
  if (!ec) impl_->socket.bind(udp::endpoint(asio::ip::make_address_v4("127.0.0.1"), port), ec);
  if (ec) throw IoError("cannot bind telemetry receiver on port " + std::to_string(port) + ": " + ec.message());
}

TelemetryReceiver::~TelemetryReceiver() = default;

std::uint16_t TelemetryReceiver::port() const { return impl_->socket.local_endpoint().port(); }

std::optional<telemetry::TelemetryFrame> TelemetryReceiver::receive(std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  std::vector<std::uint8_t> buffer(telemetry::kHeaderSize + telemetry::kMaxPayload + telemetry::kCrcSize);
  while (true) {
    std::optional<std::size_t> received;
    udp::endpoint from;
    impl_->socket.async_receive_from(asio::buffer(buffer), from,
                                     [&](const boost::system::error_code& ec, std::size_t n) {
                                       if (!ec) received = n;
                                     });
    impl_->io.restart();
    impl_->io.run_until(deadline);
    if (!received) {
      impl_->socket.cancel();
      impl_->io.restart();
      impl_->io.run();
      if (!received) return std::nullopt;
    }
    try {
      const auto message = telemetry::decode({buffer.begin(), buffer.begin() + static_cast<long>(*received)});
      if (const auto* frame = std::get_if<telemetry::TelemetryFrame>(&message)) return *frame;
      ++rejected_;
    } catch (const telemetry::DecodeError&) {
      ++rejected_;
    }
  }
}

}  // namespace scorpion::net
