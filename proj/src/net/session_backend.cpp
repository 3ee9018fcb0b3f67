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

#include "net/session_backend.hpp"

#include <boost/beast/core/detail/base64.hpp>

#include "common/error.hpp"
#include "vision/image.hpp"

namespace scorpion::net {

namespace {

std::string base64(const std::vector<std::uint8_t>& bytes) {
  namespace b64 = boost::beast::detail::base64;
  std::string out(b64::encoded_size(bytes.size()), '\0');
  out.resize(b64::encode(out.data(), bytes.data(), bytes.size()));
  return out;
}

Eigen::Vector2d point(const std::array<double, 2>& p) { return {p[0], p[1]}; }

}  // namespace

SessionBackend::SessionBackend(runtime::Session& session, double max_frame_hz) : session_(session) {
  if (!(max_frame_hz > 0.0)) throw ArgumentError("frame rate limit must be positive");
  min_interval_ = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(1.0 / max_frame_hz));
}

void SessionBackend::submit(const telemetry::Command& command) { session_.submit(command); }

telemetry::TelemetryFrame SessionBackend::snapshot() const { return session_.snapshot(); }

const SessionBackend::CachedFrame& SessionBackend::latest_frame() {
  const auto now = std::chrono::steady_clock::now();
  if (!cache_ || now - rendered_at_ >= min_interval_) {
    const auto frame = session_.snapshot();
    if (!cache_ || frame.timestamp_us != cache_->timestamp_us) {
      vision::RenderOptions options;
      options.seed = frame.timestamp_us;
      cache_ = CachedFrame{session_.render_camera(frame.pose, options).frame, frame.timestamp_us};
    }
    rendered_at_ = now;
  }
  return *cache_;
}

nlohmann::json SessionBackend::calibrate(const telemetry::CalibrateRequest& request) {
  const auto& intrinsics = session_.config().camera.intrinsics;
  const auto scale = vision::calibrate(point(request.p1), point(request.p2), request.length_m, intrinsics);
  {
    std::lock_guard lock(mutex_);
    calibration_ = scale;
  }
  return {{"type", "calibration"},
          {"scale_px_per_m", scale.scale},
          {"pixel_distance", scale.pixel_distance},
          {"reference_length_m", scale.reference_length_m}};
}

nlohmann::json SessionBackend::measure(const telemetry::MeasureRequest& request) {
  const auto scale = calibration();
  if (!scale) throw telemetry::BridgeRequestError("not_calibrated", "calibrate before measuring");
  const auto& cached = latest_frame();
  vision::MeasureOptions options;
  options.frame = &cached.image;
  options.subpixel = request.subpixel;
  const double length =
      vision::measure_length(point(request.p1), point(request.p2), *scale, session_.config().camera.intrinsics, options);
  return {{"type", "measurement"}, {"length_m", length}, {"timestamp_us", cached.timestamp_us}};
}

nlohmann::json SessionBackend::frame() {
  const auto& cached = latest_frame();
  return {{"type", "frame"},
          {"timestamp_us", cached.timestamp_us},
          {"width", cached.image.width()},
          {"height", cached.image.height()},
          {"png_base64", base64(vision::encode_png(cached.image))}};
}

std::optional<vision::CalibrationScale> SessionBackend::calibration() const {
  std::lock_guard lock(mutex_);
  return calibration_;
}

}  // namespace scorpion::net
