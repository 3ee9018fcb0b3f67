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

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "common/error.hpp"

namespace scorpion::telemetry {

inline constexpr std::uint8_t kMagic0 = 0x48;
inline constexpr std::uint8_t kMagic1 = 0x59;
inline constexpr std::uint8_t kVersion = 0x01;
inline constexpr std::size_t kHeaderSize = 6;  // magic(2) version type length(2)
inline constexpr std::size_t kCrcSize = 2;
inline constexpr std::size_t kMaxPayload = 1024;

enum class MessageType : std::uint8_t {
  Telemetry = 0x01,
  Joystick = 0x10,
  SetMode = 0x11,
  SetHold = 0x12,
  Manipulator = 0x13,
  Trim = 0x14,
  EmergencyStop = 0x15,
  ErrorReport = 0x7F,
};

/// Fault bits carried in TelemetryFrame::faults.
enum FaultBits : std::uint8_t {
  kFaultEmergencyStop = 0x01,
  kFaultSolver = 0x02,
  kFaultLeak = 0x04,
  kFaultLogWrite = 0x08,
  kFaultSimulation = 0x10,
  kFaultCommandLink = 0x20,
};

struct TelemetryFrame {
  std::uint64_t timestamp_us = 0;
  std::array<float, 6> pose{};   // x y z roll pitch yaw
  std::array<float, 6> twist{};  // u v w p q r
  float depth_m = 0.0f;
  float temp_c = 0.0f;
  float int_pressure_pa = 0.0f;
  float water_pressure_pa = 0.0f;
  std::uint8_t leak = 0;
  std::array<float, 8> thrust{};
  std::uint8_t mode = 0;
  float manip_yaw = 0.0f;
  float manip_jaw = 0.0f;
  std::uint8_t faults = 0;

  bool operator==(const TelemetryFrame&) const = default;
};

struct JoystickWrench {
  std::array<float, 6> axes{};
  bool operator==(const JoystickWrench&) const = default;
};
struct SetMode {
  std::uint8_t mode = 0;
  bool operator==(const SetMode&) const = default;
};
struct SetHoldSetpoint {
  std::array<double, 6> pose{};
  bool operator==(const SetHoldSetpoint&) const = default;
};
struct ManipulatorCmd {
  float yaw_rate = 0.0f;
  float jaw_rate = 0.0f;
  bool operator==(const ManipulatorCmd&) const = default;
};
struct TrimFeedForward {
  std::array<double, 6> wrench{};
  bool operator==(const TrimFeedForward&) const = default;
};
struct EmergencyStop {
  bool operator==(const EmergencyStop&) const = default;
};
/// Vehicle-to-operator notice, e.g. when a second command connection is refused.
struct ErrorReport {
  std::uint8_t code = 0;
  std::string text;
  bool operator==(const ErrorReport&) const = default;
};

using Command = std::variant<JoystickWrench, SetMode, SetHoldSetpoint, ManipulatorCmd, TrimFeedForward, EmergencyStop>;
using Message = std::variant<TelemetryFrame, JoystickWrench, SetMode, SetHoldSetpoint, ManipulatorCmd, TrimFeedForward,
                             EmergencyStop, ErrorReport>;

enum class ErrorCode : std::uint8_t { ConnectionBusy = 1, MalformedFrame = 2, TooManyMalformed = 3 };

MessageType message_type(const Message& m);
std::optional<Command> as_command(const Message& m);
Message to_message(const Command& c);

enum class DecodeErrorKind { BadMagic, BadVersion, Truncated, BadLength, BadCrc, UnknownType, BadPayload, TrailingBytes };

const char* decode_error_name(DecodeErrorKind kind);

class DecodeError : public Error {
 public:
  DecodeError(DecodeErrorKind kind, std::size_t offset, const std::string& detail = {});
  DecodeErrorKind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }

 private:
  DecodeErrorKind kind_;
  std::size_t offset_;
};

/// CRC-16/CCITT-FALSE: polynomial 0x1021, initial value 0xFFFF, no
/// reflection, no final xor.
std::uint16_t crc16_ccitt_false(const std::uint8_t* data, std::size_t size);

std::vector<std::uint8_t> encode(const Message& m);

struct Decoded {
  Message message;
  std::size_t consumed = 0;
};

/// Decodes the frame at the start of `data`; trailing bytes are left alone.
Decoded decode_frame(const std::uint8_t* data, std::size_t size);
/// Decodes a buffer holding exactly one frame.
Message decode(const std::vector<std::uint8_t>& bytes);

/// Reassembles frames from a byte stream. A malformed frame is reported
/// once and skipped by scanning forward to the next magic sequence.
class StreamDecoder {
 public:
  void feed(const std::uint8_t* data, std::size_t size);

  struct Item {
    std::optional<Message> message;
    std::optional<DecodeError> error;
  };
  /// Next complete message or error; nullopt while more bytes are needed.
  std::optional<Item> next();

  std::size_t buffered() const { return buffer_.size(); }

 private:
  std::deque<std::uint8_t> buffer_;
  std::size_t stream_offset_ = 0;
};

}  // namespace scorpion::telemetry
