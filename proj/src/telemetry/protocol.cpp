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

#include "telemetry/protocol.hpp"

#include <bit>
#include <cstring>

namespace scorpion::telemetry {

namespace {

constexpr std::array<std::uint16_t, 256> make_crc_table() {
  std::array<std::uint16_t, 256> t{};
  for (std::uint16_t i = 0; i < 256; ++i) {
    std::uint16_t c = static_cast<std::uint16_t>(i << 8);
    for (int b = 0; b < 8; ++b) c = static_cast<std::uint16_t>((c & 0x8000) ? (c << 1) ^ 0x1021 : c << 1);
    t[i] = c;
  }
  return t;
}

constexpr auto kCrcTable = make_crc_table();

class Writer {
 public:
  void u8(std::uint8_t v) { out.push_back(v); }
  void u16(std::uint16_t v) {
    u8(static_cast<std::uint8_t>(v >> 8));
    u8(static_cast<std::uint8_t>(v));
  }
  void u32(std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) u8(static_cast<std::uint8_t>(v >> s));
  }
  void u64(std::uint64_t v) {
    for (int s = 56; s >= 0; s -= 8) u8(static_cast<std::uint8_t>(v >> s));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  std::vector<std::uint8_t> out;
};

class Reader {
 public:
  Reader(const std::uint8_t* d, std::size_t n, std::size_t base) : data(d), size(n), base_offset(base) {}
  std::uint8_t u8() {
    need(1);
    return data[pos++];
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | u8();
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | u8();
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  void done() const {
    if (pos != size) throw DecodeError(DecodeErrorKind::BadPayload, base_offset + pos, "payload longer than its type");
  }
  const std::uint8_t* data;
  std::size_t size;
  std::size_t base_offset;
  std::size_t pos = 0;

 private:
  void need(std::size_t n) const {
    if (pos + n > size) throw DecodeError(DecodeErrorKind::BadPayload, base_offset + pos, "payload shorter than its type");
  }
};

void write_payload(Writer& w, const Message& m) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TelemetryFrame>) {
          w.u64(v.timestamp_us);
          for (float x : v.pose) w.f32(x);
          for (float x : v.twist) w.f32(x);
          w.f32(v.depth_m);
          w.f32(v.temp_c);
          w.f32(v.int_pressure_pa);
          w.f32(v.water_pressure_pa);
          w.u8(v.leak);
          for (float x : v.thrust) w.f32(x);
          w.u8(v.mode);
          w.f32(v.manip_yaw);
          w.f32(v.manip_jaw);
          w.u8(v.faults);
        } else if constexpr (std::is_same_v<T, JoystickWrench>) {
          for (float x : v.axes) w.f32(x);
        } else if constexpr (std::is_same_v<T, SetMode>) {
          w.u8(v.mode);
        } else if constexpr (std::is_same_v<T, SetHoldSetpoint>) {
          for (double x : v.pose) w.f64(x);
        } else if constexpr (std::is_same_v<T, ManipulatorCmd>) {
          w.f32(v.yaw_rate);
          w.f32(v.jaw_rate);
        } else if constexpr (std::is_same_v<T, TrimFeedForward>) {
          for (double x : v.wrench) w.f64(x);
        } else if constexpr (std::is_same_v<T, EmergencyStop>) {
        } else if constexpr (std::is_same_v<T, ErrorReport>) {
          if (v.text.size() > kMaxPayload - 1) throw ArgumentError("error report text too long");
          w.u8(v.code);
          for (char c : v.text) w.u8(static_cast<std::uint8_t>(c));
        }
      },
      m);
}

Message read_payload(MessageType type, Reader& r) {
  switch (type) {
    case MessageType::Telemetry: {
      TelemetryFrame f;
      f.timestamp_us = r.u64();
      for (float& x : f.pose) x = r.f32();
      for (float& x : f.twist) x = r.f32();
      f.depth_m = r.f32();
      f.temp_c = r.f32();
      f.int_pressure_pa = r.f32();
      f.water_pressure_pa = r.f32();
      f.leak = r.u8();
      for (float& x : f.thrust) x = r.f32();
      f.mode = r.u8();
      f.manip_yaw = r.f32();
      f.manip_jaw = r.f32();
      f.faults = r.u8();
      r.done();
      return f;
    }
    case MessageType::Joystick: {
      JoystickWrench j;
      for (float& x : j.axes) x = r.f32();
      r.done();
      return j;
    }
    case MessageType::SetMode: {
      SetMode s{r.u8()};
      r.done();
      return s;
    }
    case MessageType::SetHold: {
      SetHoldSetpoint s;
      for (double& x : s.pose) x = r.f64();
      r.done();
      return s;
    }
    case MessageType::Manipulator: {
      ManipulatorCmd mc;
      mc.yaw_rate = r.f32();
      mc.jaw_rate = r.f32();
      r.done();
      return mc;
    }
    case MessageType::Trim: {
      TrimFeedForward t;
      for (double& x : t.wrench) x = r.f64();
      r.done();
      return t;
    }
    case MessageType::EmergencyStop:
      r.done();
      return EmergencyStop{};
    case MessageType::ErrorReport: {
      ErrorReport e;
      e.code = r.u8();
      e.text.assign(reinterpret_cast<const char*>(r.data + r.pos), r.size - r.pos);
      r.pos = r.size;
      return e;
    }
  }
  throw DecodeError(DecodeErrorKind::UnknownType, r.base_offset - kHeaderSize + 3);
}

bool known_type(std::uint8_t t) {
  switch (static_cast<MessageType>(t)) {
    case MessageType::Telemetry:
    case MessageType::Joystick:
    case MessageType::SetMode:
    case MessageType::SetHold:
    case MessageType::Manipulator:
    case MessageType::Trim:
    case MessageType::EmergencyStop:
    case MessageType::ErrorReport:
      return true;
  }
  return false;
}

}  // namespace

const char* decode_error_name(DecodeErrorKind kind) {
  switch (kind) {
    case DecodeErrorKind::BadMagic: return "bad magic";
    case DecodeErrorKind::BadVersion: return "bad version";
    case DecodeErrorKind::Truncated: return "truncated frame";
    case DecodeErrorKind::BadLength: return "bad length";
    case DecodeErrorKind::BadCrc: return "bad CRC";
    case DecodeErrorKind::UnknownType: return "unknown type";
    case DecodeErrorKind::BadPayload: return "bad payload";
    case DecodeErrorKind::TrailingBytes: return "trailing bytes";
  }
  return "decode error";
}

DecodeError::DecodeError(DecodeErrorKind kind, std::size_t offset, const std::string& detail)
    : Error(std::string(decode_error_name(kind)) + " at offset " + std::to_string(offset) +
            (detail.empty() ? "" : ": " + detail)),
      kind_(kind),
      offset_(offset) {}

std::uint16_t crc16_ccitt_false(const std::uint8_t* data, std::size_t size) {
  std::uint16_t crc = 0xFFFF;
  for (std::size_t i = 0; i < size; ++i)
    crc = static_cast<std::uint16_t>((crc << 8) ^ kCrcTable[((crc >> 8) ^ data[i]) & 0xFF]);
  return crc;
}

MessageType message_type(const Message& m) {
  static constexpr MessageType kTypes[] = {MessageType::Telemetry,     MessageType::Joystick, MessageType::SetMode,
                                           MessageType::SetHold,       MessageType::Manipulator, MessageType::Trim,
                                           MessageType::EmergencyStop, MessageType::ErrorReport};
  return kTypes[m.index()];
}

std::optional<Command> as_command(const Message& m) {
  return std::visit(
      [](const auto& v) -> std::optional<Command> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TelemetryFrame> || std::is_same_v<T, ErrorReport>)
          return std::nullopt;
        else
          return Command{v};
      },
      m);
}

Message to_message(const Command& c) {
  return std::visit([](const auto& v) { return Message{v}; }, c);
}

std::vector<std::uint8_t> encode(const Message& m) {
  Writer payload;
  write_payload(payload, m);
  if (payload.out.size() > kMaxPayload) throw ArgumentError("payload exceeds 1024 bytes");
  Writer w;
  w.u8(kMagic0);
  w.u8(kMagic1);
  w.u8(kVersion);
  w.u8(static_cast<std::uint8_t>(message_type(m)));
  w.u16(static_cast<std::uint16_t>(payload.out.size()));
  w.out.insert(w.out.end(), payload.out.begin(), payload.out.end());
  w.u16(crc16_ccitt_false(w.out.data() + 3, w.out.size() - 3));
  return std::move(w.out);
}

Decoded decode_frame(const std::uint8_t* d, std::size_t n) {
  if (n < 1) throw DecodeError(DecodeErrorKind::Truncated, 0, "empty input");
  if (d[0] != kMagic0) throw DecodeError(DecodeErrorKind::BadMagic, 0);
  if (n < 2) throw DecodeError(DecodeErrorKind::Truncated, 1);
  if (d[1] != kMagic1) throw DecodeError(DecodeErrorKind::BadMagic, 1);
  if (n < 3) throw DecodeError(DecodeErrorKind::Truncated, 2);
  if (d[2] != kVersion) throw DecodeError(DecodeErrorKind::BadVersion, 2);
  if (n < kHeaderSize) throw DecodeError(DecodeErrorKind::Truncated, n, "incomplete header");
  const std::size_t len = (static_cast<std::size_t>(d[4]) << 8) | d[5];
  if (len > kMaxPayload) throw DecodeError(DecodeErrorKind::BadLength, 4, "payload length " + std::to_string(len));
  const std::size_t total = kHeaderSize + len + kCrcSize;
  if (n < total) throw DecodeError(DecodeErrorKind::Truncated, n, "frame needs " + std::to_string(total) + " bytes");
  const std::uint16_t want = static_cast<std::uint16_t>((d[total - 2] << 8) | d[total - 1]);
  if (crc16_ccitt_false(d + 3, len + 3) != want) throw DecodeError(DecodeErrorKind::BadCrc, total - 2);
  if (!known_type(d[3])) throw DecodeError(DecodeErrorKind::UnknownType, 3);
  Reader r(d + kHeaderSize, len, kHeaderSize);
  return {read_payload(static_cast<MessageType>(d[3]), r), total};
}

Message decode(const std::vector<std::uint8_t>& bytes) {
  Decoded dec = decode_frame(bytes.data(), bytes.size());
  if (dec.consumed != bytes.size()) throw DecodeError(DecodeErrorKind::TrailingBytes, dec.consumed);
  return std::move(dec.message);
}

void StreamDecoder::feed(const std::uint8_t* data, std::size_t size) { buffer_.insert(buffer_.end(), data, data + size); }

std::optional<StreamDecoder::Item> StreamDecoder::next() {
  if (buffer_.empty()) return std::nullopt;
  std::vector<std::uint8_t> head(buffer_.begin(),
                                 buffer_.begin() + static_cast<std::ptrdiff_t>(
                                                       std::min(buffer_.size(), kHeaderSize + kMaxPayload + kCrcSize)));
  try {
    Decoded dec = decode_frame(head.data(), head.size());
    buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(dec.consumed));
    stream_offset_ += dec.consumed;
    return Item{std::move(dec.message), std::nullopt};
  } catch (const DecodeError& e) {
    if (e.kind() == DecodeErrorKind::Truncated) return std::nullopt;
    DecodeError shifted(e.kind(), stream_offset_ + e.offset());
    // Drop the bad start and resynchronize on the next magic pair.
    std::size_t skip = 1;
    while (skip < buffer_.size() &&
           !(buffer_[skip] == kMagic0 && (skip + 1 >= buffer_.size() || buffer_[skip + 1] == kMagic1)))
      ++skip;
    buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(skip));
    stream_offset_ += skip;
    return Item{std::nullopt, shifted};
  }
}

}  // namespace scorpion::telemetry
