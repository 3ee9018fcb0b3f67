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

#include "telemetry/csv.hpp"

#include <cerrno>
#include <charconv>
#include <cstring>
#include <fstream>

namespace scorpion::telemetry {

namespace {

void append_float(std::string& s, float v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", static_cast<double>(v));
  s += buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

const std::vector<std::string>& column_names() {
  static const std::vector<std::string> names = split(kCsvHeader);
  return names;
}

float parse_float(const std::string& cell, std::size_t col) {
  char* end = nullptr;
  errno = 0;
  const float v = std::strtof(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size())
    throw ConfigError("column '" + column_names()[col] + "': not a number: '" + cell + "'");
  return v;
}

template <typename T>
T parse_uint(const std::string& cell, std::size_t col) {
  T v{};
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty())
    throw ConfigError("column '" + column_names()[col] + "': not an unsigned integer: '" + cell + "'");
  return v;
}

std::uint8_t parse_byte(const std::string& cell, std::size_t col) {
  const unsigned v = parse_uint<unsigned>(cell, col);
  if (v > 255) throw ConfigError("column '" + column_names()[col] + "': out of range");
  return static_cast<std::uint8_t>(v);
}

}  // namespace

std::string format_csv_row(const TelemetryFrame& f) {
  std::string s = std::to_string(f.timestamp_us);
  auto add = [&](float v) {
    s += ',';
    append_float(s, v);
  };
  for (float v : f.pose) add(v);
  for (float v : f.twist) add(v);
  add(f.depth_m);
  add(f.temp_c);
  add(f.int_pressure_pa);
  add(f.water_pressure_pa);
  s += ',' + std::to_string(f.leak);
  for (float v : f.thrust) add(v);
  s += ',' + std::to_string(f.mode);
  add(f.manip_yaw);
  add(f.manip_jaw);
  s += ',' + std::to_string(f.faults);
  return s;
}

TelemetryFrame parse_csv_row(const std::string& raw) {
  std::string line = raw;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto cells = split(line);
  if (cells.size() != kCsvColumns)
    throw ConfigError("expected " + std::to_string(kCsvColumns) + " columns, found " + std::to_string(cells.size()));
  TelemetryFrame f;
  std::size_t c = 0;
  f.timestamp_us = parse_uint<std::uint64_t>(cells[c], c);
  ++c;
  for (float& v : f.pose) v = parse_float(cells[c], c), ++c;
  for (float& v : f.twist) v = parse_float(cells[c], c), ++c;
  f.depth_m = parse_float(cells[c], c), ++c;
  f.temp_c = parse_float(cells[c], c), ++c;
  f.int_pressure_pa = parse_float(cells[c], c), ++c;
  f.water_pressure_pa = parse_float(cells[c], c), ++c;
  f.leak = parse_byte(cells[c], c), ++c;
  for (float& v : f.thrust) v = parse_float(cells[c], c), ++c;
  f.mode = parse_byte(cells[c], c), ++c;
  f.manip_yaw = parse_float(cells[c], c), ++c;
  f.manip_jaw = parse_float(cells[c], c), ++c;
  f.faults = parse_byte(cells[c], c);
  return f;
}

std::vector<TelemetryFrame> read_csv_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read log " + path.string());
  std::vector<TelemetryFrame> out;
  std::string line;
  if (!std::getline(in, line)) return out;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw ConfigError(path.filename().string() + ":1: header does not match the log format");
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      out.push_back(parse_csv_row(line));
    } catch (const ConfigError& e) {
      throw ConfigError(path.filename().string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

CsvLogger::CsvLogger(const std::filesystem::path& path) : last_flush_(std::chrono::steady_clock::now()) {
  file_ = std::fopen(path.string().c_str(), "wb");
  if (file_ == nullptr) {
    fail("cannot open " + path.string() + ": " + std::strerror(errno));
    return;
  }
  if (std::fprintf(file_, "%s\n", kCsvHeader) < 0) fail("header write failed");
}

CsvLogger::~CsvLogger() { close(); }

void CsvLogger::fail(const std::string& what) {
  failed_ = true;
  last_error_ = what;
}

bool CsvLogger::write(const TelemetryFrame& frame) {
  if (file_ == nullptr) return false;
  const std::string row = format_csv_row(frame) + '\n';
  if (std::fwrite(row.data(), 1, row.size(), file_) != row.size()) {
    fail("row write failed");
    return false;
  }
  ++rows_;
  const auto now = std::chrono::steady_clock::now();
  if (now - last_flush_ >= std::chrono::seconds(1)) flush();
  return !failed_;
}

void CsvLogger::flush() {
  if (file_ == nullptr) return;
  if (std::fflush(file_) != 0) fail("flush failed");
  last_flush_ = std::chrono::steady_clock::now();
}

void CsvLogger::close() {
  if (file_ == nullptr) return;
  if (std::fflush(file_) != 0) fail("flush failed");
  if (std::fclose(file_) != 0) fail("close failed");
  file_ = nullptr;
}

}  // namespace scorpion::telemetry
