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
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "telemetry/protocol.hpp"

namespace scorpion::telemetry {

inline constexpr const char* kCsvHeader =
    "timestamp_us,x,y,z,roll,pitch,yaw,u,v,w,p,q,r,depth_m,temp_c,int_pressure_pa,water_pressure_pa,leak,"
    "f1,f2,f3,f4,f5,f6,f7,f8,mode,manip_yaw,manip_jaw,faults";
inline constexpr std::size_t kCsvColumns = 30;

/// One CSV row (no newline); floats with 6 significant digits.
std::string format_csv_row(const TelemetryFrame& frame);

/// Parses a row produced by format_csv_row. Throws ConfigError naming the
/// column on malformed input.
TelemetryFrame parse_csv_row(const std::string& line);

/// Reads a whole log; the header must match exactly. Errors name the
/// 1-based line number.
std::vector<TelemetryFrame> read_csv_log(const std::filesystem::path& path);

/// Appends frames to a CSV file, flushing at least once per second of wall
/// time and on close. A failed write is remembered rather than thrown so the
/// caller can keep publishing telemetry.
class CsvLogger {
 public:
  explicit CsvLogger(const std::filesystem::path& path);
  ~CsvLogger();
  CsvLogger(const CsvLogger&) = delete;
  CsvLogger& operator=(const CsvLogger&) = delete;

  bool write(const TelemetryFrame& frame);
  void flush();
  void close();

  bool failed() const { return failed_; }
  const std::string& last_error() const { return last_error_; }
  std::size_t rows() const { return rows_; }

 private:
  void fail(const std::string& what);

  std::FILE* file_ = nullptr;
  bool failed_ = false;
  std::string last_error_;
  std::size_t rows_ = 0;
  std::chrono::steady_clock::time_point last_flush_;
};

}  // namespace scorpion::telemetry
