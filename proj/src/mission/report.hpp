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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace scorpion::mission {

struct Metric {
  std::string name;
  double value = 0.0;
  std::string unit;
};

struct Criterion {
  std::string name;
  double measured = 0.0;
  std::string comparator;  // "<=", "<", ">=" or ">"
  double limit = 0.0;
  bool informational = false;
  bool passed() const;
};

/// Outcome of one experiment. Pass/fail is derived from the criteria only.
struct ExperimentReport {
  std::string scenario;
  std::vector<Metric> metrics;
  std::vector<Criterion> criteria;
  std::vector<std::string> artifacts;
  std::vector<std::string> notes;

  bool passed() const;
  std::optional<double> metric(const std::string& name) const;
  nlohmann::json to_json() const;
  std::string summary() const;
  /// Writes report.json and summary.txt into `dir` and lists them as artifacts.
  void write(const std::filesystem::path& dir);
};

}  // namespace scorpion::mission
