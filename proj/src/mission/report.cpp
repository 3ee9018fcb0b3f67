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

#include "mission/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "common/error.hpp"

namespace scorpion::mission {

namespace {

std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

bool Criterion::passed() const {
  if (std::isnan(measured)) return false;
  if (comparator == "<=") return measured <= limit;
  if (comparator == "<") return measured < limit;
  if (comparator == ">=") return measured >= limit;
  if (comparator == ">") return measured > limit;
  return false;
}

bool ExperimentReport::passed() const {
  for (const auto& c : criteria)
    if (!c.informational && !c.passed()) return false;
  return true;
}

std::optional<double> ExperimentReport::metric(const std::string& name) const {
  for (const auto& m : metrics)
    if (m.name == name) return m.value;
  return std::nullopt;
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json j;
  j["scenario"] = scenario;
  j["passed"] = passed();
  j["metrics"] = nlohmann::json::array();
  for (const auto& m : metrics) j["metrics"].push_back({{"name", m.name}, {"value", number_or_null(m.value)}, {"unit", m.unit}});
  j["criteria"] = nlohmann::json::array();
  for (const auto& c : criteria)
    j["criteria"].push_back({{"name", c.name},
                             {"measured", number_or_null(c.measured)},
                             {"comparator", c.comparator},
                             {"limit", c.limit},
                             {"informational", c.informational},
                             {"passed", c.passed()}});
  j["artifacts"] = artifacts;
  j["notes"] = notes;
  return j;
}

std::string ExperimentReport::summary() const {
  std::ostringstream out;
  out << "scenario: " << scenario << "\n";
  for (const auto& m : metrics) out << "  " << m.name << " = " << g6(m.value) << (m.unit.empty() ? "" : " " + m.unit) << "\n";
  for (const auto& c : criteria) {
    out << "  [" << (c.informational ? "INFO" : (c.passed() ? "PASS" : "FAIL")) << "] " << c.name << ": "
        << g6(c.measured) << " " << c.comparator << " " << g6(c.limit) << "\n";
  }
  for (const auto& n : notes) out << "  note: " << n << "\n";
  out << "result: " << (passed() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

void ExperimentReport::write(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto json_path = dir / "report.json";
  const auto text_path = dir / "summary.txt";
  for (const auto& p : {json_path, text_path})
    if (std::find(artifacts.begin(), artifacts.end(), p.string()) == artifacts.end()) artifacts.push_back(p.string());
  std::ofstream js(json_path);
  js << to_json().dump(2) << "\n";
  std::ofstream txt(text_path);
  txt << summary();
  if (!js || !txt) throw IoError("cannot write report into " + dir.string());
}

}  // namespace scorpion::mission
