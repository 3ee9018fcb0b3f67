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
#include <filesystem>
#include <string>

#include "alloc/allocator.hpp"
#include "json.hpp"
#include "runtime/session.hpp"

namespace scorpion::mission {

/// Allocation instance in YAML. `tau` is required; `b`, `weights`, `lower`,
/// `upper` and `epsilon` default to the vehicle in `defaults`.
alloc::AllocationProblem parse_allocation_instance(const std::string& text, const std::string& source,
                                                   const runtime::SessionConfig& defaults);
alloc::AllocationProblem load_allocation_instance(const std::filesystem::path& path,
                                                  const runtime::SessionConfig& defaults);

/// Thrusts, achieved wrench, residual, saturated set, objective and
/// iteration count.
nlohmann::json allocation_dump(const alloc::AllocationProblem& problem, const alloc::AllocationResult& result);

struct ReplayOptions {
  std::string host = "127.0.0.1";
  std::uint16_t port = 14550;
  double speed = 1.0;
  const std::atomic<bool>* stop = nullptr;
};

/// Reads a telemetry CSV log and re-publishes it over UDP. Returns the
/// number of frames sent; a malformed row throws ConfigError naming it.
std::uint64_t replay_log(const std::filesystem::path& csv, const ReplayOptions& options);

}  // namespace scorpion::mission
