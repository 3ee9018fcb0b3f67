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

#include "net/ports.hpp"

#include <charconv>
#include <cstdlib>

#include "common/error.hpp"

namespace scorpion::net {

std::uint16_t parse_port(const std::string& text, const std::string& what) {
  unsigned value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end || value > 65535)
    throw ConfigError(what + ": '" + text + "' is not a port number");
  return static_cast<std::uint16_t>(value);
}

std::uint16_t port_from_env(const char* name, std::uint16_t fallback) {
  const char* value = std::getenv(name);
  if (value == nullptr || *value == '\0') return fallback;
  return parse_port(value, name);
}

}  // namespace scorpion::net
