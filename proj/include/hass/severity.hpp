// Copyright 2026 The hass Authors
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
#include <cstdint>
#include <string_view>

#include "hass/error.hpp"

namespace hass {

// Declaration order is the clinical order: control < mild < moderate < severe.
enum class SeverityLevel : std::uint8_t { control, mild, moderate, severe };

inline constexpr std::array<SeverityLevel, 4> kAllSeverities{
    SeverityLevel::control, SeverityLevel::mild, SeverityLevel::moderate,
    SeverityLevel::severe};

inline constexpr std::array<SeverityLevel, 3> kDysfluentSeverities{
    SeverityLevel::mild, SeverityLevel::moderate, SeverityLevel::severe};

constexpr std::string_view to_string(SeverityLevel s) {
  switch (s) {
    case SeverityLevel::control: return "control";
    case SeverityLevel::mild: return "mild";
    case SeverityLevel::moderate: return "moderate";
    case SeverityLevel::severe: return "severe";
  }
  return "control";
}

inline SeverityLevel parse_severity(std::string_view name) {
  for (auto s : kAllSeverities) {
    if (to_string(s) == name) return s;
  }
  throw InvalidArgument("unknown severity '" + std::string(name) + "'");
}

}  // namespace hass
