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
#include <map>
#include <string_view>

#include <nlohmann/json.hpp>

#include "hass/marker.hpp"
#include "hass/severity.hpp"

namespace hass {

// Per-marker arrays are indexed by index_of(MarkerKind).
using MarkerRates = std::array<double, 6>;

struct SeverityProfile {
  SeverityLevel severity = SeverityLevel::mild;
  // Expected events per eligible site.
  MarkerRates base_rate{};
  // Target share of markers on content words.
  double content_word_bias = 0.9;
  double complexity_exponent = 1.0;
  std::uint32_t cooccurrence_cap = 2;
  // Expected events per file; what calibration aims at.
  MarkerRates target_means{};

  // Throws InvalidArgument naming the offending field.
  void validate() const;

  double rate(MarkerKind k) const { return base_rate[index_of(k)]; }
  double target(MarkerKind k) const { return target_means[index_of(k)]; }

  friend bool operator==(const SeverityProfile&, const SeverityProfile&) = default;
};

// Per-file means each severity is calibrated against.
MarkerRates default_target_means(SeverityLevel s);
std::uint32_t default_cooccurrence_cap(SeverityLevel s);

nlohmann::ordered_json to_json(const SeverityProfile& p);
SeverityProfile profile_from_json(const nlohmann::json& j);

using ProfileSet = std::map<SeverityLevel, SeverityProfile>;

nlohmann::ordered_json to_json(const ProfileSet& profiles);
ProfileSet profiles_from_json(const nlohmann::json& j);

// Calibrated profiles shipped with the library.
const ProfileSet& default_profiles();
const SeverityProfile& default_profile(SeverityLevel s);

}  // namespace hass
