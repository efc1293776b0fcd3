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

#include "hass/profile.hpp"

#include <cmath>

#include "hass/error.hpp"
#include "resources.hpp"

namespace hass {

namespace {

void check_rates(const MarkerRates& r, std::string_view field) {
  for (auto k : kAllMarkers) {
    double v = r[index_of(k)];
    if (!std::isfinite(v) || v < 0) {
      throw InvalidArgument("profile " + std::string(field) + "." + std::string(to_string(k)) + " must be a non-negative number");
    }
  }
}

nlohmann::ordered_json rates_to_json(const MarkerRates& r) {
  nlohmann::ordered_json j;
  for (auto k : kAllMarkers) j[std::string(to_string(k))] = r[index_of(k)];
  return j;
}

MarkerRates rates_from_json(const nlohmann::json& j) {
  MarkerRates r{};
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto k = parse_marker_kind(it.key());
    if (!k) throw InvalidArgument("unknown marker '" + it.key() + "' in profile");
    r[index_of(*k)] = it.value().get<double>();
  }
  return r;
}

}  // namespace

void SeverityProfile::validate() const {
  if (severity == SeverityLevel::control) throw InvalidArgument("control severity has no phoneme-level profile");
  check_rates(base_rate, "base-rate");
  check_rates(target_means, "target-means");
  if (!(content_word_bias >= 0.8 && content_word_bias <= 1.0)) {
    throw InvalidArgument("profile content-word-bias must lie in [0.8, 1]");
  }
  if (!std::isfinite(complexity_exponent) || complexity_exponent < 0) {
    throw InvalidArgument("profile complexity-exponent must be non-negative");
  }
  if (cooccurrence_cap == 0) throw InvalidArgument("profile co-occurrence-cap must be positive");
}

// PAU SUB DEL REP PRO INS. PRO/REP and the mild primary split are fitted
// to the totals and primary-tier shares.
MarkerRates default_target_means(SeverityLevel s) {
  switch (s) {
    case SeverityLevel::mild: return {2.4, 2.4, 2.7, 1.2, 1.3, 0.0};
    case SeverityLevel::moderate: return {4.3, 4.3, 4.9, 3.5, 3.7, 0.4};
    case SeverityLevel::severe: return {6.1, 5.8, 7.1, 4.5, 4.7, 0.8};
    case SeverityLevel::control: break;
  }
  return {};
}

std::uint32_t default_cooccurrence_cap(SeverityLevel s) { return s == SeverityLevel::severe ? 3 : 2; }

nlohmann::ordered_json to_json(const SeverityProfile& p) {
  nlohmann::ordered_json j;
  j["severity"] = to_string(p.severity);
  j["base-rate"] = rates_to_json(p.base_rate);
  j["content-word-bias"] = p.content_word_bias;
  j["complexity-exponent"] = p.complexity_exponent;
  j["co-occurrence-cap"] = p.cooccurrence_cap;
  j["target-means"] = rates_to_json(p.target_means);
  return j;
}

SeverityProfile profile_from_json(const nlohmann::json& j) {
  SeverityProfile p;
  try {
    p.severity = parse_severity(j.at("severity").get<std::string>());
    p.base_rate = rates_from_json(j.at("base-rate"));
    p.content_word_bias = j.at("content-word-bias").get<double>();
    p.complexity_exponent = j.at("complexity-exponent").get<double>();
    p.cooccurrence_cap = j.at("co-occurrence-cap").get<std::uint32_t>();
    p.target_means = rates_from_json(j.at("target-means"));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed profile: ") + e.what());
  }
  p.validate();
  return p;
}

nlohmann::ordered_json to_json(const ProfileSet& profiles) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [s, p] : profiles) j[std::string(to_string(s))] = to_json(p);
  return j;
}

ProfileSet profiles_from_json(const nlohmann::json& j) {
  ProfileSet out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto p = profile_from_json(it.value());
    if (to_string(p.severity) != it.key()) {
      throw InvalidArgument("profile under '" + it.key() + "' is for " + std::string(to_string(p.severity)));
    }
    out.emplace(p.severity, p);
  }
  return out;
}

const ProfileSet& default_profiles() {
  static const ProfileSet profiles = profiles_from_json(nlohmann::json::parse(resources::kProfilesJson));
  return profiles;
}

const SeverityProfile& default_profile(SeverityLevel s) {
  const auto& all = default_profiles();
  auto it = all.find(s);
  if (it == all.end()) throw InvalidArgument("no bundled profile for " + std::string(to_string(s)));
  return it->second;
}

}  // namespace hass
