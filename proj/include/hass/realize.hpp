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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hass/marker.hpp"

namespace hass {

inline constexpr int kRealizationSchemaVersion = 1;
inline constexpr std::string_view kRealizationPlanSchema = "hass.realization-plan";
inline constexpr std::string_view kConcatenationSpecSchema = "hass.concatenation-spec";

enum class EventKind : std::uint8_t { phoneme, silence, crossfade_joint };

std::string_view to_string(EventKind k);

// Span of earlier events [start, start + length).
struct EventSpan {
  std::size_t start = 0;
  std::size_t length = 0;
  friend bool operator==(const EventSpan&, const EventSpan&) = default;
};

struct RealizationEvent {
  EventKind kind = EventKind::phoneme;
  std::optional<std::string> phoneme;
  std::optional<double> duration_scale;  // phoneme events only, in [1, 4]
  std::optional<double> silence_ms;      // silence events only
  std::optional<EventSpan> repeat_of;    // first event of a REP copy
  std::optional<std::size_t> word_index;

  friend bool operator==(const RealizationEvent&, const RealizationEvent&) = default;
};

struct RealizationPlan {
  std::vector<RealizationEvent> events;
  std::string utterance_id;
  std::string speaker_id;
  int sample_rate_hz = 22050;
  // Unscaled phoneme length used for duration predictions.
  double nominal_phoneme_ms = 80.0;

  friend bool operator==(const RealizationPlan&, const RealizationPlan&) = default;
};

struct PlanOptions {
  double pause_ms_min = 300.0;
  double pause_ms_max = 1200.0;
  double prolong_scale = 2.5;
  std::string utterance_id;
  std::string speaker_id;
  int sample_rate_hz = 22050;
};

/// Event plan for one utterance. PAU becomes a silence drawn per instance,
/// PRO scales the phoneme it follows, REP duplicates the onset in front of
/// the marker. Throws InvalidArgument on bad options, a REP with nothing to
/// repeat, stacked PRO, or a deleted phoneme still present.
RealizationPlan plan_realization(const MarkedIpaUtterance& u, const PlanOptions& options, std::uint64_t seed);

double predicted_duration_ms(const RealizationPlan& plan);

struct ConcatenationClip {
  std::string utterance_id;
  double duration_ms = 0;
  friend bool operator==(const ConcatenationClip&, const ConcatenationClip&) = default;
};

struct ConcatenationSpec {
  std::vector<ConcatenationClip> clips;
  double crossfade_ms = 50.0;
  std::string curve = "equal-power";
  int sample_rate_hz = 22050;
  double predicted_duration_ms = 0;

  std::size_t joints() const { return clips.empty() ? 0 : clips.size() - 1; }
  friend bool operator==(const ConcatenationSpec&, const ConcatenationSpec&) = default;
};

ConcatenationSpec plan_concatenation(std::span<const RealizationPlan> plans, double crossfade_ms = 50.0);

nlohmann::ordered_json to_json(const RealizationPlan& plan);
RealizationPlan realization_plan_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const ConcatenationSpec& spec);
ConcatenationSpec concatenation_spec_from_json(const nlohmann::json& j);

}  // namespace hass
