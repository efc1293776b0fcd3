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

#include "hass/realize.hpp"

#include <cmath>
#include <random>

#include "hass/error.hpp"

namespace hass {

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::phoneme: return "phoneme";
    case EventKind::silence: return "silence";
    case EventKind::crossfade_joint: return "crossfade-joint";
  }
  return "phoneme";
}

namespace {

EventKind parse_event_kind(std::string_view s) {
  for (auto k : {EventKind::phoneme, EventKind::silence, EventKind::crossfade_joint}) {
    if (to_string(k) == s) return k;
  }
  throw InvalidArgument("unknown event kind '" + std::string(s) + "'");
}

RealizationEvent phoneme_event(const std::string& symbol, std::size_t word) {
  RealizationEvent e;
  e.phoneme = symbol;
  e.duration_scale = 1.0;
  e.word_index = word;
  return e;
}

// With target alignment and edit metadata, rebuild each word's surface from
// its target and check the token stream agrees, so nothing marked deleted
// slipped through.
void verify_deletions(const MarkedIpaUtterance& u) {
  if (u.alignment != Alignment::target || u.edits.empty()) return;
  for (std::size_t w = 0; w < u.words.size(); ++w) {
    const auto& target = u.words[w].phonemes;
    std::vector<std::optional<std::string>> slots(target.size());
    std::vector<std::vector<std::string>> after(target.size());
    for (std::size_t j = 0; j < target.size(); ++j) slots[j] = target[j].symbol;
    for (const auto& e : u.edits) {
      if (e.word_index != w) continue;
      if (e.target_position >= target.size()) throw InvalidArgument("edit outside word " + std::to_string(w));
      if (e.kind == MarkerKind::DEL) slots[e.target_position].reset();
      if (e.kind == MarkerKind::SUB) slots[e.target_position] = e.surface;
      if (e.kind == MarkerKind::INS) after[e.target_position].push_back(e.surface);
    }
    std::vector<std::string> expected;
    for (std::size_t j = 0; j < target.size(); ++j) {
      if (slots[j]) expected.push_back(*slots[j]);
      for (const auto& s : after[j]) expected.push_back(s);
    }
    std::vector<std::string> actual;
    for (const auto& p : surface_phonemes(u, w)) actual.push_back(p.symbol);
    if (actual != expected) {
      throw InvalidArgument("word " + std::to_string(w) + " surface disagrees with its edits (deleted phoneme present?)");
    }
  }
}

}  // namespace

RealizationPlan plan_realization(const MarkedIpaUtterance& u, const PlanOptions& options, std::uint64_t seed) {
  if (!(options.pause_ms_min >= 0 && options.pause_ms_min <= options.pause_ms_max)) {
    throw InvalidArgument("pause range must satisfy 0 <= min <= max");
  }
  if (!(options.prolong_scale >= 1.5 && options.prolong_scale <= 4.0)) {
    throw InvalidArgument("prolong scale must lie in [1.5, 4]");
  }
  if (options.sample_rate_hz <= 0) throw InvalidArgument("sample rate must be positive");
  verify_deletions(u);

  RealizationPlan plan;
  plan.utterance_id = options.utterance_id;
  plan.speaker_id = options.speaker_id;
  plan.sample_rate_hz = options.sample_rate_hz;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pause(options.pause_ms_min, options.pause_ms_max);

  // Events of the current word that came straight from tokens (not copies).
  std::vector<std::size_t> word_events;
  std::size_t run_floor = 0;  // a pause inside the word cuts onset runs here
  std::optional<std::size_t> current_word;
  for (const auto& t : u.tokens) {
    switch (t.kind) {
      case TokenKind::phoneme:
        if (current_word != t.word_index) {
          word_events.clear();
          run_floor = 0;
          current_word = t.word_index;
        }
        word_events.push_back(plan.events.size());
        plan.events.push_back(phoneme_event(t.phoneme->symbol, t.word_index));
        break;
      case TokenKind::punctuation:
        break;
      case TokenKind::word_boundary:
        word_events.clear();
        run_floor = 0;
        current_word.reset();
        break;
      case TokenKind::marker:
        switch (*t.marker) {
          case MarkerKind::PAU: {
            RealizationEvent e;
            e.kind = EventKind::silence;
            e.silence_ms = options.pause_ms_min == options.pause_ms_max ? options.pause_ms_min : pause(rng);
            e.word_index = t.word_index;
            plan.events.push_back(e);
            if (current_word == t.word_index) run_floor = word_events.size();
            break;
          }
          case MarkerKind::PRO: {
            if (word_events.empty() || current_word != t.word_index) {
              throw InvalidArgument("[PRO] with no phoneme to prolong in word " + std::to_string(t.word_index));
            }
            auto& e = plan.events[word_events.back()];
            if (*e.duration_scale > 1.0) throw InvalidArgument("stacked [PRO] in word " + std::to_string(t.word_index));
            e.duration_scale = options.prolong_scale;
            break;
          }
          case MarkerKind::REP: {
            if (word_events.size() <= run_floor || current_word != t.word_index) {
              throw InvalidArgument("[REP] with no preceding phoneme in word " + std::to_string(t.word_index));
            }
            // The onset: a vowel repeats alone, consonants as the run that
            // ends at the marker. Pauses and earlier copies cut the run, so
            // the source span is contiguous.
            std::size_t k = word_events.size() - 1;
            if (phonology::is_consonant(*plan.events[word_events[k]].phoneme)) {
              while (k > run_floor && phonology::is_consonant(*plan.events[word_events[k - 1]].phoneme)) --k;
            }
            std::size_t start = word_events[k];
            std::size_t length = word_events.size() - k;
            for (std::size_t i = 0; i < length; ++i) {
              auto copy = phoneme_event(*plan.events[start + i].phoneme, t.word_index);
              if (i == 0) copy.repeat_of = EventSpan{start, length};
              plan.events.push_back(copy);
            }
            run_floor = word_events.size();
            break;
          }
          case MarkerKind::SUB:
          case MarkerKind::DEL:
          case MarkerKind::INS:
            // Segment changes were applied upstream.
            break;
        }
        break;
    }
  }
  return plan;
}

double predicted_duration_ms(const RealizationPlan& plan) {
  double ms = 0;
  for (const auto& e : plan.events) {
    if (e.kind == EventKind::phoneme) ms += plan.nominal_phoneme_ms * e.duration_scale.value_or(1.0);
    if (e.kind == EventKind::silence) ms += e.silence_ms.value_or(0.0);
  }
  return ms;
}

ConcatenationSpec plan_concatenation(std::span<const RealizationPlan> plans, double crossfade_ms) {
  if (plans.empty()) throw InvalidArgument("concatenation needs at least one plan");
  if (!(crossfade_ms >= 0)) throw InvalidArgument("crossfade must be non-negative");
  ConcatenationSpec spec;
  spec.crossfade_ms = crossfade_ms;
  spec.sample_rate_hz = plans.front().sample_rate_hz;
  for (const auto& p : plans) {
    if (p.sample_rate_hz != spec.sample_rate_hz) {
      throw InvalidArgument("mixed sample rates: " + std::to_string(spec.sample_rate_hz) + " and " +
                            std::to_string(p.sample_rate_hz));
    }
    double d = predicted_duration_ms(p);
    if (plans.size() > 1 && d < crossfade_ms) {
      throw InvalidArgument("clip '" + p.utterance_id + "' is shorter than the crossfade");
    }
    spec.clips.push_back({p.utterance_id, d});
    spec.predicted_duration_ms += d;
  }
  spec.predicted_duration_ms -= crossfade_ms * static_cast<double>(spec.joints());
  return spec;
}

nlohmann::ordered_json to_json(const RealizationPlan& plan) {
  nlohmann::ordered_json j;
  j["schema"] = kRealizationPlanSchema;
  j["schema-version"] = kRealizationSchemaVersion;
  j["utterance-id"] = plan.utterance_id;
  j["speaker-id"] = plan.speaker_id;
  j["sample-rate-hz"] = plan.sample_rate_hz;
  j["nominal-phoneme-ms"] = plan.nominal_phoneme_ms;
  auto& events = j["events"] = nlohmann::ordered_json::array();
  for (const auto& e : plan.events) {
    nlohmann::ordered_json je;
    je["kind"] = to_string(e.kind);
    if (e.phoneme) je["phoneme"] = *e.phoneme;
    if (e.duration_scale) je["duration-scale"] = *e.duration_scale;
    if (e.silence_ms) je["silence-ms"] = *e.silence_ms;
    if (e.repeat_of) je["repeat-of"] = {{"start", e.repeat_of->start}, {"length", e.repeat_of->length}};
    if (e.word_index) je["word-index"] = *e.word_index;
    events.push_back(std::move(je));
  }
  return j;
}

namespace {

void check_schema(const nlohmann::json& j, std::string_view name) {
  if (j.value("schema", std::string()) != name) throw InvalidArgument("not a " + std::string(name) + " document");
  int v = j.value("schema-version", -1);
  if (v != kRealizationSchemaVersion) {
    throw InvalidArgument(std::string(name) + " schema-version " + std::to_string(v) + " is not supported (expected " +
                          std::to_string(kRealizationSchemaVersion) + ")");
  }
}

}  // namespace

RealizationPlan realization_plan_from_json(const nlohmann::json& j) {
  check_schema(j, kRealizationPlanSchema);
  RealizationPlan p;
  try {
    p.utterance_id = j.at("utterance-id").get<std::string>();
    p.speaker_id = j.at("speaker-id").get<std::string>();
    p.sample_rate_hz = j.at("sample-rate-hz").get<int>();
    p.nominal_phoneme_ms = j.value("nominal-phoneme-ms", 80.0);
    for (const auto& je : j.at("events")) {
      RealizationEvent e;
      e.kind = parse_event_kind(je.at("kind").get<std::string>());
      if (je.contains("phoneme")) e.phoneme = je["phoneme"].get<std::string>();
      if (je.contains("duration-scale")) e.duration_scale = je["duration-scale"].get<double>();
      if (je.contains("silence-ms")) e.silence_ms = je["silence-ms"].get<double>();
      if (je.contains("repeat-of")) {
        e.repeat_of = EventSpan{je["repeat-of"].at("start").get<std::size_t>(), je["repeat-of"].at("length").get<std::size_t>()};
      }
      if (je.contains("word-index")) e.word_index = je["word-index"].get<std::size_t>();
      bool is_silence = e.kind == EventKind::silence;
      bool is_phoneme = e.kind == EventKind::phoneme;
      if (e.silence_ms.has_value() != is_silence || e.duration_scale.has_value() != is_phoneme) {
        throw InvalidArgument("event " + std::to_string(p.events.size()) + " has fields that do not match its kind");
      }
      if (e.duration_scale && !(*e.duration_scale >= 1.0 && *e.duration_scale <= 4.0)) {
        throw InvalidArgument("duration-scale outside [1, 4]");
      }
      p.events.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed realization plan: ") + e.what());
  }
  return p;
}

nlohmann::ordered_json to_json(const ConcatenationSpec& spec) {
  nlohmann::ordered_json j;
  j["schema"] = kConcatenationSpecSchema;
  j["schema-version"] = kRealizationSchemaVersion;
  j["crossfade-ms"] = spec.crossfade_ms;
  j["curve"] = spec.curve;
  j["sample-rate-hz"] = spec.sample_rate_hz;
  j["predicted-duration-ms"] = spec.predicted_duration_ms;
  auto& clips = j["clips"] = nlohmann::ordered_json::array();
  for (const auto& c : spec.clips) clips.push_back({{"utterance-id", c.utterance_id}, {"duration-ms", c.duration_ms}});
  return j;
}

ConcatenationSpec concatenation_spec_from_json(const nlohmann::json& j) {
  check_schema(j, kConcatenationSpecSchema);
  ConcatenationSpec s;
  try {
    s.crossfade_ms = j.at("crossfade-ms").get<double>();
    s.curve = j.at("curve").get<std::string>();
    s.sample_rate_hz = j.at("sample-rate-hz").get<int>();
    s.predicted_duration_ms = j.at("predicted-duration-ms").get<double>();
    for (const auto& c : j.at("clips")) s.clips.push_back({c.at("utterance-id").get<std::string>(), c.at("duration-ms").get<double>()});
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed concatenation spec: ") + e.what());
  }
  return s;
}

}  // namespace hass
