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

#include <gtest/gtest.h>

#include <random>

#include "hass/calibrate.hpp"
#include "hass/error.hpp"
#include "hass/phono.hpp"
#include "hass/prompts.hpp"
#include "hass/realize.hpp"
#include "hass/seed.hpp"
#include "support/reference_rows.hpp"

namespace hass {
namespace {

std::size_t count_kind(const RealizationPlan& p, EventKind k) {
  return static_cast<std::size_t>(std::count_if(p.events.begin(), p.events.end(), [k](const RealizationEvent& e) { return e.kind == k; }));
}

std::size_t scaled(const RealizationPlan& p) {
  return static_cast<std::size_t>(std::count_if(p.events.begin(), p.events.end(), [](const RealizationEvent& e) {
    return e.duration_scale && *e.duration_scale > 1.0;
  }));
}

std::size_t repeats(const RealizationPlan& p) {
  return static_cast<std::size_t>(std::count_if(p.events.begin(), p.events.end(), [](const RealizationEvent& e) { return e.repeat_of.has_value(); }));
}

// REP copy length read off the token stream: the consonant run before the
// marker within its word (a pause or an earlier [REP] ends it, other
// markers are transparent),
// or the single vowel it follows.
std::size_t oracle_rep_expansion(const MarkedIpaUtterance& u) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < u.tokens.size(); ++i) {
    const auto& t = u.tokens[i];
    if (t.kind != TokenKind::marker || *t.marker != MarkerKind::REP) continue;
    std::size_t run = 0;
    for (std::size_t k = i; k-- > 0;) {
      const auto& p = u.tokens[k];
      if (p.kind == TokenKind::word_boundary || p.kind == TokenKind::punctuation) break;
      if (p.kind == TokenKind::marker) {
        if (*p.marker == MarkerKind::PAU || *p.marker == MarkerKind::REP) break;
        continue;
      }
      if (phonology::is_vowel(p.phoneme->symbol)) {
        if (run == 0) run = 1;
        break;
      }
      ++run;
    }
    total += run;
  }
  return total;
}

std::size_t phoneme_tokens(const MarkedIpaUtterance& u) {
  return static_cast<std::size_t>(std::count_if(u.tokens.begin(), u.tokens.end(), [](const MarkedToken& t) { return t.kind == TokenKind::phoneme; }));
}

TEST(Realizer, ControlUtteranceIsPlainPhonemes) {
  auto u = parse_marked_ipa(testing::kControlRow);
  auto plan = plan_realization(u, {}, 1);
  ASSERT_EQ(plan.events.size(), phoneme_tokens(u));
  std::size_t i = 0;
  for (const auto& t : u.tokens) {
    if (t.kind != TokenKind::phoneme) continue;
    EXPECT_EQ(plan.events[i].kind, EventKind::phoneme);
    EXPECT_EQ(plan.events[i].phoneme, t.phoneme->symbol);
    EXPECT_EQ(plan.events[i].duration_scale, 1.0);
    ++i;
  }
  EXPECT_EQ(count_kind(plan, EventKind::silence), 0u);
}

TEST(Realizer, SevereReferenceRow) {
  auto u = parse_marked_ipa(testing::kSevereRow);
  auto plan = plan_realization(u, {}, 3);
  EXPECT_EQ(count_kind(plan, EventKind::silence), 1u);
  EXPECT_EQ(scaled(plan), 1u);
  EXPECT_EQ(repeats(plan), 1u);
  // "lie(t)" is word 6: its /t/ never reaches the plan.
  std::vector<std::string> light;
  for (const auto& e : plan.events) {
    if (e.word_index == 6u && e.phoneme) light.push_back(*e.phoneme);
  }
  EXPECT_EQ(light, (std::vector<std::string>{"l", "aɪ"}));
  EXPECT_EQ(plan.events.size(), phoneme_tokens(u) + 1 + oracle_rep_expansion(u));
}

TEST(Realizer, ConservationOverInjectedBatches) {
  for (auto s : kDysfluentSeverities) {
    auto items = make_calibration_sample(bundled_prompts(), s, 120, 900 + static_cast<std::uint64_t>(s));
    for (std::size_t k = 0; k < items.size(); ++k) {
      auto u = inject_phonological(items[k].utterance, items[k].lexical, default_profile(s), k);
      auto c = count_markers(u);
      auto plan = plan_realization(u, {}, k);
      SCOPED_TRACE(serialize(u));
      ASSERT_EQ(count_kind(plan, EventKind::silence), c[MarkerKind::PAU]);
      ASSERT_EQ(scaled(plan), c[MarkerKind::PRO]);
      ASSERT_EQ(repeats(plan), c[MarkerKind::REP]);
      ASSERT_EQ(plan.events.size(), phoneme_tokens(u) + c[MarkerKind::PAU] + oracle_rep_expansion(u));
      for (const auto& e : plan.events) {
        if (e.silence_ms) {
          EXPECT_GE(*e.silence_ms, 300.0);
          EXPECT_LE(*e.silence_ms, 1200.0);
        }
        if (e.repeat_of) {
          // Copies follow their source and match it symbol for symbol.
          auto self = static_cast<std::size_t>(&e - plan.events.data());
          ASSERT_LT(e.repeat_of->start + e.repeat_of->length, self + 1);
          for (std::size_t i = 0; i < e.repeat_of->length; ++i) {
            EXPECT_EQ(plan.events[self + i].phoneme, plan.events[e.repeat_of->start + i].phoneme);
          }
        }
      }
    }
  }
}

TEST(Realizer, DeterministicAndSeedSensitive) {
  auto u = parse_marked_ipa("[PAU] kˈæt [PAU] sˈæt");
  EXPECT_EQ(plan_realization(u, {}, 5), plan_realization(u, {}, 5));
  EXPECT_NE(plan_realization(u, {}, 5), plan_realization(u, {}, 6));
  PlanOptions fixed;
  fixed.pause_ms_min = fixed.pause_ms_max = 500;
  auto plan = plan_realization(u, fixed, 1);
  EXPECT_DOUBLE_EQ(predicted_duration_ms(plan), 6 * 80.0 + 1000.0);
}

TEST(Realizer, ProlongationAndRepetitionShapes) {
  auto plan = plan_realization(parse_marked_ipa("sˈæ[PRO]t stɹ[REP]ˈiːt ˈæ[REP]nd"), {}, 1);
  std::vector<std::string> syms;
  for (const auto& e : plan.events) syms.push_back(*e.phoneme);
  EXPECT_EQ(syms, (std::vector<std::string>{"s", "æ", "t", "s", "t", "ɹ", "s", "t", "ɹ", "iː", "t", "æ", "æ", "n", "d"}));
  EXPECT_DOUBLE_EQ(*plan.events[1].duration_scale, 2.5);
  EXPECT_EQ(plan.events[6].repeat_of, (EventSpan{3, 3}));
  EXPECT_EQ(plan.events[12].repeat_of, (EventSpan{11, 1}));
}

TEST(Realizer, RejectsBadInput) {
  EXPECT_THROW(plan_realization(parse_marked_ipa("kˈæ[PRO][PRO]t"), {}, 1), InvalidArgument);
  MarkedIpaUtterance orphan;
  orphan.words.push_back({});
  orphan.tokens.push_back(MarkedToken::make_marker(MarkerKind::REP, 0));
  EXPECT_THROW(plan_realization(orphan, {}, 1), InvalidArgument);
  auto u = parse_marked_ipa("kˈæt");
  PlanOptions bad;
  bad.pause_ms_min = 900;
  bad.pause_ms_max = 300;
  EXPECT_THROW(plan_realization(u, bad, 1), InvalidArgument);
  PlanOptions scale;
  scale.prolong_scale = 1.2;
  EXPECT_THROW(plan_realization(u, scale, 1), InvalidArgument);
}

TEST(Realizer, LeakedDeletionIsCaught) {
  auto aligned = to_word_aligned_ipa("completely dark");
  LexicalResult lex;
  lex.origins = {0, 1};
  SeverityProfile p;
  p.severity = SeverityLevel::severe;
  p.base_rate[index_of(MarkerKind::DEL)] = 0.5;
  p.cooccurrence_cap = 3;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto u = inject_phonological(aligned, lex, p, seed);
    if (u.edits.empty()) continue;
    EXPECT_NO_THROW(plan_realization(u, {}, 1));
    // Put the first deleted phoneme back without touching the edits.
    const auto& e = u.edits.front();
    auto it = std::find_if(u.tokens.begin(), u.tokens.end(), [&](const MarkedToken& t) {
      return t.kind == TokenKind::marker && *t.marker == MarkerKind::DEL && t.word_index == e.word_index;
    });
    u.tokens.insert(it, MarkedToken::make_phoneme({e.target, Stress::none}, e.word_index));
    EXPECT_THROW(plan_realization(u, {}, 1), InvalidArgument);
    return;
  }
  FAIL() << "no deletion drawn";
}

RealizationPlan silent_clip(double ms, int rate = 22050, std::string id = "c") {
  RealizationPlan p;
  p.utterance_id = std::move(id);
  p.sample_rate_hz = rate;
  RealizationEvent e;
  e.kind = EventKind::silence;
  e.silence_ms = ms;
  p.events.push_back(e);
  return p;
}

TEST(Concatenation, TwoThreeSecondClips) {
  std::vector<RealizationPlan> plans{silent_clip(3000), silent_clip(3000)};
  auto spec = plan_concatenation(plans);
  EXPECT_DOUBLE_EQ(spec.predicted_duration_ms, 5950.0);
  EXPECT_EQ(spec.joints(), 1u);
  EXPECT_EQ(spec.curve, "equal-power");
}

TEST(Concatenation, SingleClipHasNoJoint) {
  std::vector<RealizationPlan> plans{silent_clip(1234)};
  auto spec = plan_concatenation(plans);
  EXPECT_EQ(spec.joints(), 0u);
  EXPECT_DOUBLE_EQ(spec.predicted_duration_ms, 1234.0);
}

TEST(Concatenation, SumMinusCrossfades) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 1 + rng() % 12;
    std::vector<RealizationPlan> plans;
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double ms = 100 + static_cast<double>(rng() % 5000);
      sum += ms;
      plans.push_back(silent_clip(ms));
    }
    EXPECT_DOUBLE_EQ(plan_concatenation(plans).predicted_duration_ms, sum - 50.0 * static_cast<double>(n - 1));
  }
}

TEST(Concatenation, MixedRatesRejected) {
  std::vector<RealizationPlan> plans{silent_clip(1000, 22050), silent_clip(1000, 16000)};
  EXPECT_THROW(plan_concatenation(plans), InvalidArgument);
  EXPECT_THROW(plan_concatenation(std::span<const RealizationPlan>{}), InvalidArgument);
}

TEST(RealizationSchema, RoundTripAndVersionCheck) {
  PlanOptions o;
  o.utterance_id = "severe-00001";
  o.speaker_id = "spk-3";
  auto plan = plan_realization(parse_marked_ipa(testing::kSevereRow), o, 4);
  auto j = to_json(plan);
  EXPECT_EQ(j["schema"], "hass.realization-plan");
  EXPECT_EQ(j["schema-version"], 1);
  EXPECT_EQ(realization_plan_from_json(nlohmann::json::parse(j.dump())), plan);
  auto bumped = nlohmann::json::parse(j.dump());
  bumped["schema-version"] = 2;
  EXPECT_THROW(realization_plan_from_json(bumped), InvalidArgument);
  auto wrong = nlohmann::json::parse(j.dump());
  wrong["events"][0]["silence-ms"] = 10;
  EXPECT_THROW(realization_plan_from_json(wrong), InvalidArgument);

  std::vector<RealizationPlan> plans{silent_clip(3000), silent_clip(3000)};
  auto spec = plan_concatenation(plans);
  auto sj = to_json(spec);
  EXPECT_EQ(concatenation_spec_from_json(nlohmann::json::parse(sj.dump())), spec);
  sj["schema-version"] = 0;
  EXPECT_THROW(concatenation_spec_from_json(sj), InvalidArgument);
  sj["schema-version"] = 1;
  sj["schema"] = "hass.realization-plan";
  EXPECT_THROW(concatenation_spec_from_json(sj), InvalidArgument);
}

}  // namespace
}  // namespace hass
