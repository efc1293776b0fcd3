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

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "hass/corpus.hpp"
#include "hass/error.hpp"
#include "hass/prompts.hpp"

namespace hass {
namespace {

namespace fs = std::filesystem;

CorpusSpec scaled_spec() {
  CorpusSpec spec;
  spec.class_counts = {{SeverityLevel::control, 201},
                       {SeverityLevel::mild, 87},
                       {SeverityLevel::moderate, 110},
                       {SeverityLevel::severe, 79}};
  spec.seed = 4242;
  return spec;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path fresh_dir(const std::string& name) {
  auto d = fs::temp_directory_path() / name;
  fs::remove_all(d);
  return d;
}

const CorpusManifest& scaled_manifest() {
  static const CorpusManifest m = build_corpus(scaled_spec(), {}, {4, {}});
  return m;
}

TEST(Corpus, ScaledReferenceCountsAreExact) {
  const auto& m = scaled_manifest();
  std::map<SeverityLevel, std::size_t> counts;
  for (const auto& r : m.rows) counts[r.severity] += 1;
  EXPECT_EQ(counts[SeverityLevel::control], 201u);
  EXPECT_EQ(counts[SeverityLevel::mild], 87u);
  EXPECT_EQ(counts[SeverityLevel::moderate], 110u);
  EXPECT_EQ(counts[SeverityLevel::severe], 79u);
  EXPECT_EQ(m.rows.size(), m.plans.size());
  EXPECT_TRUE(std::is_sorted(m.rows.begin(), m.rows.end(),
                             [](const auto& a, const auto& b) { return a.clip_id < b.clip_id; }));
  EXPECT_EQ(m.rows.front().clip_id, "control-00000");
  EXPECT_EQ(m.rows.back().clip_id, "severe-00078");
}

TEST(Corpus, ControlsShareSpeakerAndPromptPools) {
  const auto& m = scaled_manifest();
  auto spec = scaled_spec();
  std::set<std::string> pool(spec.speaker_pool.begin(), spec.speaker_pool.end());
  std::set<std::size_t> control_prompts, dysfluent_prompts;
  for (const auto& r : m.rows) {
    EXPECT_TRUE(pool.count(r.speaker_id)) << r.speaker_id;
    (r.severity == SeverityLevel::control ? control_prompts : dysfluent_prompts).insert(r.prompt_id);
    EXPECT_EQ(r.ground_truth, bundled_prompts()[r.prompt_id]);
  }
  EXPECT_EQ(control_prompts, dysfluent_prompts);
  EXPECT_EQ(control_prompts.size(), 40u);
}

TEST(Corpus, RowInvariants) {
  const auto& m = scaled_manifest();
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    const auto& r = m.rows[i];
    SCOPED_TRACE(r.clip_id);
    auto parsed = parse_marked_ipa(r.marked_ipa);
    EXPECT_EQ(serialize(parsed), r.marked_ipa);
    EXPECT_EQ(count_markers(parsed), r.counts);
    if (r.severity == SeverityLevel::control) EXPECT_EQ(r.counts.total(), 0u);
    EXPECT_EQ(r.backend, "rule-based");
    EXPECT_EQ(r.plan_path, "plans/" + r.clip_id + ".json");
    EXPECT_EQ(m.plans[i].utterance_id, r.clip_id);
    EXPECT_EQ(m.plans[i].speaker_id, r.speaker_id);
    auto back = manifest_row_from_json(to_json(r));
    EXPECT_EQ(to_json(back), to_json(r));
  }
}

TEST(Corpus, RebuildIsByteIdentical) {
  auto a = fresh_dir("hass_corpus_a");
  auto b = fresh_dir("hass_corpus_b");
  write_corpus(scaled_manifest(), a);
  write_corpus(build_corpus(scaled_spec(), {}, {1, {}}), b);
  EXPECT_EQ(slurp(a / "manifest.jsonl"), slurp(b / "manifest.jsonl"));
  EXPECT_EQ(slurp(a / "summary.json"), slurp(b / "summary.json"));
  std::size_t plans = 0;
  for (const auto& e : fs::directory_iterator(a / "plans")) {
    ++plans;
    EXPECT_EQ(slurp(e.path()), slurp(b / "plans" / e.path().filename()));
  }
  EXPECT_EQ(plans, 477u);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Corpus, RowContentDependsOnlyOnItsKey) {
  CorpusSpec small;
  small.class_counts = {{SeverityLevel::mild, 4}};
  small.seed = 4242;
  auto a = build_corpus(small, {}, {1, {}});
  auto b = scaled_manifest();
  for (const auto& r : a.rows) {
    auto it = std::find_if(b.rows.begin(), b.rows.end(), [&](const auto& x) { return x.clip_id == r.clip_id; });
    ASSERT_NE(it, b.rows.end());
    EXPECT_EQ(to_json(r), to_json(*it));
  }
}

TEST(Corpus, AllZeroCountsGiveHeaderOnly) {
  CorpusSpec spec;
  spec.class_counts = {{SeverityLevel::control, 0}, {SeverityLevel::mild, 0}};
  auto m = build_corpus(spec);
  EXPECT_TRUE(m.rows.empty());
  auto d = fresh_dir("hass_corpus_empty");
  write_corpus(m, d);
  auto text = slurp(d / "manifest.jsonl");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
  auto back = read_manifest(d / "manifest.jsonl");
  EXPECT_TRUE(back.rows.empty());
  EXPECT_EQ(back.spec_hash, spec_hash(spec));
  fs::remove_all(d);
}

TEST(Corpus, MissingProfileIsRejectedUpFront) {
  CorpusSpec spec;
  spec.class_counts = {{SeverityLevel::severe, 3}};
  spec.profiles.erase(SeverityLevel::severe);
  EXPECT_THROW(build_corpus(spec), SpecError);
  spec.speaker_pool.clear();
  EXPECT_THROW(spec.validate(), SpecError);
}

TEST(Corpus, TooManyPromptsOfflineIsSpecError) {
  CorpusSpec spec;
  spec.class_counts = {{SeverityLevel::control, 1}};
  spec.prompt_count = 41;
  EXPECT_THROW(build_corpus(spec), SpecError);
}

class ScriptedClient : public TextClient {
 public:
  explicit ScriptedClient(std::string reply) : reply_(std::move(reply)) {}
  std::string complete(const std::string&) override { return reply_; }

 private:
  std::string reply_;
};

TEST(Corpus, RejectingBackendMatchesOfflineBuild) {
  CorpusSpec spec;
  spec.class_counts = {{SeverityLevel::control, 3}, {SeverityLevel::moderate, 5}};
  ScriptedClient junk("[XYZ]");
  auto offline = build_corpus(spec, {}, {2, {}});
  auto online = build_corpus(spec, {&junk, nullptr}, {2, {}});
  ASSERT_EQ(offline.rows.size(), online.rows.size());
  for (std::size_t i = 0; i < offline.rows.size(); ++i) EXPECT_EQ(to_json(offline.rows[i]), to_json(online.rows[i]));
}

TEST(PromptTexts, OfflineBundle) {
  auto all = generate_prompt_texts(40, nullptr, 1);
  EXPECT_EQ(all, bundled_prompts());
  EXPECT_EQ(generate_prompt_texts(1, nullptr, 1), std::vector<std::string>{bundled_prompts()[0]});
  EXPECT_THROW(generate_prompt_texts(41, nullptr, 1), InvalidArgument);
  EXPECT_THROW(generate_prompt_texts(0, nullptr, 1), InvalidArgument);
}

TEST(PromptTexts, BackendSentencesAreUsedWhenValid) {
  ScriptedClient good("We walked down to the river after lunch.\nMy sister baked a cake for the party.\n");
  EXPECT_EQ(generate_prompt_texts(2, &good, 1),
            (std::vector<std::string>{"We walked down to the river after lunch.", "My sister baked a cake for the party."}));
  ScriptedClient dupes("The dog ran home.\nThe dog ran home.\n");
  EXPECT_EQ(generate_prompt_texts(2, &dupes, 1), generate_prompt_texts(2, nullptr, 1));
}

TEST(PromptTexts, BundleIsDistinctAndFullyCovered) {
  const auto& prompts = bundled_prompts();
  ASSERT_EQ(prompts.size(), 40u);
  EXPECT_EQ(std::set<std::string>(prompts.begin(), prompts.end()).size(), 40u);
  for (const auto& p : prompts) {
    for (const auto& w : to_word_aligned_ipa(p).words) EXPECT_FALSE(w.approximate) << w.surface << " in: " << p;
  }
}

TEST(Spec, TomlFile) {
  auto d = fresh_dir("hass_spec_toml");
  fs::create_directories(d);
  {
    std::ofstream p(d / "profiles.json");
    p << to_json(default_profiles()).dump();
    std::ofstream s(d / "spec.toml");
    s << "seed = 77\nprompt-count = 12\nspeaker-count = 5\nretries = 1\nprofiles = \"profiles.json\"\n"
         "[class-counts]\ncontrol = 3\nmild = 2\n";
  }
  auto spec = load_corpus_spec(d / "spec.toml");
  EXPECT_EQ(spec.seed, 77u);
  EXPECT_EQ(spec.prompt_count, 12u);
  EXPECT_EQ(spec.speaker_pool, default_speaker_pool(5));
  EXPECT_EQ(spec.llm_retries, 1);
  EXPECT_EQ(spec.class_counts, (ClassCounts{{SeverityLevel::control, 3}, {SeverityLevel::mild, 2}}));
  EXPECT_EQ(spec.profiles, default_profiles());
  fs::remove_all(d);
}

TEST(Spec, JsonRoundTripAndHash) {
  auto spec = scaled_spec();
  auto back = corpus_spec_from_json(nlohmann::json::parse(to_json(spec).dump()));
  EXPECT_EQ(spec_hash(back), spec_hash(spec));
  EXPECT_EQ(spec_hash(spec).size(), 64u);
  back.seed += 1;
  EXPECT_NE(spec_hash(back), spec_hash(spec));
}

TEST(Spec, BadInputsAreSpecErrors) {
  EXPECT_THROW(corpus_spec_from_toml("seed = "), SpecError);
  EXPECT_THROW(corpus_spec_from_toml("colour = 1"), SpecError);
  EXPECT_THROW(corpus_spec_from_toml("[class-counts]\nmild = -1"), SpecError);
  EXPECT_THROW(corpus_spec_from_toml("[class-counts]\nextreme = 3"), SpecError);
  EXPECT_THROW(corpus_spec_from_toml("speaker-count = 0"), SpecError);
  EXPECT_THROW(corpus_spec_from_toml("profiles = \"/nonexistent/profiles.json\""), SpecError);
  EXPECT_THROW(load_corpus_spec("/nonexistent/spec.toml"), SpecError);
}

TEST(Spec, EnvironmentOverridesFile) {
  auto spec = corpus_spec_from_toml("seed = 5\n[class-counts]\nmild = 2\n");
  std::map<std::string, std::string, std::less<>> env{{"HASS_SEED", "9"}, {"HASS_COUNT_SEVERE", "4"}};
  auto lookup = [&](std::string_view k) -> std::optional<std::string> {
    auto it = env.find(k);
    if (it == env.end()) return std::nullopt;
    return it->second;
  };
  apply_env_overrides(spec, lookup);
  EXPECT_EQ(spec.seed, 9u);
  EXPECT_EQ(spec.class_counts.at(SeverityLevel::mild), 2u);
  EXPECT_EQ(spec.class_counts.at(SeverityLevel::severe), 4u);
  env["HASS_PROMPT_COUNT"] = "many";
  EXPECT_THROW(apply_env_overrides(spec, lookup), SpecError);
}

TEST(Stats, AllControlIsZero) {
  CorpusSpec spec;
  spec.class_counts = {{SeverityLevel::control, 30}};
  auto stats = compute_stats(build_corpus(spec).rows);
  ASSERT_EQ(stats.by_severity.size(), 1u);
  const auto& c = stats.by_severity.at(SeverityLevel::control);
  EXPECT_EQ(c.files, 30u);
  EXPECT_EQ(c.mean_total, 0.0);
  for (double m : c.means) EXPECT_EQ(m, 0.0);
  EXPECT_TRUE(stats.passed());
  EXPECT_THROW(compute_stats({}), InvalidArgument);
}

TEST(Stats, HandComputedMeans) {
  ManifestRow a, b;
  a.severity = b.severity = SeverityLevel::mild;
  a.marked_ipa = "ðə kˈæ[DEL] [PAU] sˈæt";
  b.marked_ipa = "ðə k[SUB]ˈæt";
  a.counts[MarkerKind::DEL] = 1;
  a.counts[MarkerKind::PAU] = 1;
  b.counts[MarkerKind::SUB] = 1;
  b.counts[MarkerKind::PRO] = 1;
  a.content_markers = 2;
  b.content_markers = 0;
  auto st = compute_stats({a, b}).by_severity.at(SeverityLevel::mild);
  EXPECT_DOUBLE_EQ(st.means[index_of(MarkerKind::DEL)], 0.5);
  EXPECT_DOUBLE_EQ(st.means[index_of(MarkerKind::PRO)], 0.5);
  EXPECT_DOUBLE_EQ(st.mean_total, 2.0);
  EXPECT_DOUBLE_EQ(st.primary_share, 0.75);
  EXPECT_DOUBLE_EQ(st.content_share, 0.5);
  EXPECT_EQ(st.total_histogram, (std::map<std::uint32_t, std::size_t>{{2, 2}}));
  EXPECT_FALSE(st.content_ok);
  EXPECT_FALSE(st.total_ok);
  EXPECT_DOUBLE_EQ(st.target_primary_share, 0.75);
}

TEST(Stats, GatingAndCapViolationsAreCounted) {
  ManifestRow r;
  r.severity = SeverityLevel::mild;
  r.marked_ipa = "ðə k[REP]ˈæ[DEL]t[PRO] sˈæt";
  auto st = compute_stats({r}).by_severity.at(SeverityLevel::mild);
  EXPECT_EQ(st.gating_violations, 1u);
  EXPECT_EQ(st.cap_violations, 1u);
  EXPECT_FALSE(st.passed());
}

TEST(Stats, ScaledCorpusMeetsShares) {
  auto stats = compute_stats(scaled_manifest().rows);
  for (auto s : kDysfluentSeverities) {
    const auto& st = stats.by_severity.at(s);
    SCOPED_TRACE(std::string(to_string(s)));
    EXPECT_EQ(st.cap_violations, 0u);
    EXPECT_EQ(st.gating_violations, 0u);
    EXPECT_GE(st.content_share, 0.75);
  }
}

TEST(Manifest, ReadBackMatches) {
  auto d = fresh_dir("hass_manifest_read");
  CorpusSpec spec;
  spec.class_counts = {{SeverityLevel::control, 2}, {SeverityLevel::severe, 3}};
  auto m = build_corpus(spec);
  write_corpus(m, d);
  auto back = read_manifest(d / "manifest.jsonl");
  ASSERT_EQ(back.rows.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(to_json(back.rows[i]), to_json(m.rows[i]));
  auto plan = realization_plan_from_json(nlohmann::json::parse(slurp(d / back.rows[4].plan_path)));
  EXPECT_EQ(plan, m.plans[4]);
  std::ofstream bad(d / "bad.jsonl");
  bad << R"({"schema":"hass.corpus-manifest","schema-version":99,"toolkit-version":"x","spec-hash":"y"})" << '\n';
  bad.close();
  EXPECT_THROW(read_manifest(d / "bad.jsonl"), InvalidArgument);
  fs::remove_all(d);
}

}  // namespace
}  // namespace hass
