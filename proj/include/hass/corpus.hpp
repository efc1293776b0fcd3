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
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hass/lexical.hpp"
#include "hass/lexicon.hpp"
#include "hass/llm.hpp"
#include "hass/marker.hpp"
#include "hass/profile.hpp"
#include "hass/realize.hpp"

namespace hass {

std::string_view toolkit_version();

using ClassCounts = std::map<SeverityLevel, std::size_t>;

// 2007 / 871 / 1101 / 794.
ClassCounts reference_class_counts();
// spk-001 .. spk-NNN
std::vector<std::string> default_speaker_pool(std::size_t n = 95);

struct CorpusSpec {
  std::size_t prompt_count = 40;
  std::vector<std::string> speaker_pool = default_speaker_pool();
  ClassCounts class_counts = reference_class_counts();
  std::uint64_t seed = 1;
  ProfileSet profiles = default_profiles();
  int llm_retries = 2;

  // Throws SpecError.
  void validate() const;
};

nlohmann::ordered_json to_json(const CorpusSpec& spec);
// Same keys as the spec file. Relative profile paths resolve against base_dir.
CorpusSpec corpus_spec_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
CorpusSpec corpus_spec_from_toml(std::string_view text, const std::filesystem::path& base_dir = {});
// .json is read as JSON, anything else as TOML.
CorpusSpec load_corpus_spec(const std::filesystem::path& path);

using EnvLookup = std::function<std::optional<std::string>(std::string_view)>;
std::optional<std::string> process_env(std::string_view name);

// HASS_SEED, HASS_PROMPT_COUNT, HASS_SPEAKER_COUNT, HASS_RETRIES,
// HASS_PROFILES, HASS_COUNT_<CLASS>. Values that do not parse throw SpecError.
void apply_env_overrides(CorpusSpec& spec, const EnvLookup& env = process_env);

// sha256 hex of the canonical JSON form.
std::string spec_hash(const CorpusSpec& spec);

struct ManifestRow {
  std::string clip_id;
  std::size_t prompt_id = 0;
  std::string speaker_id;
  SeverityLevel severity = SeverityLevel::control;
  std::uint64_t seed = 0;
  std::string ground_truth;
  std::string dysfluent_text;
  std::string marked_ipa;
  MarkerCounts counts;
  std::uint32_t content_markers = 0;
  LexicalResult lexical;
  std::string plan_path;
  // "rule-based", "llm", or "mixed" when only one layer validated.
  std::string backend = "rule-based";
  double predicted_duration_ms = 0;
};

nlohmann::ordered_json to_json(const ManifestRow& row);
ManifestRow manifest_row_from_json(const nlohmann::json& j);

inline constexpr std::string_view kManifestSchemaName = "hass.corpus-manifest";
inline constexpr int kManifestSchemaVersion = 1;

struct CorpusManifest {
  std::string spec_hash;
  std::string toolkit_version;
  // Sorted by clip-id.
  std::vector<ManifestRow> rows;
  // Parallel to rows; empty when read back from disk.
  std::vector<RealizationPlan> plans;
};

struct CorpusBackends {
  TextClient* llm = nullptr;
  G2pBackend* g2p = nullptr;
};

struct BuildOptions {
  // 0 = hardware concurrency.
  unsigned threads = 0;
  PlanOptions plan;
};

// Rejects (SpecError) before generating anything if a requested severity
// has no profile or the spec is invalid.
CorpusManifest build_corpus(const CorpusSpec& spec, const CorpusBackends& backends = {}, const BuildOptions& options = {});

// First n bundled sentences offline. With a client, asks for n sentences
// and falls back to the bundle when the reply does not validate.
std::vector<std::string> generate_prompt_texts(std::size_t n, TextClient* client, std::uint64_t seed, int retries = 2);

struct StatsTolerance {
  double total = 0.15;           // relative, on mean total per file
  double primary_points = 0.08;  // absolute, on primary-tier share
  double content_min = 0.75;
  double per_marker = 0.20;      // relative to max(target, 1)
};

struct SeverityStats {
  std::size_t files = 0;
  MarkerRates means{};
  double mean_total = 0;
  double primary_share = 0;
  double content_share = 0;
  // total markers per file -> file count
  std::map<std::uint32_t, std::size_t> total_histogram;
  std::array<std::map<std::uint32_t, std::size_t>, 6> marker_histograms;
  std::uint32_t cap_violations = 0;
  // REP outside the row's repair spans.
  std::uint32_t gating_violations = 0;

  double target_total = 0;
  double target_primary_share = 0;
  bool total_ok = true;
  bool primary_ok = true;
  bool content_ok = true;
  std::array<bool, 6> marker_ok{true, true, true, true, true, true};

  // Per-marker flags are informational; desk-scale batches are too small
  // for them to gate.
  bool passed() const { return total_ok && primary_ok && content_ok && cap_violations == 0 && gating_violations == 0; }
};

struct CorpusStats {
  std::map<SeverityLevel, SeverityStats> by_severity;
  bool passed() const;
};

// Throws InvalidArgument on an empty manifest.
CorpusStats compute_stats(const std::vector<ManifestRow>& rows, const ProfileSet& profiles = default_profiles(),
                          const StatsTolerance& tolerance = {});
nlohmann::ordered_json to_json(const CorpusStats& stats);

// manifest.jsonl (header line, then rows), summary.json, plans/<clip-id>.json
void write_corpus(const CorpusManifest& manifest, const std::filesystem::path& out_dir);
CorpusManifest read_manifest(const std::filesystem::path& manifest_path);

}  // namespace hass
