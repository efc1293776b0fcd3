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
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "hass/lexicon.hpp"
#include "hass/severity.hpp"

namespace hass {

enum class EditKind : std::uint8_t { circumlocution, false_start, filled_pause, word_repetition };

std::string_view to_string(EditKind k);
EditKind parse_edit_kind(std::string_view name);

struct LexicalEdit {
  EditKind kind = EditKind::filled_pause;
  // Ground-truth word the edit targets.
  std::size_t anchor_word_index = 0;
  // Ground-truth word the inserted material precedes.
  std::size_t insert_before = 0;
  std::string inserted_text;
  bool repair = false;
  // Circumlocution whose target word was never retrieved.
  bool target_dropped = false;

  friend bool operator==(const LexicalEdit&, const LexicalEdit&) = default;
};

/// Half-open word range [begin, end) over the dysfluent text's words.
struct RepairSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool contains(std::size_t w) const { return w >= begin && w < end; }
  friend bool operator==(const RepairSpan&, const RepairSpan&) = default;
};

struct LexicalResult {
  std::string dysfluent_text;
  std::vector<LexicalEdit> edits;
  std::string ground_truth;
  std::vector<RepairSpan> repair_spans;
  // Per dysfluent word: the ground-truth word it reproduces, or empty for
  // inserted material.
  std::vector<std::optional<std::size_t>> origins;
  bool rule_based = true;

  bool in_repair_span(std::size_t w) const;
};

nlohmann::ordered_json to_json(const LexicalResult& r);
LexicalResult lexical_result_from_json(const nlohmann::json& j);

/// target<TAB>paraphrase table for circumlocutions.
class CircumlocutionTable {
 public:
  static CircumlocutionTable from_tsv(std::string_view text);
  static const CircumlocutionTable& bundled();

  std::optional<std::string_view> lookup(std::string_view word) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, std::string> entries_;
};

inline constexpr std::string_view kGenericCircumlocution = "the thing";

struct LexicalRates {
  // Poisson mean of edits per sentence, truncated at 2 x clause count.
  double mean_edits = 1.5;
  // circumlocution, false-start, filled-pause, word-repetition
  std::array<double, 4> kind_weights{0.35, 0.15, 0.35, 0.15};
  // Probability that a circumlocuted target is never produced.
  double drop_target = 0.0;
};

LexicalRates default_lexical_rates(SeverityLevel s);

/// Lexical-retrieval weight of a word as an edit anchor: frequency class
/// (low 4, mid 2, high 1) x syllables, x3 when a paraphrase is on file.
double anchor_weight(const WordUnit& w, const CircumlocutionTable& table = CircumlocutionTable::bundled());

/// Rule-based word-level layer. Throws InvalidArgument for control
/// severity or text with no words.
LexicalResult inject_lexical(std::string_view gt, SeverityLevel severity, std::uint64_t seed);
LexicalResult inject_lexical(std::string_view gt, SeverityLevel severity, std::uint64_t seed,
                             const LexicalRates& rates);

struct NaturalisticRates {
  double filled_pause = 0.05;  // per word gap, at most one per clause
  double repetition = 0.01;    // per word
};

/// Typical-speaker disfluencies for control clips.
LexicalResult inject_naturalistic(std::string_view gt, std::uint64_t seed, const NaturalisticRates& rates = {});

/// Repair spans in free text: comma- or ellipsis-separated repeats of one
/// or two words ("the, the house") and cut-off prefixes ("in… inside"),
/// each extended to the first content word of the restart.
std::vector<RepairSpan> infer_repair_spans(const AlignedUtterance& u);

}  // namespace hass
