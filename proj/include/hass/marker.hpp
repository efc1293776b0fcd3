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

// Inline dysfluency marker grammar over word-aligned IPA.
//
// Surface syntax (canonical form):
//
//   utterance := item (' ' item)*
//   item      := '[PAU]' | word
//   word      := segment (segment | marker)* punct*
//   segment   := stress? phoneme
//   marker    := '[PAU]' | '[SUB]' | '[DEL]' | '[REP]' | '[PRO]' | '[INS]'
//   punct     := ',' | ';' | '…' | '.' | '?' | '!'
//
// A marker follows the segment it modifies ([DEL] follows the segment before
// the deletion point). Only [PAU] may stand between words. On input the
// parser also accepts a TIPA-like ASCII escape form (D = ð, @ = ə, " = ˈ, ...)
// and whitespace between a segment and its marker; both canonicalize away.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hass/phoneme.hpp"
#include "hass/severity.hpp"
#include "hass/word.hpp"

namespace hass {

// Declaration order is the fixed serialization order.
enum class MarkerKind : std::uint8_t { PAU, SUB, DEL, REP, PRO, INS };
enum class Tier : std::uint8_t { primary, secondary, rare };

inline constexpr std::array<MarkerKind, 6> kAllMarkers{
    MarkerKind::PAU, MarkerKind::SUB, MarkerKind::DEL,
    MarkerKind::REP, MarkerKind::PRO, MarkerKind::INS};

constexpr std::size_t index_of(MarkerKind k) { return static_cast<std::size_t>(k); }

constexpr Tier tier_of(MarkerKind k) {
  switch (k) {
    case MarkerKind::PAU:
    case MarkerKind::SUB:
    case MarkerKind::DEL: return Tier::primary;
    case MarkerKind::REP:
    case MarkerKind::PRO: return Tier::secondary;
    case MarkerKind::INS: return Tier::rare;
  }
  return Tier::rare;
}

std::string_view to_string(MarkerKind k);
std::string_view to_string(Tier t);
std::optional<MarkerKind> parse_marker_kind(std::string_view name);

enum class TokenKind : std::uint8_t { phoneme, marker, word_boundary, punctuation };

struct MarkedToken {
  TokenKind kind = TokenKind::phoneme;
  std::optional<Phoneme> phoneme;
  std::optional<MarkerKind> marker;
  std::string punctuation;
  // Index into the utterance's words. Markers carry the word of the segment
  // they follow; a stand-alone [PAU] carries the word it precedes.
  std::size_t word_index = 0;

  static MarkedToken make_phoneme(Phoneme p, std::size_t word);
  static MarkedToken make_marker(MarkerKind k, std::size_t word);
  static MarkedToken make_punctuation(std::string p, std::size_t word);
  static MarkedToken make_boundary(std::size_t word);

  friend bool operator==(const MarkedToken&, const MarkedToken&) = default;
};

/// Per-word record of what an injector changed. Not part of the surface
/// string; carried alongside it so downstream checks can see the targets.
struct AppliedEdit {
  MarkerKind kind = MarkerKind::PAU;
  std::size_t word_index = 0;
  std::size_t target_position = 0;  // phoneme index in the target word
  std::string target;               // target phoneme (empty for PAU/INS)
  std::string surface;              // realized phoneme (SUB/INS), else empty

  friend bool operator==(const AppliedEdit&, const AppliedEdit&) = default;
};

enum class Alignment : std::uint8_t {
  // words[] hold the target (pre-injection) pronunciations.
  target,
  // words[] were derived from the marked string itself.
  self
};

struct MarkedIpaUtterance {
  std::vector<MarkedToken> tokens;
  std::vector<WordUnit> words;
  SeverityLevel severity = SeverityLevel::control;
  Alignment alignment = Alignment::self;
  // Metadata below is not serialized.
  std::vector<AppliedEdit> edits;
  std::vector<std::string> warnings;
};

struct MarkerCounts {
  std::array<std::uint32_t, 6> per_kind{};

  std::uint32_t operator[](MarkerKind k) const { return per_kind[index_of(k)]; }
  std::uint32_t& operator[](MarkerKind k) { return per_kind[index_of(k)]; }
  std::uint32_t total() const;
  std::uint32_t primary() const;

  MarkerCounts& operator+=(const MarkerCounts& o);
  friend MarkerCounts operator+(MarkerCounts a, const MarkerCounts& b) { return a += b; }
  friend bool operator==(const MarkerCounts&, const MarkerCounts&) = default;
};

/// Flat object with fixed key order {PAU, SUB, DEL, REP, PRO, INS, total}.
nlohmann::ordered_json to_json(const MarkerCounts& c);
/// Rejects objects whose total disagrees with the per-kind sum.
MarkerCounts marker_counts_from_json(const nlohmann::json& j);

/// Parses marked IPA against a target word alignment. Throws SyntaxError
/// (with byte offset) or AlignmentError (naming the first misaligned word).
MarkedIpaUtterance parse_marked_ipa(std::string_view text, std::span<const WordUnit> alignment);

/// Parses marked IPA, deriving the word list from the string itself.
MarkedIpaUtterance parse_marked_ipa(std::string_view text);

/// Canonical form: Unicode IPA, one space between items, markers glued to
/// their segment, punctuation glued to its word.
std::string serialize(const MarkedIpaUtterance& u);

/// Equivalent to serialize(parse_marked_ipa(text)).
std::string canonicalize(std::string_view text);

MarkerCounts count_markers(const MarkedIpaUtterance& u);

/// Markers whose attributed word is a content word.
std::uint32_t count_content_markers(const MarkedIpaUtterance& u);

/// Per-word marker counts (by attribution).
std::vector<std::uint32_t> markers_per_word(const MarkedIpaUtterance& u);

/// Joins two utterances; word indices of `b` are shifted past `a`'s words.
MarkedIpaUtterance concatenate(const MarkedIpaUtterance& a, const MarkedIpaUtterance& b);

/// Surface phonemes of word `w` in token order (markers skipped).
std::vector<Phoneme> surface_phonemes(const MarkedIpaUtterance& u, std::size_t w);

/// Checks the structural invariants (boundary count, attribution, no
/// leading non-PAU marker). Throws InvalidArgument describing the first
/// violation.
void check_invariants(const MarkedIpaUtterance& u);

}  // namespace hass
