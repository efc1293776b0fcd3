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
#include <istream>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hass/marker.hpp"
#include "hass/phoneme.hpp"
#include "hass/word.hpp"

namespace hass {

/// Pronouncing lexicon: lowercase surface -> phonemes. Immutable once built.
class Lexicon {
 public:
  /// `surface<TAB>IPA` lines; `#` comments and blank lines skipped.
  static Lexicon from_tsv(std::istream& in);
  static Lexicon from_tsv(std::string_view text);
  static const Lexicon& bundled();

  const std::vector<Phoneme>* lookup(std::string_view word) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, std::vector<Phoneme>> entries_;
};

/// Word frequency ranks; classes are terciles of the rank.
class FrequencyList {
 public:
  static FrequencyList from_tsv(std::string_view text);
  static const FrequencyList& bundled();

  std::optional<std::size_t> rank(std::string_view word) const;
  /// Words absent from the list are low frequency.
  FrequencyClass classify(std::string_view word) const;
  std::size_t size() const { return ranks_.size(); }

 private:
  std::unordered_map<std::string, std::size_t> ranks_;
};

/// Closed-class word list plus suffix rules; everything else is a noun.
class Tagger {
 public:
  static Tagger from_tsv(std::string_view text);
  static const Tagger& bundled();

  PosTag tag(std::string_view word) const;
  bool is_function_word(std::string_view word) const;

 private:
  std::unordered_map<std::string, PosTag> closed_;
};

struct WordClass {
  bool content_word = false;
  FrequencyClass frequency = FrequencyClass::low;

  friend bool operator==(const WordClass&, const WordClass&) = default;
};

WordClass classify_word(std::string_view word, PosTag tag);
WordClass classify_word(std::string_view word, PosTag tag, const FrequencyList& freq);

/// Grapheme-to-phoneme backend. One reply per requested word; an empty
/// reply means the backend does not know the word.
class G2pBackend {
 public:
  virtual ~G2pBackend() = default;
  virtual std::vector<std::optional<std::string>> convert(std::span<const std::string> words) = 0;
};

class LexiconBackend : public G2pBackend {
 public:
  explicit LexiconBackend(const Lexicon& lex = Lexicon::bundled()) : lex_(&lex) {}
  std::vector<std::optional<std::string>> convert(std::span<const std::string> words) override;

 private:
  const Lexicon* lex_;
};

/// Runs an external command speaking a line protocol: words on stdin, one
/// per line; one IPA string per line on stdout (blank = unknown).
class SubprocessG2pBackend : public G2pBackend {
 public:
  explicit SubprocessG2pBackend(std::string command) : command_(std::move(command)) {}
  std::vector<std::optional<std::string>> convert(std::span<const std::string> words) override;

 private:
  std::string command_;
};

/// Rule-based spelling-to-sound approximation for out-of-lexicon words.
std::vector<Phoneme> letter_to_sound(std::string_view word);

struct AlignedUtterance {
  std::vector<WordUnit> words;
  std::string source_text;
  // Punctuation written after each word ("" if none); parallel to words.
  std::vector<std::string> punctuation;
  // Indices of words that open a clause: word 0, words after punctuation,
  // and conjunctions.
  std::vector<std::size_t> clause_starts;

  bool is_clause_start(std::size_t i) const;
};

/// Word-aligned IPA for a sentence. Pronunciations come from `g2p` when
/// given, else the bundled lexicon, else letter-to-sound (flagged
/// approximate). Throws InvalidArgument on text with no words.
AlignedUtterance to_word_aligned_ipa(std::string_view text, G2pBackend* g2p = nullptr);

/// Words with their punctuation, single-spaced.
std::string surface_text(const AlignedUtterance& u);

/// Unmarked, target-aligned utterance. Sentence-final . ? ! are dropped;
/// other punctuation outside the marker grammar's set becomes a comma.
MarkedIpaUtterance to_marked_ipa(const AlignedUtterance& u);

std::string to_lower(std::string_view s);

}  // namespace hass
