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
#include <string>
#include <string_view>
#include <vector>

#include "hass/phoneme.hpp"

namespace hass {

enum class FrequencyClass : std::uint8_t { high, mid, low };

// Closed tag set understood by the tagger and classify_word.
enum class PosTag : std::uint8_t {
  noun, verb, auxiliary, adjective, adverb, determiner, pronoun, preposition,
  conjunction, particle, interjection, numeral
};

std::string_view to_string(FrequencyClass f);
std::string_view to_string(PosTag t);
/// Throws InvalidArgument for names outside the closed tag set.
PosTag parse_pos_tag(std::string_view name);
FrequencyClass parse_frequency_class(std::string_view name);

constexpr bool is_content_tag(PosTag t) {
  return t == PosTag::noun || t == PosTag::verb || t == PosTag::adjective || t == PosTag::adverb;
}

/// One word of an utterance with the linguistic metadata the injectors use.
struct WordUnit {
  std::string surface;
  std::vector<Phoneme> phonemes;
  int syllable_count = 1;
  bool content_word = false;
  FrequencyClass frequency = FrequencyClass::low;
  std::size_t index = 0;
  PosTag pos = PosTag::noun;
  // Pronunciation came from letter-to-sound rules, not the lexicon/backend.
  bool approximate = false;

  friend bool operator==(const WordUnit&, const WordUnit&) = default;
};

}  // namespace hass
