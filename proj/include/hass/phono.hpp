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
#include <vector>

#include "hass/lexical.hpp"
#include "hass/lexicon.hpp"
#include "hass/marker.hpp"
#include "hass/profile.hpp"

namespace hass {

struct InjectionSite {
  std::size_t word_index = 0;
  // Empty for the pause gap in front of the word.
  std::optional<std::size_t> phoneme_index;
  std::array<bool, 6> eligible{};
  // Structural weight: syllables^e x length^(e/2), x1.5 for a gap at a
  // clause boundary.
  double weight = 1.0;
  // Consonant closing an unstressed syllable; doubles the DEL weight.
  bool weak_coda = false;

  bool allows(MarkerKind k) const { return eligible[index_of(k)]; }
};

// Every candidate site of `u`, words in order, gap first within a word.
// `lex` supplies the repair spans that gate REP; its dysfluent text must be
// the text `u` was built from.
std::vector<InjectionSite> enumerate_sites(const AlignedUtterance& u, const LexicalResult& lex,
                                           double complexity_exponent);

/// Phoneme-level layer. Output words keep the target pronunciations
/// (Alignment::target) and `edits` records what was applied.
MarkedIpaUtterance inject_phonological(const AlignedUtterance& u, const LexicalResult& lex,
                                       const SeverityProfile& profile, std::uint64_t seed);

/// A different phoneme at minimal feature distance, uniform among ties.
std::string substitute_phoneme(std::string_view target, std::uint64_t seed);

}  // namespace hass
