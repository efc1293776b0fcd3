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
#include <span>
#include <utility>

#include "utf8.hpp"

namespace hass::detail {

// Two-codepoint units segmented as one phoneme: affricates and diphthongs.
inline constexpr std::array<std::pair<char32_t, char32_t>, 7> kDigraphs{{
    {U't', U'ʃ'},
    {U'd', U'ʒ'},
    {U'a', U'ɪ'},
    {U'a', U'ʊ'},
    {U'e', U'ɪ'},
    {U'o', U'ʊ'},
    {U'ɔ', U'ɪ'},
}};

// Number of codepoints, starting at `i`, that form one segment. `cps[i]`
// must be an IPA base letter.
inline std::size_t match_segment(std::span<const char32_t> cps, std::size_t i) {
  std::size_t n = 1;
  if (i + 1 < cps.size()) {
    for (auto [first, second] : kDigraphs) {
      if (cps[i] == first && cps[i + 1] == second) {
        n = 2;
        break;
      }
    }
  }
  while (i + n < cps.size() && utf8::is_ipa_modifier(cps[i + n])) ++n;
  return n;
}

}  // namespace hass::detail
