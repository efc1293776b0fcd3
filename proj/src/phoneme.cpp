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

#include "hass/phoneme.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include "hass/error.hpp"
#include "segment.hpp"
#include "utf8.hpp"

namespace hass {

namespace phonology {
namespace {

using enum Place;
using enum Manner;
using enum Height;
using enum Backness;
using enum Length;

constexpr Features consonant(std::string_view s, Place p, Manner m, bool voiced) {
  Features f{s, SegmentClass::consonant};
  f.place = p;
  f.manner = m;
  f.voiced = voiced;
  return f;
}

constexpr Features vowel(std::string_view s, Height h, Backness b, bool rounded, Length l) {
  Features f{s, SegmentClass::vowel};
  f.height = h;
  f.backness = b;
  f.rounded = rounded;
  f.length = l;
  return f;
}

// General American inventory.
constexpr std::array kInventory{
    consonant("p", bilabial, stop, false),
    consonant("b", bilabial, stop, true),
    consonant("t", alveolar, stop, false),
    consonant("d", alveolar, stop, true),
    consonant("k", velar, stop, false),
    consonant("ɡ", velar, stop, true),
    consonant("tʃ", postalveolar, affricate, false),
    consonant("dʒ", postalveolar, affricate, true),
    consonant("f", labiodental, fricative, false),
    consonant("v", labiodental, fricative, true),
    consonant("θ", dental, fricative, false),
    consonant("ð", dental, fricative, true),
    consonant("s", alveolar, fricative, false),
    consonant("z", alveolar, fricative, true),
    consonant("ʃ", postalveolar, fricative, false),
    consonant("ʒ", postalveolar, fricative, true),
    consonant("h", glottal, fricative, false),
    consonant("m", bilabial, nasal, true),
    consonant("n", alveolar, nasal, true),
    consonant("ŋ", velar, nasal, true),
    consonant("l", alveolar, lateral, true),
    consonant("ɹ", alveolar, approximant, true),
    consonant("w", labiovelar, approximant, true),
    consonant("j", palatal, approximant, true),

    vowel("iː", close, front, false, long_),
    vowel("i", close, front, false, short_),
    vowel("ɪ", near_close, front, false, short_),
    vowel("eɪ", close_mid, front, false, front_glide),
    vowel("ɛ", open_mid, front, false, short_),
    vowel("æ", near_open, front, false, short_),
    vowel("aɪ", open, front, false, front_glide),
    vowel("aʊ", open, front, false, back_glide),
    vowel("ɑː", open, back, false, long_),
    vowel("ɔː", open_mid, back, true, long_),
    vowel("ɔ", open_mid, back, true, short_),
    vowel("ɔɪ", open_mid, back, true, front_glide),
    vowel("oʊ", close_mid, back, true, back_glide),
    vowel("ʊ", near_close, back, true, short_),
    vowel("uː", close, back, true, long_),
    vowel("ʌ", open_mid, back, false, short_),
    vowel("ə", mid, central, false, short_),
    vowel("ɜː", open_mid, central, false, long_),
    vowel("ɜ", open_mid, central, false, short_),
};

int hamming(const Features& a, const Features& b) {
  if (a.segment_class == SegmentClass::consonant) {
    return (a.place != b.place) + (a.manner != b.manner) + (a.voiced != b.voiced);
  }
  return (a.height != b.height) + (a.backness != b.backness) + (a.rounded != b.rounded) +
         (a.length != b.length);
}

}  // namespace

std::span<const Features> inventory() { return kInventory; }

const Features* find_features(std::string_view symbol) {
  for (const auto& f : kInventory) {
    if (f.symbol == symbol) return &f;
  }
  return nullptr;
}

std::optional<int> feature_distance(std::string_view a, std::string_view b) {
  const auto* fa = find_features(a);
  const auto* fb = find_features(b);
  if (!fa || !fb || fa->segment_class != fb->segment_class) return std::nullopt;
  return hamming(*fa, *fb);
}

std::vector<std::string_view> nearest_neighbors(std::string_view symbol) {
  const auto* target = find_features(symbol);
  if (!target) return {};
  int best = std::numeric_limits<int>::max();
  std::vector<std::string_view> out;
  for (const auto& f : kInventory) {
    if (f.symbol == target->symbol || f.segment_class != target->segment_class) continue;
    int d = hamming(*target, f);
    if (d < best) {
      best = d;
      out.clear();
    }
    if (d == best) out.push_back(f.symbol);
  }
  return out;
}

bool is_vowel(std::string_view symbol) {
  if (const auto* f = find_features(symbol)) return f->segment_class == SegmentClass::vowel;
  return is_syllabic(symbol);
}

bool is_consonant(std::string_view symbol) { return !is_vowel(symbol); }

bool is_prolongable(std::string_view symbol) {
  const auto* f = find_features(symbol);
  if (!f) return is_syllabic(symbol);
  if (f->segment_class == SegmentClass::vowel) return true;
  return f->manner != Manner::stop && f->manner != Manner::affricate;
}

}  // namespace phonology

namespace {

bool is_vowel_letter(char32_t cp) {
  switch (cp) {
    case U'a': case U'e': case U'i': case U'o': case U'u': case U'y':
    case U'æ':
    case U'ø':
    case U'œ':
    case U'ɐ': case U'ɑ': case U'ɒ':
    case U'ɔ':
    case U'ɘ': case U'ə': case U'ɚ':
    case U'ɛ': case U'ɜ': case U'ɝ': case U'ɞ':
    case U'ɤ':
    case U'ɨ':
    case U'ɪ':
    case U'ɵ':
    case U'ɶ':
    case U'ʉ':
    case U'ʊ': case U'ʌ': case U'ʏ':
      return true;
    default:
      return false;
  }
}

}  // namespace

bool is_syllabic(std::string_view symbol) {
  auto first = utf8::decode(symbol, 0);
  if (first.length == 0) return false;
  if (is_vowel_letter(first.cp)) return true;
  // Syllabic consonant: combining vertical line below (U+0329).
  return symbol.find("\xCC\xA9") != std::string_view::npos;
}

int count_syllables(std::span<const Phoneme> phonemes) {
  return static_cast<int>(std::count_if(phonemes.begin(), phonemes.end(),
                                        [](const Phoneme& p) { return is_syllabic(p.symbol); }));
}

std::string to_ipa(const Phoneme& p) {
  std::string out;
  if (p.stress == Stress::primary) out += kPrimaryStress;
  if (p.stress == Stress::secondary) out += kSecondaryStress;
  out += p.symbol;
  return out;
}

std::string to_ipa(std::span<const Phoneme> phonemes) {
  std::string out;
  for (const auto& p : phonemes) out += to_ipa(p);
  return out;
}

std::vector<Phoneme> split_phonemes(std::string_view ipa) {
  std::vector<char32_t> cps;
  std::vector<std::size_t> offsets;
  for (std::size_t pos = 0; pos < ipa.size();) {
    auto d = utf8::decode(ipa, pos);
    if (d.length == 0) throw InvalidArgument("malformed UTF-8 in IPA '" + std::string(ipa) + "'");
    char32_t cp = d.cp == U'g' ? U'ɡ' : d.cp;
    cps.push_back(cp);
    offsets.push_back(pos);
    pos += d.length;
  }

  std::vector<Phoneme> out;
  Stress pending = Stress::none;
  for (std::size_t i = 0; i < cps.size();) {
    if (cps[i] == U'ˈ' || cps[i] == U'ˌ') {
      pending = cps[i] == U'ˈ' ? Stress::primary : Stress::secondary;
      ++i;
      continue;
    }
    if (!utf8::is_ipa_base(cps[i])) {
      throw InvalidArgument("unexpected character at byte " + std::to_string(offsets[i]) +
                            " in IPA '" + std::string(ipa) + "'");
    }
    std::size_t n = detail::match_segment(cps, i);
    Phoneme p;
    for (std::size_t k = 0; k < n; ++k) utf8::append(p.symbol, cps[i + k]);
    p.stress = pending;
    pending = Stress::none;
    out.push_back(std::move(p));
    i += n;
  }
  if (pending != Stress::none) {
    throw InvalidArgument("dangling stress mark in IPA '" + std::string(ipa) + "'");
  }
  return out;
}

}  // namespace hass
