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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hass {

enum class Stress : std::uint8_t { none, primary, secondary };

/// One IPA segment (a base symbol with its length mark or diacritics, or an
/// affricate/diphthong treated as a unit) plus the stress mark written
/// before it.
struct Phoneme {
  std::string symbol;
  Stress stress = Stress::none;

  friend bool operator==(const Phoneme&, const Phoneme&) = default;
};

inline constexpr std::string_view kPrimaryStress = "\xCB\x88";    // ˈ
inline constexpr std::string_view kSecondaryStress = "\xCB\x8C";  // ˌ

std::string to_ipa(const Phoneme& p);
std::string to_ipa(std::span<const Phoneme> phonemes);

/// Splits a Unicode IPA word (stress marks allowed, no markers) into
/// phonemes. Throws InvalidArgument on characters that are not IPA.
std::vector<Phoneme> split_phonemes(std::string_view ipa);

/// Vowel nuclei: vowels, diphthongs, and consonants carrying the syllabic
/// diacritic.
bool is_syllabic(std::string_view symbol);

int count_syllables(std::span<const Phoneme> phonemes);

namespace phonology {

enum class SegmentClass : std::uint8_t { vowel, consonant };

enum class Place : std::uint8_t {
  bilabial, labiodental, dental, alveolar, postalveolar, palatal, velar,
  labiovelar, glottal
};
enum class Manner : std::uint8_t { stop, affricate, fricative, nasal, lateral, approximant };

enum class Height : std::uint8_t { close, near_close, close_mid, mid, open_mid, near_open, open };
enum class Backness : std::uint8_t { front, central, back };
// Diphthongs are distinguished from monophthongs by their offglide.
enum class Length : std::uint8_t { short_, long_, front_glide, back_glide };

struct Features {
  std::string_view symbol;
  SegmentClass segment_class;
  // consonants
  Place place{};
  Manner manner{};
  bool voiced = false;
  // vowels
  Height height{};
  Backness backness{};
  bool rounded = false;
  Length length{};
};

/// The bundled General American inventory with its feature matrix.
std::span<const Features> inventory();

const Features* find_features(std::string_view symbol);

/// Number of differing features (Hamming distance over the class's feature
/// tuple). Empty when the symbols are of different classes or unknown.
std::optional<int> feature_distance(std::string_view a, std::string_view b);

/// All distinct inventory phonemes at the minimum feature distance from
/// `symbol`, in inventory order. Empty if the symbol is not in the inventory.
std::vector<std::string_view> nearest_neighbors(std::string_view symbol);

bool is_vowel(std::string_view symbol);
bool is_consonant(std::string_view symbol);

/// Segments that can be lengthened: vowels and continuant consonants.
bool is_prolongable(std::string_view symbol);

}  // namespace phonology
}  // namespace hass
