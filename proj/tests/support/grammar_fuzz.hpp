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
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Grammar-driven generator for marked IPA. Written against the surface
// syntax only (no library internals), so it can act as an oracle for the
// parser.
namespace hass::testing {

struct FuzzCase {
  std::string canonical;  // the form serialize() must produce
  std::string noisy;      // same utterance: ASCII escapes, extra spaces
  std::array<int, 6> counts{};  // PAU SUB DEL REP PRO INS
  int words = 0;
};

class GrammarFuzzer {
 public:
  explicit GrammarFuzzer(std::uint64_t seed) : rng_(seed) {}

  FuzzCase next() {
    FuzzCase c;
    std::vector<std::pair<std::string, std::string>> items;  // canonical, noisy
    int n_words = uniform(1, 12);
    for (int w = 0; w < n_words; ++w) {
      if (chance(0.15)) {
        items.push_back({"[PAU]", "[PAU]"});
        ++c.counts[0];
      }
      items.push_back(word(c));
      ++c.words;
    }
    if (chance(0.1)) {
      items.push_back({"[PAU]", "[PAU]"});
      ++c.counts[0];
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) {
        c.canonical += ' ';
        c.noisy += chance(0.2) ? "  " : " ";
      }
      c.canonical += items[i].first;
      c.noisy += items[i].second;
    }
    if (chance(0.2)) c.noisy = " " + c.noisy + "\t";
    return c;
  }

 private:
  static constexpr std::array<std::string_view, 6> kTags{"[PAU]", "[SUB]", "[DEL]", "[REP]", "[PRO]", "[INS]"};

  // Segments with their ASCII escape spelling ("" when it has none).
  struct Seg {
    std::string_view ipa;
    std::string_view ascii;
    bool vowel;
  };
  static constexpr std::array<Seg, 37> kSegs{{
      {"p", "p", false},   {"b", "b", false},   {"t", "t", false},    {"d", "d", false},
      {"k", "k", false},   {"ɡ", "g", false},   {"tʃ", "tS", false},  {"dʒ", "dZ", false},
      {"f", "f", false},   {"v", "v", false},   {"θ", "T", false},    {"ð", "D", false},
      {"s", "s", false},   {"z", "z", false},   {"ʃ", "S", false},    {"ʒ", "Z", false},
      {"h", "h", false},   {"m", "m", false},   {"n", "n", false},    {"ŋ", "N", false},
      {"l", "l", false},   {"ɹ", "", false},    {"w", "w", false},    {"j", "j", false},
      {"iː", "i:", true},  {"ɪ", "I", true},    {"eɪ", "eI", true},   {"ɛ", "E", true},
      {"æ", "\\ae ", true}, {"aɪ", "aI", true}, {"aʊ", "aU", true},   {"ɑː", "A:", true},
      {"ɔ", "O", true},    {"oʊ", "oU", true},  {"ʊ", "U", true},     {"ʌ", "V", true},
      {"ə", "@", true},
  }};

  // Adjacent unstressed segments that would re-segment as one unit.
  static bool merges(std::string_view prev, std::string_view next) {
    auto last = prev.back();
    if (last == 't' && next.starts_with("ʃ")) return true;
    if (last == 'd' && next.starts_with("ʒ")) return true;
    if (prev.ends_with("ɔ") && next.starts_with("ɪ")) return true;
    return false;
  }

  std::pair<std::string, std::string> word(FuzzCase& c) {
    std::string canon, noisy;
    std::string prev;
    bool stressed = false;
    bool attached_marker_last = false;
    int n_segs = uniform(1, 6);
    for (int s = 0; s < n_segs; ++s) {
      const Seg* seg = nullptr;
      bool stress = false;
      for (int tries = 0; tries < 50; ++tries) {
        seg = &kSegs[static_cast<std::size_t>(uniform(0, kSegs.size() - 1))];
        stress = seg->vowel && !stressed && chance(0.4);
        if (prev.empty() || stress || attached_marker_last || !merges(prev, seg->ipa)) break;
        seg = nullptr;
      }
      if (!seg) continue;
      bool secondary = stress && chance(0.3);
      if (stress) {
        stressed = true;
        canon += secondary ? "ˌ" : "ˈ";
        noisy += secondary ? (chance(0.5) ? "\"\"" : "\\`") : "\"";
      }
      canon += seg->ipa;
      noisy += (seg->ascii.empty() || chance(0.3)) ? std::string(seg->ipa) : std::string(seg->ascii);
      prev = std::string(seg->ipa);
      attached_marker_last = false;
      if (chance(0.25)) {
        int k = uniform(0, 5);
        canon += kTags[static_cast<std::size_t>(k)];
        // Space before a non-PAU marker is accepted and canonicalizes away.
        if (k != 0 && chance(0.2)) noisy += ' ';
        noisy += kTags[static_cast<std::size_t>(k)];
        ++c.counts[static_cast<std::size_t>(k)];
        attached_marker_last = true;
      }
    }
    if (canon.empty()) {
      canon = "ə";
      noisy = "@";
    }
    if (chance(0.25)) {
      static constexpr std::array<std::string_view, 6> kPunct{",", ";", "…", ".", "?", "!"};
      auto p = kPunct[static_cast<std::size_t>(uniform(0, 5))];
      canon += p;
      noisy += (p == "…" && chance(0.5)) ? std::string_view("...") : p;
    }
    return {canon, noisy};
  }

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  int uniform(int lo, std::size_t hi) { return uniform(lo, static_cast<int>(hi)); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  std::mt19937_64 rng_;
};

}  // namespace hass::testing
