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

#include "hass/phono.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "hass/error.hpp"
#include "hass/seed.hpp"
#include "segment.hpp"
#include "utf8.hpp"

namespace hass {

namespace {

namespace ph = phonology;

std::vector<char32_t> codepoints(std::string_view s) {
  std::vector<char32_t> out;
  for (std::size_t pos = 0; pos < s.size();) {
    auto d = utf8::decode(s, pos);
    if (d.length == 0) break;
    out.push_back(d.cp);
    pos += d.length;
  }
  return out;
}

// Would `next` written straight after `prev` be read back as one segment?
bool fuses(std::string_view prev, std::string_view next) {
  auto a = codepoints(prev);
  auto cps = a;
  auto b = codepoints(next);
  cps.insert(cps.end(), b.begin(), b.end());
  std::size_t i = 0;
  while (i < a.size()) i += detail::match_segment(cps, i);
  return i > a.size();
}

std::vector<std::string_view> substitutes(const WordUnit& w, std::size_t j) {
  auto cands = ph::nearest_neighbors(w.phonemes[j].symbol);
  if (j > 0) {
    const auto& prev = w.phonemes[j - 1].symbol;
    std::erase_if(cands, [&](std::string_view c) { return fuses(prev, c); });
  }
  return cands;
}

bool weak_coda(const WordUnit& w, std::size_t j) {
  const auto& ps = w.phonemes;
  if (ph::is_vowel(ps[j].symbol)) return false;
  if (j + 1 < ps.size() && ph::is_vowel(ps[j + 1].symbol)) return false;
  for (std::size_t k = j; k-- > 0;) {
    if (ph::is_vowel(ps[k].symbol)) return ps[k].stress == Stress::none;
  }
  return false;
}

constexpr std::array<MarkerKind, 5> kSegmental{MarkerKind::SUB, MarkerKind::DEL, MarkerKind::REP, MarkerKind::PRO,
                                               MarkerKind::INS};

std::vector<std::vector<std::string>> punctuation_by_word(const AlignedUtterance& u) {
  std::vector<std::vector<std::string>> out(u.words.size());
  for (const auto& t : to_marked_ipa(u).tokens) {
    if (t.kind == TokenKind::punctuation) out[t.word_index].push_back(t.punctuation);
  }
  return out;
}

}  // namespace

std::vector<InjectionSite> enumerate_sites(const AlignedUtterance& u, const LexicalResult& lex,
                                           double complexity_exponent) {
  if (!lex.origins.empty() && lex.origins.size() != u.words.size()) {
    throw InvalidArgument("lexical result has " + std::to_string(lex.origins.size()) + " words, utterance has " +
                          std::to_string(u.words.size()));
  }
  for (const auto& sp : lex.repair_spans) {
    if (sp.begin >= sp.end || sp.end > u.words.size()) throw InvalidArgument("repair span outside the utterance");
  }
  std::vector<InjectionSite> sites;
  for (std::size_t w = 0; w < u.words.size(); ++w) {
    const auto& word = u.words[w];
    double base = std::pow(static_cast<double>(std::max(1, word.syllable_count)), complexity_exponent) *
                  std::pow(static_cast<double>(std::max<std::size_t>(1, word.phonemes.size())), complexity_exponent / 2);
    InjectionSite gap;
    gap.word_index = w;
    gap.eligible[index_of(MarkerKind::PAU)] = true;
    gap.weight = base * (u.is_clause_start(w) ? 1.5 : 1.0);
    sites.push_back(gap);
    bool repair = lex.in_repair_span(w);
    const auto& ps = word.phonemes;
    for (std::size_t j = 0; j < ps.size(); ++j) {
      InjectionSite s;
      s.word_index = w;
      s.phoneme_index = j;
      s.weight = base;
      s.weak_coda = weak_coda(word, j);
      bool vowel = ph::is_vowel(ps[j].symbol);
      s.eligible[index_of(MarkerKind::SUB)] = !substitutes(word, j).empty();
      s.eligible[index_of(MarkerKind::DEL)] = j >= 1;
      s.eligible[index_of(MarkerKind::PRO)] = ph::is_prolongable(ps[j].symbol);
      s.eligible[index_of(MarkerKind::INS)] = true;
      // Onset repetition: the consonant before a nucleus, or a bare initial vowel.
      bool onset = (!vowel && j + 1 < ps.size() && ph::is_vowel(ps[j + 1].symbol)) || (vowel && j == 0);
      s.eligible[index_of(MarkerKind::REP)] = repair && onset;
      sites.push_back(s);
    }
  }
  return sites;
}

MarkedIpaUtterance inject_phonological(const AlignedUtterance& u, const LexicalResult& lex,
                                       const SeverityProfile& profile, std::uint64_t seed) {
  profile.validate();
  auto sites = enumerate_sites(u, lex, profile.complexity_exponent);

  // p[m][s]: chance that site s carries marker m.
  std::array<std::vector<double>, 6> p;
  bool any = false;
  for (auto m : kAllMarkers) {
    auto& pm = p[index_of(m)];
    pm.assign(sites.size(), 0.0);
    std::vector<double> w(sites.size(), 0.0);
    double wc = 0, wf = 0;
    std::size_t count = 0;
    for (std::size_t s = 0; s < sites.size(); ++s) {
      if (!sites[s].allows(m)) continue;
      any = true;
      ++count;
      w[s] = sites[s].weight * (m == MarkerKind::DEL && sites[s].weak_coda ? 2.0 : 1.0);
      (u.words[sites[s].word_index].content_word ? wc : wf) += w[s];
    }
    if (count == 0 || profile.rate(m) == 0) continue;
    double content_mult = 1, function_mult = 1;
    if (wc > 0 && wf > 0) {
      double bias = profile.content_word_bias;
      if (bias >= 1) {
        function_mult = 0;
      } else {
        content_mult = std::max(1.0, bias * wf / ((1 - bias) * wc));
      }
    }
    double z = 0;
    for (std::size_t s = 0; s < sites.size(); ++s) {
      w[s] *= u.words[sites[s].word_index].content_word ? content_mult : function_mult;
      z += w[s];
    }
    if (z <= 0) continue;
    double budget = profile.rate(m) * static_cast<double>(count);
    for (std::size_t s = 0; s < sites.size(); ++s) pm[s] = std::min(1.0, budget * w[s] / z);
  }

  if (!any) {
    auto m = to_marked_ipa(u);
    m.severity = profile.severity;
    m.warnings.push_back("no eligible injection sites; utterance left unmarked");
    return m;
  }

  MarkedIpaUtterance out;
  out.words = u.words;
  out.alignment = Alignment::target;
  out.severity = profile.severity;
  auto punct = punctuation_by_word(u);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::size_t first = 0;
  for (std::size_t w = 0; w < u.words.size(); ++w) {
    std::size_t last = first;
    while (last < sites.size() && sites[last].word_index == w) ++last;
    std::mt19937_64 rng(derive_seed(seed, {w}));

    std::vector<std::optional<MarkerKind>> chosen(last - first);
    auto draw = [&] {
      std::size_t n = 0;
      for (std::size_t s = first; s < last; ++s) {
        auto& c = chosen[s - first];
        c.reset();
        double x = unit(rng);
        if (!sites[s].phoneme_index) {
          if (x < p[index_of(MarkerKind::PAU)][s]) c = MarkerKind::PAU;
        } else {
          double total = 0;
          for (auto m : kSegmental) total += p[index_of(m)][s];
          double scale = total > 1 ? 1 / total : 1;
          double acc = 0;
          for (auto m : kSegmental) {
            acc += p[index_of(m)][s] * scale;
            if (x < acc) {
              c = m;
              break;
            }
          }
        }
        n += c.has_value();
      }
      return n;
    };
    std::size_t n = draw();
    for (int tries = 0; n > profile.cooccurrence_cap && tries < 100; ++tries) n = draw();
    if (n > profile.cooccurrence_cap) {
      std::vector<std::size_t> hit;
      for (std::size_t k = 0; k < chosen.size(); ++k) {
        if (chosen[k]) hit.push_back(k);
      }
      std::shuffle(hit.begin(), hit.end(), rng);
      for (std::size_t k = profile.cooccurrence_cap; k < hit.size(); ++k) chosen[hit[k]].reset();
    }

    const auto& word = u.words[w];
    for (std::size_t s = first; s < last; ++s) {
      auto m = chosen[s - first];
      if (!sites[s].phoneme_index) {
        if (m) {
          out.tokens.push_back(MarkedToken::make_marker(MarkerKind::PAU, w));
          out.edits.push_back({MarkerKind::PAU, w, 0, "", ""});
        }
        continue;
      }
      std::size_t j = *sites[s].phoneme_index;
      const auto& ph0 = word.phonemes[j];
      if (!m) {
        out.tokens.push_back(MarkedToken::make_phoneme(ph0, w));
        continue;
      }
      AppliedEdit e{*m, w, j, ph0.symbol, ""};
      switch (*m) {
        case MarkerKind::DEL:
          break;
        case MarkerKind::SUB: {
          auto cands = substitutes(word, j);
          auto pick = cands[std::uniform_int_distribution<std::size_t>(0, cands.size() - 1)(rng)];
          e.surface = std::string(pick);
          out.tokens.push_back(MarkedToken::make_phoneme({e.surface, ph0.stress}, w));
          break;
        }
        case MarkerKind::INS: {
          out.tokens.push_back(MarkedToken::make_phoneme(ph0, w));
          std::string ins = "ə";
          if (std::bernoulli_distribution(0.5)(rng)) {
            const auto& ps = word.phonemes;
            std::optional<std::string> copy;
            if (j + 1 < ps.size() && ph::is_consonant(ps[j + 1].symbol)) {
              copy = ps[j + 1].symbol;
            } else if (ph::is_consonant(ph0.symbol)) {
              copy = ph0.symbol;
            } else if (j > 0 && ph::is_consonant(ps[j - 1].symbol)) {
              copy = ps[j - 1].symbol;
            }
            if (copy && !fuses(ph0.symbol, *copy)) ins = *copy;
          }
          e.target.clear();
          e.surface = ins;
          out.tokens.push_back(MarkedToken::make_phoneme({ins, Stress::none}, w));
          break;
        }
        case MarkerKind::PRO:
        case MarkerKind::REP:
        case MarkerKind::PAU:
          out.tokens.push_back(MarkedToken::make_phoneme(ph0, w));
          break;
      }
      out.tokens.push_back(MarkedToken::make_marker(*m, w));
      out.edits.push_back(std::move(e));
    }
    for (const auto& pm : punct[w]) out.tokens.push_back(MarkedToken::make_punctuation(pm, w));
    out.tokens.push_back(MarkedToken::make_boundary(w));
    first = last;
  }
  return out;
}

std::string substitute_phoneme(std::string_view target, std::uint64_t seed) {
  if (!ph::find_features(target)) throw InvalidArgument("'" + std::string(target) + "' is not in the phoneme inventory");
  auto cands = ph::nearest_neighbors(target);
  if (cands.empty()) throw InvalidArgument("'" + std::string(target) + "' has no neighbors");
  std::mt19937_64 rng(seed);
  return std::string(cands[std::uniform_int_distribution<std::size_t>(0, cands.size() - 1)(rng)]);
}

}  // namespace hass
