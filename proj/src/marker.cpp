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

#include "hass/marker.hpp"

#include <algorithm>
#include <numeric>

#include "hass/error.hpp"
#include "segment.hpp"
#include "utf8.hpp"

namespace hass {

std::string_view to_string(MarkerKind k) {
  switch (k) {
    case MarkerKind::PAU: return "PAU";
    case MarkerKind::SUB: return "SUB";
    case MarkerKind::DEL: return "DEL";
    case MarkerKind::REP: return "REP";
    case MarkerKind::PRO: return "PRO";
    case MarkerKind::INS: return "INS";
  }
  return "PAU";
}

std::string_view to_string(Tier t) {
  switch (t) {
    case Tier::primary: return "primary";
    case Tier::secondary: return "secondary";
    case Tier::rare: return "rare";
  }
  return "rare";
}

std::optional<MarkerKind> parse_marker_kind(std::string_view name) {
  for (auto k : kAllMarkers) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

MarkedToken MarkedToken::make_phoneme(Phoneme p, std::size_t word) {
  MarkedToken t;
  t.kind = TokenKind::phoneme;
  t.phoneme = std::move(p);
  t.word_index = word;
  return t;
}

MarkedToken MarkedToken::make_marker(MarkerKind k, std::size_t word) {
  MarkedToken t;
  t.kind = TokenKind::marker;
  t.marker = k;
  t.word_index = word;
  return t;
}

MarkedToken MarkedToken::make_punctuation(std::string p, std::size_t word) {
  MarkedToken t;
  t.kind = TokenKind::punctuation;
  t.punctuation = std::move(p);
  t.word_index = word;
  return t;
}

MarkedToken MarkedToken::make_boundary(std::size_t word) {
  MarkedToken t;
  t.kind = TokenKind::word_boundary;
  t.word_index = word;
  return t;
}

std::uint32_t MarkerCounts::total() const {
  return std::accumulate(per_kind.begin(), per_kind.end(), std::uint32_t{0});
}

std::uint32_t MarkerCounts::primary() const {
  std::uint32_t n = 0;
  for (auto k : kAllMarkers) {
    if (tier_of(k) == Tier::primary) n += (*this)[k];
  }
  return n;
}

MarkerCounts& MarkerCounts::operator+=(const MarkerCounts& o) {
  for (std::size_t i = 0; i < per_kind.size(); ++i) per_kind[i] += o.per_kind[i];
  return *this;
}

nlohmann::ordered_json to_json(const MarkerCounts& c) {
  nlohmann::ordered_json j;
  for (auto k : kAllMarkers) j[std::string(to_string(k))] = c[k];
  j["total"] = c.total();
  return j;
}

MarkerCounts marker_counts_from_json(const nlohmann::json& j) {
  MarkerCounts c;
  for (auto k : kAllMarkers) c[k] = j.at(std::string(to_string(k))).get<std::uint32_t>();
  if (j.contains("total") && j.at("total").get<std::uint32_t>() != c.total()) {
    throw InvalidArgument("marker counts: total disagrees with per-kind sum");
  }
  return c;
}

namespace {

// ---------------------------------------------------------------------------
// Lexing: raw bytes -> atoms (normalized codepoints, tags, stress, punctuation,
// whitespace), each carrying its byte offset in the original input.

enum class AtomType : std::uint8_t { codepoint, tag, stress, punct, space };

struct Atom {
  AtomType type = AtomType::space;
  std::size_t offset = 0;
  char32_t cp = 0;
  MarkerKind tag = MarkerKind::PAU;
  Stress stress = Stress::none;
  std::string punct;
};

Atom make_atom(AtomType type, std::size_t offset, char32_t cp = 0) {
  Atom a;
  a.type = type;
  a.offset = offset;
  a.cp = cp;
  return a;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

// TIPA-style ASCII escapes.
std::optional<char32_t> ascii_escape(char c) {
  switch (c) {
    case 'A': return U'ɑ';
    case 'D': return U'ð';
    case 'E': return U'ɛ';
    case 'I': return U'ɪ';
    case 'N': return U'ŋ';
    case 'O': return U'ɔ';
    case 'Q': return U'ɒ';
    case 'S': return U'ʃ';
    case 'T': return U'θ';
    case 'U': return U'ʊ';
    case 'V': return U'ʌ';
    case 'Z': return U'ʒ';
    case '@': return U'ə';
    case '3': return U'ɜ';
    case 'g': return U'ɡ';
    case ':': return U'ː';
    default: return std::nullopt;
  }
}

std::vector<Atom> lex(std::string_view s) {
  std::vector<Atom> atoms;
  auto push_cp = [&](char32_t cp, std::size_t off) {
    atoms.push_back(make_atom(AtomType::codepoint, off, cp));
  };
  auto push_punct = [&](std::string p, std::size_t off) {
    Atom a = make_atom(AtomType::punct, off);
    a.punct = std::move(p);
    atoms.push_back(std::move(a));
  };
  auto push_stress = [&](Stress st, std::size_t off) {
    Atom a = make_atom(AtomType::stress, off);
    a.stress = st;
    atoms.push_back(a);
  };

  std::size_t pos = 0;
  while (pos < s.size()) {
    char c = s[pos];
    if (is_space(c)) {
      std::size_t start = pos;
      while (pos < s.size() && is_space(s[pos])) ++pos;
      atoms.push_back(make_atom(AtomType::space, start));
      continue;
    }
    if (c == '[') {
      std::size_t close = pos + 1;
      while (close < s.size() && s[close] != ']' && !is_space(s[close]) && s[close] != '[') ++close;
      if (close >= s.size() || s[close] != ']') throw SyntaxError(pos, "unclosed bracket");
      auto name = s.substr(pos + 1, close - pos - 1);
      auto kind = parse_marker_kind(name);
      if (!kind) throw SyntaxError(pos, "unknown marker '[" + std::string(name) + "]'");
      Atom a = make_atom(AtomType::tag, pos);
      a.tag = *kind;
      atoms.push_back(a);
      pos = close + 1;
      continue;
    }
    if (c == ']') throw SyntaxError(pos, "unmatched ']'");
    if (c == ',' || c == ';' || c == '?' || c == '!') {
      push_punct(std::string(1, c), pos);
      ++pos;
      continue;
    }
    if (c == '.') {
      if (s.substr(pos, 3) == "...") {
        push_punct("…", pos);
        pos += 3;
      } else {
        push_punct(".", pos);
        ++pos;
      }
      continue;
    }
    if (c == '"') {
      if (pos + 1 < s.size() && s[pos + 1] == '"') {
        push_stress(Stress::secondary, pos);
        pos += 2;
      } else {
        push_stress(Stress::primary, pos);
        ++pos;
      }
      continue;
    }
    if (c == '\\') {
      auto rest = s.substr(pos + 1);
      // Control words swallow one following space, as in TeX.
      auto control_word = [&](std::string_view word) {
        std::size_t end = pos + 1 + word.size();
        if (end < s.size() && s[end] == ' ') ++end;
        return end;
      };
      if (rest.starts_with("ae")) {
        push_cp(U'æ', pos);
        pos = control_word("ae");
      } else if (rest.starts_with("dots")) {
        push_punct("…", pos);
        pos = control_word("dots");
      } else if (rest.starts_with("`")) {
        push_stress(Stress::secondary, pos);
        pos += 2;
      } else {
        throw SyntaxError(pos, "unknown escape");
      }
      continue;
    }
    if (auto esc = ascii_escape(c)) {
      push_cp(*esc, pos);
      ++pos;
      continue;
    }
    auto d = utf8::decode(s, pos);
    if (d.length == 0) throw SyntaxError(pos, "malformed UTF-8");
    switch (d.cp) {
      case U'ˈ': push_stress(Stress::primary, pos); break;
      case U'ˌ': push_stress(Stress::secondary, pos); break;
      case U'…': push_punct("…", pos); break;
      // Glyphs that PDF extraction of TIPA produces for ː and ɹ.
      case U'ù': push_cp(U'ː', pos); break;
      case U'ô': push_cp(U'ɹ', pos); break;
      default:
        if (utf8::is_ipa_base(d.cp) || utf8::is_ipa_modifier(d.cp)) {
          push_cp(d.cp, pos);
        } else {
          throw SyntaxError(pos, "unexpected character '" + std::string(s.substr(pos, d.length)) + "'");
        }
    }
    pos += d.length;
  }
  return atoms;
}

// ---------------------------------------------------------------------------
// Parsing: atoms -> tokens.

class Parser {
 public:
  explicit Parser(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {}

  MarkedIpaUtterance run() {
    for (i_ = 0; i_ < atoms_.size();) {
      const Atom& a = atoms_[i_];
      switch (a.type) {
        case AtomType::space:
          after_space_ = true;
          ++i_;
          break;
        case AtomType::stress:
          if (pending_stress_) throw SyntaxError(a.offset, "two stress marks in a row");
          pending_stress_ = a.stress;
          stress_offset_ = a.offset;
          ++i_;
          break;
        case AtomType::codepoint:
          segment();
          break;
        case AtomType::tag:
          marker(a);
          ++i_;
          break;
        case AtomType::punct:
          punctuation(a);
          ++i_;
          break;
      }
    }
    if (pending_stress_) throw SyntaxError(stress_offset_, "dangling stress mark");
    close_word();
    if (!pending_pauses_.empty()) {
      if (words_.empty()) throw SyntaxError(0, "utterance has no phonemes");
      for (auto idx : pending_pauses_) out_.tokens[idx].word_index = words_.size() - 1;
    }
    out_.words = std::move(words_);
    out_.alignment = Alignment::self;
    return std::move(out_);
  }

 private:
  void segment() {
    const Atom& first = atoms_[i_];
    if (!utf8::is_ipa_base(first.cp)) throw SyntaxError(first.offset, "diacritic without a base segment");
    // Collect the run of adjacent codepoint atoms.
    std::vector<char32_t> run;
    for (std::size_t j = i_; j < atoms_.size() && atoms_[j].type == AtomType::codepoint; ++j) {
      run.push_back(atoms_[j].cp);
    }
    std::size_t n = detail::match_segment(run, 0);

    if (word_open_ && (after_space_ || word_has_punct_)) close_word();
    if (!word_open_) open_word();

    Phoneme p;
    for (std::size_t k = 0; k < n; ++k) utf8::append(p.symbol, run[k]);
    p.stress = pending_stress_.value_or(Stress::none);
    pending_stress_.reset();
    current_phonemes_.push_back(p);
    out_.tokens.push_back(MarkedToken::make_phoneme(std::move(p), words_.size() - 1));
    after_space_ = false;
    i_ += n;
  }

  void marker(const Atom& a) {
    if (pending_stress_) throw SyntaxError(stress_offset_, "dangling stress mark");
    bool attached = word_open_ && !word_has_punct_;
    if (a.tag == MarkerKind::PAU) {
      if (attached && !after_space_) {
        out_.tokens.push_back(MarkedToken::make_marker(a.tag, words_.size() - 1));
      } else {
        close_word();
        pending_pauses_.push_back(out_.tokens.size());
        out_.tokens.push_back(MarkedToken::make_marker(a.tag, 0));
        after_space_ = false;
      }
      return;
    }
    if (!word_open_) throw SyntaxError(a.offset, "marker [" + std::string(to_string(a.tag)) + "] has no preceding segment");
    if (word_has_punct_) throw SyntaxError(a.offset, "marker [" + std::string(to_string(a.tag)) + "] follows punctuation");
    out_.tokens.push_back(MarkedToken::make_marker(a.tag, words_.size() - 1));
    after_space_ = false;
  }

  void punctuation(const Atom& a) {
    if (pending_stress_) throw SyntaxError(stress_offset_, "dangling stress mark");
    if (!word_open_) throw SyntaxError(a.offset, "punctuation with no preceding word");
    out_.tokens.push_back(MarkedToken::make_punctuation(a.punct, words_.size() - 1));
    word_has_punct_ = true;
    after_space_ = false;
  }

  void open_word() {
    WordUnit w;
    w.index = words_.size();
    words_.push_back(std::move(w));
    for (auto idx : pending_pauses_) out_.tokens[idx].word_index = words_.size() - 1;
    pending_pauses_.clear();
    current_phonemes_.clear();
    word_open_ = true;
    word_has_punct_ = false;
  }

  void close_word() {
    if (!word_open_) return;
    auto& w = words_.back();
    w.phonemes = current_phonemes_;
    w.surface = to_ipa(current_phonemes_);
    w.syllable_count = std::max(1, count_syllables(current_phonemes_));
    out_.tokens.push_back(MarkedToken::make_boundary(words_.size() - 1));
    word_open_ = false;
    word_has_punct_ = false;
  }

  std::vector<Atom> atoms_;
  std::size_t i_ = 0;
  MarkedIpaUtterance out_;
  std::vector<WordUnit> words_;
  std::vector<Phoneme> current_phonemes_;
  std::vector<std::size_t> pending_pauses_;
  std::optional<Stress> pending_stress_;
  std::size_t stress_offset_ = 0;
  bool word_open_ = false;
  bool word_has_punct_ = false;
  bool after_space_ = false;
};

}  // namespace

MarkedIpaUtterance parse_marked_ipa(std::string_view text) {
  return Parser(lex(text)).run();
}

MarkedIpaUtterance parse_marked_ipa(std::string_view text, std::span<const WordUnit> alignment) {
  auto u = parse_marked_ipa(text);
  std::vector<int> delta(u.words.size(), 0);  // INS - DEL per word
  for (const auto& t : u.tokens) {
    if (t.kind != TokenKind::marker) continue;
    if (*t.marker == MarkerKind::DEL) --delta[t.word_index];
    if (*t.marker == MarkerKind::INS) ++delta[t.word_index];
  }
  std::size_t common = std::min(u.words.size(), alignment.size());
  for (std::size_t w = 0; w < common; ++w) {
    auto surface = static_cast<long>(u.words[w].phonemes.size());
    auto expected = static_cast<long>(alignment[w].phonemes.size()) + delta[w];
    if (surface != expected) {
      throw AlignmentError(w, "word '" + alignment[w].surface + "' expects " + std::to_string(expected) +
                                  " surface phonemes, found " + std::to_string(surface));
    }
  }
  if (u.words.size() != alignment.size()) {
    throw AlignmentError(common, "utterance has " + std::to_string(u.words.size()) + " words, alignment has " +
                                     std::to_string(alignment.size()));
  }
  u.words.assign(alignment.begin(), alignment.end());
  for (std::size_t w = 0; w < u.words.size(); ++w) u.words[w].index = w;
  u.alignment = Alignment::target;
  return u;
}

std::string serialize(const MarkedIpaUtterance& u) {
  std::string out;
  bool in_word = false;
  for (const auto& t : u.tokens) {
    switch (t.kind) {
      case TokenKind::phoneme:
        if (!in_word) {
          if (!out.empty()) out += ' ';
          in_word = true;
        }
        out += to_ipa(*t.phoneme);
        break;
      case TokenKind::marker:
        if (!in_word && !out.empty()) out += ' ';
        out += '[';
        out += to_string(*t.marker);
        out += ']';
        break;
      case TokenKind::punctuation:
        out += t.punctuation;
        break;
      case TokenKind::word_boundary:
        in_word = false;
        break;
    }
  }
  return out;
}

std::string canonicalize(std::string_view text) { return serialize(parse_marked_ipa(text)); }

MarkerCounts count_markers(const MarkedIpaUtterance& u) {
  MarkerCounts c;
  for (const auto& t : u.tokens) {
    if (t.kind == TokenKind::marker) ++c[*t.marker];
  }
  return c;
}

std::uint32_t count_content_markers(const MarkedIpaUtterance& u) {
  std::uint32_t n = 0;
  for (const auto& t : u.tokens) {
    if (t.kind == TokenKind::marker && t.word_index < u.words.size() && u.words[t.word_index].content_word) ++n;
  }
  return n;
}

std::vector<std::uint32_t> markers_per_word(const MarkedIpaUtterance& u) {
  std::vector<std::uint32_t> per(u.words.size(), 0);
  for (const auto& t : u.tokens) {
    if (t.kind == TokenKind::marker && t.word_index < per.size()) ++per[t.word_index];
  }
  return per;
}

MarkedIpaUtterance concatenate(const MarkedIpaUtterance& a, const MarkedIpaUtterance& b) {
  MarkedIpaUtterance out = a;
  std::size_t shift = a.words.size();
  for (auto t : b.tokens) {
    t.word_index += shift;
    out.tokens.push_back(std::move(t));
  }
  for (auto w : b.words) {
    w.index += shift;
    out.words.push_back(std::move(w));
  }
  for (auto e : b.edits) {
    e.word_index += shift;
    out.edits.push_back(std::move(e));
  }
  out.warnings.insert(out.warnings.end(), b.warnings.begin(), b.warnings.end());
  return out;
}

std::vector<Phoneme> surface_phonemes(const MarkedIpaUtterance& u, std::size_t w) {
  std::vector<Phoneme> out;
  for (const auto& t : u.tokens) {
    if (t.kind == TokenKind::phoneme && t.word_index == w) out.push_back(*t.phoneme);
  }
  return out;
}

void check_invariants(const MarkedIpaUtterance& u) {
  std::size_t boundaries = 0;
  std::optional<std::size_t> last_phoneme_word;
  for (std::size_t i = 0; i < u.tokens.size(); ++i) {
    const auto& t = u.tokens[i];
    if (t.word_index >= u.words.size()) {
      throw InvalidArgument("token " + std::to_string(i) + " refers to missing word " + std::to_string(t.word_index));
    }
    bool has_phoneme = t.phoneme.has_value();
    bool has_marker = t.marker.has_value();
    if (t.kind == TokenKind::phoneme && (!has_phoneme || has_marker)) {
      throw InvalidArgument("phoneme token " + std::to_string(i) + " is malformed");
    }
    if (t.kind == TokenKind::marker && (has_phoneme || !has_marker)) {
      throw InvalidArgument("marker token " + std::to_string(i) + " is malformed");
    }
    switch (t.kind) {
      case TokenKind::phoneme:
        last_phoneme_word = t.word_index;
        break;
      case TokenKind::marker:
        if (*t.marker == MarkerKind::PAU) break;
        if (!last_phoneme_word) {
          throw InvalidArgument("marker [" + std::string(to_string(*t.marker)) + "] precedes the first phoneme");
        }
        if (*last_phoneme_word != t.word_index) {
          throw InvalidArgument("marker token " + std::to_string(i) + " is not attributed to its preceding segment");
        }
        break;
      case TokenKind::word_boundary:
        ++boundaries;
        break;
      case TokenKind::punctuation:
        break;
    }
  }
  if (boundaries != u.words.size()) {
    throw InvalidArgument("word-boundary count " + std::to_string(boundaries) + " differs from word count " +
                          std::to_string(u.words.size()));
  }
}

}  // namespace hass
