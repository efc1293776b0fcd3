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

#include "hass/lexicon.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "hass/error.hpp"
#include "resources.hpp"
#include "utf8.hpp"

namespace hass {

std::string_view to_string(FrequencyClass f) {
  switch (f) {
    case FrequencyClass::high: return "high";
    case FrequencyClass::mid: return "mid";
    case FrequencyClass::low: return "low";
  }
  return "low";
}

namespace {

constexpr std::array<std::pair<PosTag, std::string_view>, 12> kTagNames{{
    {PosTag::noun, "noun"},
    {PosTag::verb, "verb"},
    {PosTag::auxiliary, "auxiliary"},
    {PosTag::adjective, "adjective"},
    {PosTag::adverb, "adverb"},
    {PosTag::determiner, "determiner"},
    {PosTag::pronoun, "pronoun"},
    {PosTag::preposition, "preposition"},
    {PosTag::conjunction, "conjunction"},
    {PosTag::particle, "particle"},
    {PosTag::interjection, "interjection"},
    {PosTag::numeral, "numeral"},
}};

// Calls fn(fields) for every non-comment line of a TSV blob.
template <typename Fn>
void for_each_row(std::string_view text, Fn&& fn) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    auto line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    fn(fields);
  }
}

}  // namespace

std::string_view to_string(PosTag t) {
  for (auto [tag, name] : kTagNames) {
    if (tag == t) return name;
  }
  return "noun";
}

PosTag parse_pos_tag(std::string_view name) {
  for (auto [tag, n] : kTagNames) {
    if (n == name) return tag;
  }
  throw InvalidArgument("unknown part-of-speech tag '" + std::string(name) + "'");
}

FrequencyClass parse_frequency_class(std::string_view name) {
  for (auto f : {FrequencyClass::high, FrequencyClass::mid, FrequencyClass::low}) {
    if (to_string(f) == name) return f;
  }
  throw InvalidArgument("unknown frequency class '" + std::string(name) + "'");
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

// ---------------------------------------------------------------------------

Lexicon Lexicon::from_tsv(std::istream& in) {
  std::stringstream ss;
  ss << in.rdbuf();
  return from_tsv(ss.str());
}

Lexicon Lexicon::from_tsv(std::string_view text) {
  Lexicon lex;
  std::size_t row = 0;
  for_each_row(text, [&](const std::vector<std::string_view>& f) {
    ++row;
    if (f.size() < 2 || f[0].empty() || f[1].empty()) {
      throw InvalidArgument("lexicon row " + std::to_string(row) + ": expected surface<TAB>IPA");
    }
    lex.entries_.emplace(to_lower(f[0]), split_phonemes(f[1]));
  });
  return lex;
}

const Lexicon& Lexicon::bundled() {
  static const Lexicon lex = from_tsv(resources::kLexiconTsv);
  return lex;
}

const std::vector<Phoneme>* Lexicon::lookup(std::string_view word) const {
  auto it = entries_.find(to_lower(word));
  return it == entries_.end() ? nullptr : &it->second;
}

FrequencyList FrequencyList::from_tsv(std::string_view text) {
  FrequencyList list;
  for_each_row(text, [&](const std::vector<std::string_view>& f) {
    list.ranks_.emplace(to_lower(f[0]), list.ranks_.size());
  });
  return list;
}

const FrequencyList& FrequencyList::bundled() {
  static const FrequencyList list = from_tsv(resources::kFrequencyTsv);
  return list;
}

std::optional<std::size_t> FrequencyList::rank(std::string_view word) const {
  auto it = ranks_.find(to_lower(word));
  if (it == ranks_.end()) return std::nullopt;
  return it->second;
}

FrequencyClass FrequencyList::classify(std::string_view word) const {
  auto r = rank(word);
  if (!r) return FrequencyClass::low;
  std::size_t n = ranks_.size();
  if (*r * 3 < n) return FrequencyClass::high;
  if (*r * 3 < 2 * n) return FrequencyClass::mid;
  return FrequencyClass::low;
}

Tagger Tagger::from_tsv(std::string_view text) {
  Tagger t;
  for_each_row(text, [&](const std::vector<std::string_view>& f) {
    if (f.size() < 2) throw InvalidArgument("function-word row for '" + std::string(f[0]) + "' has no tag");
    t.closed_.emplace(to_lower(f[0]), parse_pos_tag(f[1]));
  });
  return t;
}

const Tagger& Tagger::bundled() {
  static const Tagger t = from_tsv(resources::kFunctionWordsTsv);
  return t;
}

PosTag Tagger::tag(std::string_view word) const {
  auto w = to_lower(word);
  if (auto it = closed_.find(w); it != closed_.end()) return it->second;
  if (!w.empty() && std::all_of(w.begin(), w.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return PosTag::numeral;
  }
  if (w.size() > 4 && w.ends_with("ly")) return PosTag::adverb;
  if (w.size() > 4 && (w.ends_with("ing") || w.ends_with("ed"))) return PosTag::verb;
  return PosTag::noun;
}

bool Tagger::is_function_word(std::string_view word) const { return !is_content_tag(tag(word)); }

WordClass classify_word(std::string_view word, PosTag tag, const FrequencyList& freq) {
  return WordClass{is_content_tag(tag), freq.classify(word)};
}

WordClass classify_word(std::string_view word, PosTag tag) {
  return classify_word(word, tag, FrequencyList::bundled());
}

// ---------------------------------------------------------------------------

std::vector<std::optional<std::string>> LexiconBackend::convert(std::span<const std::string> words) {
  std::vector<std::optional<std::string>> out;
  out.reserve(words.size());
  for (const auto& w : words) {
    if (const auto* p = lex_->lookup(w)) {
      out.emplace_back(to_ipa(*p));
    } else {
      out.emplace_back(std::nullopt);
    }
  }
  return out;
}

std::vector<std::optional<std::string>> SubprocessG2pBackend::convert(std::span<const std::string> words) {
  // popen is one-directional, so the request goes through a temp file.
  auto dir = std::filesystem::temp_directory_path();
  std::string tmpl = (dir / "hass-g2p-XXXXXX").string();
  int fd = mkstemp(tmpl.data());
  if (fd < 0) throw Error("g2p: cannot create request file");
  close(fd);
  {
    std::ofstream req(tmpl);
    for (const auto& w : words) req << w << '\n';
  }
  std::string cmd = command_ + " < '" + tmpl + "'";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    std::filesystem::remove(tmpl);
    throw Error("g2p: cannot start '" + command_ + "'");
  }
  std::string output;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) output.append(buf.data(), n);
  int status = pclose(pipe);
  std::filesystem::remove(tmpl);
  if (status != 0) throw Error("g2p: '" + command_ + "' exited with status " + std::to_string(status));

  std::vector<std::optional<std::string>> out;
  std::istringstream lines(output);
  std::string line;
  while (out.size() < words.size() && std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      out.emplace_back(std::nullopt);
    } else {
      out.emplace_back(line);
    }
  }
  if (out.size() != words.size()) {
    throw Error("g2p: expected " + std::to_string(words.size()) + " replies, got " + std::to_string(out.size()));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Rule {
  std::string_view letters;
  std::string_view ipa;  // space-separated phonemes
};

// Longest match first within each starting letter.
constexpr std::array kLetterRules{
    Rule{"tch", "tʃ"}, Rule{"igh", "aɪ"}, Rule{"sch", "s k"},
    Rule{"ch", "tʃ"}, Rule{"sh", "ʃ"},  Rule{"th", "θ"},  Rule{"ph", "f"},  Rule{"wh", "w"},
    Rule{"ng", "ŋ"},  Rule{"ck", "k"},  Rule{"qu", "k w"}, Rule{"gh", ""}, Rule{"kn", "n"},
    Rule{"wr", "ɹ"},  Rule{"ee", "iː"}, Rule{"ea", "iː"}, Rule{"oo", "uː"}, Rule{"ai", "eɪ"},
    Rule{"ay", "eɪ"}, Rule{"oa", "oʊ"}, Rule{"ou", "aʊ"}, Rule{"ow", "aʊ"}, Rule{"oi", "ɔɪ"},
    Rule{"oy", "ɔɪ"}, Rule{"au", "ɔː"}, Rule{"aw", "ɔː"}, Rule{"ew", "uː"}, Rule{"ie", "iː"},
    Rule{"er", "ɜɹ"}, Rule{"ir", "ɜɹ"}, Rule{"ur", "ɜɹ"}, Rule{"ar", "ɑːɹ"}, Rule{"or", "ɔɹ"},
    Rule{"a", "æ"},   Rule{"b", "b"},   Rule{"c", "k"},   Rule{"d", "d"},   Rule{"e", "ɛ"},
    Rule{"f", "f"},   Rule{"g", "ɡ"},   Rule{"h", "h"},   Rule{"i", "ɪ"},   Rule{"j", "dʒ"},
    Rule{"k", "k"},   Rule{"l", "l"},   Rule{"m", "m"},   Rule{"n", "n"},   Rule{"o", "ɑː"},
    Rule{"p", "p"},   Rule{"q", "k"},   Rule{"r", "ɹ"},   Rule{"s", "s"},   Rule{"t", "t"},
    Rule{"u", "ʌ"},   Rule{"v", "v"},   Rule{"w", "w"},   Rule{"x", "k s"}, Rule{"y", "i"},
    Rule{"z", "z"},
};

bool is_vowel_letter(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y'; }

void append_ipa(std::vector<Phoneme>& out, std::string_view ipa) {
  std::size_t start = 0;
  while (start < ipa.size()) {
    auto sp = ipa.find(' ', start);
    if (sp == std::string_view::npos) sp = ipa.size();
    if (sp > start) {
      for (auto& p : split_phonemes(ipa.substr(start, sp - start))) out.push_back(std::move(p));
    }
    start = sp + 1;
  }
}

}  // namespace

std::vector<Phoneme> letter_to_sound(std::string_view word) {
  std::string w;
  for (char c : to_lower(word)) {
    if (c >= 'a' && c <= 'z') w.push_back(c);
  }
  // Silent final e after a consonant.
  if (w.size() > 2 && w.back() == 'e' && !is_vowel_letter(w[w.size() - 2])) w.pop_back();

  std::vector<Phoneme> out;
  for (std::size_t i = 0; i < w.size();) {
    // Doubled consonants sound once.
    if (i > 0 && w[i] == w[i - 1] && !is_vowel_letter(w[i])) {
      ++i;
      continue;
    }
    std::string_view rest(w.data() + i, w.size() - i);
    if (rest.front() == 'c' && rest.size() > 1 && (rest[1] == 'e' || rest[1] == 'i' || rest[1] == 'y')) {
      append_ipa(out, "s");
      ++i;
      continue;
    }
    if (rest.front() == 'y' && i == 0) {
      append_ipa(out, "j");
      ++i;
      continue;
    }
    for (const auto& r : kLetterRules) {
      if (rest.starts_with(r.letters)) {
        append_ipa(out, r.ipa);
        i += r.letters.size();
        break;
      }
    }
  }
  if (out.empty()) append_ipa(out, "ə");
  for (auto& p : out) {
    if (is_syllabic(p.symbol)) {
      p.stress = Stress::primary;
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

bool AlignedUtterance::is_clause_start(std::size_t i) const {
  return std::binary_search(clause_starts.begin(), clause_starts.end(), i);
}

namespace {

struct RawWord {
  std::string surface;
  std::string punct;
};

bool is_word_cp(char32_t cp) {
  if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9')) return true;
  return cp >= 0xC0 && cp <= 0x024F && cp != 0xD7 && cp != 0xF7;
}

std::vector<RawWord> split_words(std::string_view text) {
  std::vector<RawWord> out;
  bool in_word = false;
  for (std::size_t pos = 0; pos < text.size();) {
    auto d = utf8::decode(text, pos);
    if (d.length == 0) throw InvalidArgument("malformed UTF-8 in text");
    char32_t cp = d.cp;
    auto next = [&]() -> char32_t {
      auto n = utf8::decode(text, pos + d.length);
      return n.length ? n.cp : 0;
    };
    if (is_word_cp(cp)) {
      if (!in_word) out.push_back({});
      in_word = true;
      out.back().surface.append(text.substr(pos, d.length));
    } else if ((cp == '\'' || cp == U'’' || cp == '-') && in_word && is_word_cp(next())) {
      out.back().surface.push_back(cp == '-' ? '-' : '\'');
    } else if (cp == '.' && text.substr(pos, 3) == "...") {
      if (!out.empty()) out.back().punct += "…";
      in_word = false;
      pos += 3;
      continue;
    } else if (cp == ',' || cp == ';' || cp == ':' || cp == '.' || cp == '?' || cp == '!' || cp == U'…' ||
               cp == U'—' || cp == U'–' || cp == '-') {
      if (!out.empty()) out.back().punct.append(text.substr(pos, d.length));
      in_word = false;
    } else {
      // Whitespace, quotes, brackets.
      in_word = false;
    }
    pos += d.length;
  }
  return out;
}

std::optional<std::vector<Phoneme>> from_lexicon(const std::string& word, const Lexicon& lex) {
  if (const auto* p = lex.lookup(word)) return *p;
  if (word.find('-') != std::string::npos) {
    std::vector<Phoneme> joined;
    std::size_t start = 0;
    while (start <= word.size()) {
      auto dash = word.find('-', start);
      auto part = word.substr(start, dash == std::string::npos ? std::string::npos : dash - start);
      const auto* p = lex.lookup(part);
      if (!p) return std::nullopt;
      joined.insert(joined.end(), p->begin(), p->end());
      if (dash == std::string::npos) break;
      start = dash + 1;
    }
    return joined;
  }
  auto lw = to_lower(word);
  if (lw.size() > 2 && lw.ends_with("'s")) {
    if (const auto* p = lex.lookup(lw.substr(0, lw.size() - 2))) {
      auto out = *p;
      const auto& last = out.back().symbol;
      if (last == "s" || last == "z" || last == "ʃ" || last == "ʒ" || last == "tʃ" || last == "dʒ") {
        out.push_back({"ɪ"});
        out.push_back({"z"});
      } else if (last == "p" || last == "t" || last == "k" || last == "f" || last == "θ") {
        out.push_back({"s"});
      } else {
        out.push_back({"z"});
      }
      return out;
    }
  }
  return std::nullopt;
}

}  // namespace

AlignedUtterance to_word_aligned_ipa(std::string_view text, G2pBackend* g2p) {
  auto raw = split_words(text);
  if (raw.empty()) throw InvalidArgument("text has no words");

  std::vector<std::optional<std::string>> backend_ipa(raw.size());
  if (g2p) {
    std::vector<std::string> request;
    request.reserve(raw.size());
    for (const auto& r : raw) request.push_back(to_lower(r.surface));
    backend_ipa = g2p->convert(request);
    if (backend_ipa.size() != raw.size()) throw Error("g2p backend returned the wrong number of replies");
  }

  const auto& lex = Lexicon::bundled();
  const auto& tagger = Tagger::bundled();
  const auto& freq = FrequencyList::bundled();

  AlignedUtterance u;
  u.source_text = std::string(text);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    WordUnit w;
    w.surface = raw[i].surface;
    w.index = i;
    if (backend_ipa[i] && !backend_ipa[i]->empty()) {
      w.phonemes = split_phonemes(*backend_ipa[i]);
    } else if (auto p = from_lexicon(raw[i].surface, lex)) {
      w.phonemes = std::move(*p);
    } else {
      w.phonemes = letter_to_sound(raw[i].surface);
      w.approximate = true;
    }
    w.syllable_count = std::max(1, count_syllables(w.phonemes));
    w.pos = tagger.tag(w.surface);
    auto cls = classify_word(w.surface, w.pos, freq);
    w.content_word = cls.content_word;
    w.frequency = cls.frequency;

    if (i == 0 || !raw[i - 1].punct.empty() || w.pos == PosTag::conjunction) u.clause_starts.push_back(i);
    u.words.push_back(std::move(w));
    u.punctuation.push_back(raw[i].punct);
  }
  return u;
}

std::string surface_text(const AlignedUtterance& u) {
  std::string out;
  for (std::size_t i = 0; i < u.words.size(); ++i) {
    if (i) out += ' ';
    out += u.words[i].surface;
    out += u.punctuation[i];
  }
  return out;
}

MarkedIpaUtterance to_marked_ipa(const AlignedUtterance& u) {
  MarkedIpaUtterance m;
  m.words = u.words;
  m.alignment = Alignment::target;
  for (std::size_t i = 0; i < u.words.size(); ++i) {
    for (const auto& p : u.words[i].phonemes) m.tokens.push_back(MarkedToken::make_phoneme(p, i));
    std::string_view punct = u.punctuation[i];
    if (i + 1 == u.words.size()) {
      while (!punct.empty() && (punct.back() == '.' || punct.back() == '?' || punct.back() == '!')) {
        punct.remove_suffix(1);
      }
    }
    for (std::size_t pos = 0; pos < punct.size();) {
      auto d = utf8::decode(punct, pos);
      std::string mark(punct.substr(pos, d.length));
      if (mark != "," && mark != ";" && mark != "…" && mark != "." && mark != "?" && mark != "!") mark = ",";
      m.tokens.push_back(MarkedToken::make_punctuation(std::move(mark), i));
      pos += d.length;
    }
    m.tokens.push_back(MarkedToken::make_boundary(i));
  }
  return m;
}

}  // namespace hass
