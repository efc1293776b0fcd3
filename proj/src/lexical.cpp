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

#include "hass/lexical.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "hass/error.hpp"
#include "resources.hpp"

namespace hass {

std::string_view to_string(EditKind k) {
  switch (k) {
    case EditKind::circumlocution: return "circumlocution";
    case EditKind::false_start: return "false-start";
    case EditKind::filled_pause: return "filled-pause";
    case EditKind::word_repetition: return "word-repetition";
  }
  return "filled-pause";
}

EditKind parse_edit_kind(std::string_view name) {
  for (auto k : {EditKind::circumlocution, EditKind::false_start, EditKind::filled_pause, EditKind::word_repetition}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown edit kind '" + std::string(name) + "'");
}

bool LexicalResult::in_repair_span(std::size_t w) const {
  return std::any_of(repair_spans.begin(), repair_spans.end(), [w](const RepairSpan& s) { return s.contains(w); });
}

nlohmann::ordered_json to_json(const LexicalResult& r) {
  nlohmann::ordered_json j;
  j["dysfluent-text"] = r.dysfluent_text;
  j["ground-truth"] = r.ground_truth;
  auto& edits = j["edits"] = nlohmann::ordered_json::array();
  for (const auto& e : r.edits) {
    nlohmann::ordered_json je;
    je["kind"] = to_string(e.kind);
    je["anchor-word-index"] = e.anchor_word_index;
    je["insert-before"] = e.insert_before;
    je["inserted-text"] = e.inserted_text;
    je["repair-flag"] = e.repair;
    if (e.target_dropped) je["target-dropped"] = true;
    edits.push_back(std::move(je));
  }
  auto& spans = j["repair-spans"] = nlohmann::ordered_json::array();
  for (const auto& s : r.repair_spans) spans.push_back({s.begin, s.end});
  auto& origins = j["origins"] = nlohmann::ordered_json::array();
  for (const auto& o : r.origins) {
    if (o) {
      origins.push_back(*o);
    } else {
      origins.push_back(nullptr);
    }
  }
  j["rule-based"] = r.rule_based;
  return j;
}

LexicalResult lexical_result_from_json(const nlohmann::json& j) {
  LexicalResult r;
  r.dysfluent_text = j.at("dysfluent-text").get<std::string>();
  r.ground_truth = j.at("ground-truth").get<std::string>();
  for (const auto& je : j.at("edits")) {
    LexicalEdit e;
    e.kind = parse_edit_kind(je.at("kind").get<std::string>());
    e.anchor_word_index = je.at("anchor-word-index").get<std::size_t>();
    e.insert_before = je.at("insert-before").get<std::size_t>();
    e.inserted_text = je.at("inserted-text").get<std::string>();
    e.repair = je.at("repair-flag").get<bool>();
    e.target_dropped = je.value("target-dropped", false);
    r.edits.push_back(std::move(e));
  }
  for (const auto& s : j.at("repair-spans")) r.repair_spans.push_back({s.at(0).get<std::size_t>(), s.at(1).get<std::size_t>()});
  if (j.contains("origins")) {
    for (const auto& o : j.at("origins")) {
      if (o.is_null()) {
        r.origins.emplace_back(std::nullopt);
      } else {
        r.origins.emplace_back(o.get<std::size_t>());
      }
    }
  }
  r.rule_based = j.value("rule-based", true);
  return r;
}

CircumlocutionTable CircumlocutionTable::from_tsv(std::string_view text) {
  CircumlocutionTable t;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    auto line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0 || tab + 1 == line.size()) {
      throw InvalidArgument("circumlocution row '" + std::string(line) + "' is not target<TAB>paraphrase");
    }
    t.entries_.emplace(to_lower(line.substr(0, tab)), std::string(line.substr(tab + 1)));
  }
  return t;
}

const CircumlocutionTable& CircumlocutionTable::bundled() {
  static const CircumlocutionTable t = from_tsv(resources::kCircumlocutionsTsv);
  return t;
}

std::optional<std::string_view> CircumlocutionTable::lookup(std::string_view word) const {
  auto it = entries_.find(to_lower(word));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

LexicalRates default_lexical_rates(SeverityLevel s) {
  switch (s) {
    case SeverityLevel::mild: return {1.5, {0.30, 0.20, 0.30, 0.20}, 0.0};
    case SeverityLevel::moderate: return {3.0, {0.25, 0.30, 0.20, 0.25}, 0.15};
    case SeverityLevel::severe: return {5.0, {0.25, 0.30, 0.20, 0.25}, 0.35};
    case SeverityLevel::control: break;
  }
  throw InvalidArgument("control severity has no lexical rates");
}

double anchor_weight(const WordUnit& w, const CircumlocutionTable& table) {
  double f = w.frequency == FrequencyClass::low ? 4.0 : w.frequency == FrequencyClass::mid ? 2.0 : 1.0;
  double bonus = table.lookup(w.surface) ? 3.0 : 1.0;
  return f * static_cast<double>(w.syllable_count) * bonus;
}

namespace {

std::vector<std::string> split_spaces(std::string_view s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    auto sp = s.find(' ', pos);
    if (sp == std::string_view::npos) sp = s.size();
    if (sp > pos) out.emplace_back(s.substr(pos, sp - pos));
    pos = sp + 1;
  }
  return out;
}

struct Item {
  std::string word;
  std::string punct;
  std::optional<std::size_t> origin;
};

struct Insertion {
  std::vector<Item> items;
  bool comma_before = false;  // give the preceding word a comma if it has none
};

struct Rendered {
  std::string text;
  std::vector<std::optional<std::size_t>> origins;
  std::vector<std::optional<std::size_t>> gt_position;         // per GT word
  std::vector<std::pair<std::size_t, std::size_t>> insertions;  // [first, last] per insertion
};

// Ground truth plus pending insertions and drops; rendered once at the end.
class Draft {
 public:
  explicit Draft(const AlignedUtterance& gt)
      : gt_(gt), before_(gt.words.size()), dropped_(gt.words.size(), false) {}

  std::size_t insert(std::size_t before, Insertion ins) {
    before_[before].push_back(insertions_.size());
    insertions_.push_back(std::move(ins));
    return insertions_.size() - 1;
  }

  void drop(std::size_t i) { dropped_[i] = true; }
  bool dropped(std::size_t i) const { return dropped_[i]; }

  Rendered render() const {
    std::vector<Item> out;
    Rendered r;
    r.gt_position.assign(gt_.words.size(), std::nullopt);
    r.insertions.assign(insertions_.size(), {0, 0});
    for (std::size_t i = 0; i < gt_.words.size(); ++i) {
      for (auto id : before_[i]) {
        const auto& ins = insertions_[id];
        if (ins.comma_before && !out.empty() && out.back().punct.empty()) out.back().punct = ",";
        r.insertions[id] = {out.size(), out.size() + ins.items.size() - 1};
        out.insert(out.end(), ins.items.begin(), ins.items.end());
      }
      if (dropped_[i]) {
        // Keep sentence punctuation when the last word goes missing.
        if (!gt_.punctuation[i].empty() && !out.empty() && (out.back().punct.empty() || out.back().punct == ",")) {
          out.back().punct = gt_.punctuation[i];
        }
        continue;
      }
      r.gt_position[i] = out.size();
      out.push_back({gt_.words[i].surface, gt_.punctuation[i], i});
    }
    // Material inserted before the first word takes over its capital.
    if (!out.empty() && out.front().origin != std::optional<std::size_t>{0}) {
      if (auto p = r.gt_position[0]) {
        auto& w = out[*p].word;
        bool pronoun_i = w == "I" || w.starts_with("I'");
        if (!pronoun_i && !w.empty() && w[0] >= 'A' && w[0] <= 'Z') w[0] = static_cast<char>(w[0] - 'A' + 'a');
      }
      auto& first = out.front().word;
      if (!first.empty() && first[0] >= 'a' && first[0] <= 'z') first[0] = static_cast<char>(first[0] - 'a' + 'A');
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
      if (k) r.text += ' ';
      r.text += out[k].word;
      r.text += out[k].punct;
      r.origins.push_back(out[k].origin);
    }
    return r;
  }

 private:
  const AlignedUtterance& gt_;
  std::vector<std::vector<std::size_t>> before_;
  std::vector<Insertion> insertions_;
  std::vector<bool> dropped_;
};

std::string join_items(const std::vector<Item>& items) {
  std::string s;
  for (const auto& it : items) {
    if (!s.empty()) s += ' ';
    s += it.word;
    s += it.punct;
  }
  return s;
}

std::vector<Item> words_with_comma(std::vector<std::string> words) {
  std::vector<Item> items;
  for (auto& w : words) items.push_back({std::move(w), "", std::nullopt});
  if (!items.empty()) items.back().punct = ",";
  return items;
}

std::size_t clause_end(const AlignedUtterance& u, std::size_t clause) {
  return clause + 1 < u.clause_starts.size() ? u.clause_starts[clause + 1] : u.words.size();
}

// Start of the noun phrase headed at i: back over adjacent determiners.
std::size_t phrase_start(const AlignedUtterance& u, std::size_t i) {
  std::size_t s = i;
  while (s > 0 && u.punctuation[s - 1].empty() && !u.is_clause_start(s) && u.words[s - 1].pos == PosTag::determiner) --s;
  return s;
}

class Engine {
 public:
  Engine(const AlignedUtterance& gt, std::uint64_t seed) : gt_(gt), draft_(gt), rng_(seed) {
    for (std::size_t i = 0; i < gt.words.size(); ++i) {
      if (gt.words[i].content_word) content_.push_back(i);
    }
  }

  bool has_content() const { return !content_.empty(); }
  std::mt19937_64& rng() { return rng_; }

  std::optional<std::size_t> pick_content(bool skip_circumlocuted) {
    std::vector<std::size_t> pool;
    std::vector<double> w;
    for (auto i : content_) {
      if (skip_circumlocuted && circumlocuted_.count(i)) continue;
      if (draft_.dropped(i)) continue;
      pool.push_back(i);
      w.push_back(anchor_weight(gt_.words[i]));
    }
    if (pool.empty()) return std::nullopt;
    std::discrete_distribution<std::size_t> d(w.begin(), w.end());
    return pool[d(rng_)];
  }

  void circumlocution(double drop_target) {
    auto target = pick_content(true);
    if (!target) {
      filled_pause();
      return;
    }
    circumlocuted_.insert(*target);
    const auto& table = CircumlocutionTable::bundled();
    auto paraphrase = table.lookup(gt_.words[*target].surface).value_or(kGenericCircumlocution);
    std::size_t start = phrase_start(gt_, *target);
    Insertion ins;
    if (start < *target) {
      ins.items.push_back({to_lower(gt_.words[start].surface), ",", std::nullopt});
    } else {
      ins.comma_before = true;
    }
    auto para = words_with_comma(split_spaces(paraphrase));
    ins.items.insert(ins.items.end(), para.begin(), para.end());
    bool drop = std::bernoulli_distribution(drop_target)(rng_);
    // A word already inside a repair has been produced; it cannot go missing.
    for (const auto& sp : spans_) drop = drop && (*target < sp.first_gt || *target > sp.last_gt);
    if (drop) draft_.drop(*target);
    record(EditKind::circumlocution, *target, start, ins, false, drop);
  }

  void filled_pause() {
    static constexpr std::array<std::string_view, 3> kFillers{"uh", "um", "you know"};
    auto filler = kFillers[std::uniform_int_distribution<std::size_t>(0, kFillers.size() - 1)(rng_)];
    Insertion ins;
    ins.comma_before = true;
    ins.items = words_with_comma(split_spaces(filler));
    std::optional<std::size_t> anchor;
    if (has_content() && std::bernoulli_distribution(0.8)(rng_)) anchor = pick_content(false);
    if (anchor) {
      record(EditKind::filled_pause, *anchor, phrase_start(gt_, *anchor), ins, false, false);
    } else {
      auto c = gt_.clause_starts[std::uniform_int_distribution<std::size_t>(0, gt_.clause_starts.size() - 1)(rng_)];
      record(EditKind::filled_pause, c, c, ins, false, false);
    }
  }

  void false_start() {
    std::size_t clause = std::uniform_int_distribution<std::size_t>(0, gt_.clause_starts.size() - 1)(rng_);
    std::size_t s = gt_.clause_starts[clause];
    std::size_t e = clause_end(gt_, clause);
    std::size_t k = std::min<std::size_t>(std::uniform_int_distribution<std::size_t>(1, 2)(rng_), e - s);
    std::vector<std::string> fragment;
    for (std::size_t i = s; i < s + k; ++i) fragment.push_back(gt_.words[i].surface);
    Insertion ins;
    ins.items = words_with_comma(std::move(fragment));
    // The restart runs at least through the clause's first content word
    // and must reach a word that is actually produced.
    std::size_t anchor = s;
    for (std::size_t i = s; i < e; ++i) {
      if (gt_.words[i].content_word && !draft_.dropped(i)) {
        anchor = i;
        break;
      }
    }
    std::size_t restart_end = std::max(s + k - 1, anchor);
    while (restart_end < e && draft_.dropped(restart_end)) ++restart_end;
    if (restart_end == e) {
      filled_pause();
      return;
    }
    auto id = record(EditKind::false_start, anchor, s, ins, true, false);
    spans_.push_back({id, s, restart_end});
  }

  void word_repetition() {
    auto anchor = pick_content(false);
    if (!anchor) {
      filled_pause();
      return;
    }
    std::size_t j = *anchor;
    if (j > 0 && gt_.punctuation[j - 1].empty() && !gt_.words[j - 1].content_word) j = j - 1;
    Insertion ins;
    ins.items.push_back({gt_.words[j].surface, ",", std::nullopt});
    auto id = record(EditKind::word_repetition, *anchor, j, ins, true, false);
    spans_.push_back({id, j, *anchor});
  }

  LexicalResult finish(std::string_view gt_text) {
    LexicalResult r;
    r.ground_truth = std::string(gt_text);
    r.edits = edits_;
    if (edits_.empty()) {
      r.dysfluent_text = r.ground_truth;
      for (std::size_t i = 0; i < gt_.words.size(); ++i) r.origins.emplace_back(i);
      return r;
    }
    auto rendered = draft_.render();
    r.dysfluent_text = rendered.text;
    r.origins = rendered.origins;
    for (const auto& sp : spans_) {
      std::size_t begin = rendered.insertions[sp.insertion].first;
      std::size_t end = rendered.insertions[sp.insertion].second;
      for (std::size_t i = sp.first_gt; i <= sp.last_gt; ++i) {
        if (auto p = rendered.gt_position[i]) end = std::max(end, *p);
      }
      r.repair_spans.push_back({begin, end + 1});
    }
    std::sort(r.repair_spans.begin(), r.repair_spans.end(),
              [](const RepairSpan& a, const RepairSpan& b) { return a.begin < b.begin || (a.begin == b.begin && a.end < b.end); });
    return r;
  }

 private:
  struct PendingSpan {
    std::size_t insertion;
    std::size_t first_gt;
    std::size_t last_gt;
  };

  std::size_t record(EditKind kind, std::size_t anchor, std::size_t before, const Insertion& ins, bool repair,
                     bool dropped) {
    LexicalEdit e;
    e.kind = kind;
    e.anchor_word_index = anchor;
    e.insert_before = before;
    e.inserted_text = join_items(ins.items);
    e.repair = repair;
    e.target_dropped = dropped;
    edits_.push_back(std::move(e));
    return draft_.insert(before, ins);
  }

  const AlignedUtterance& gt_;
  Draft draft_;
  std::mt19937_64 rng_;
  std::vector<std::size_t> content_;
  std::set<std::size_t> circumlocuted_;
  std::vector<LexicalEdit> edits_;
  std::vector<PendingSpan> spans_;
};

}  // namespace

LexicalResult inject_lexical(std::string_view gt, SeverityLevel severity, std::uint64_t seed) {
  if (severity == SeverityLevel::control) {
    throw InvalidArgument("lexical injection needs a dysfluent severity; use inject_naturalistic for controls");
  }
  return inject_lexical(gt, severity, seed, default_lexical_rates(severity));
}

LexicalResult inject_lexical(std::string_view gt, SeverityLevel severity, std::uint64_t seed,
                             const LexicalRates& rates) {
  if (severity == SeverityLevel::control) {
    throw InvalidArgument("lexical injection needs a dysfluent severity; use inject_naturalistic for controls");
  }
  auto u = to_word_aligned_ipa(gt);
  Engine engine(u, seed);
  auto& rng = engine.rng();
  std::size_t cap = 2 * u.clause_starts.size();
  std::size_t n = std::poisson_distribution<std::size_t>(rates.mean_edits)(rng);
  n = std::min(n, cap);
  std::discrete_distribution<int> kind(rates.kind_weights.begin(), rates.kind_weights.end());
  for (std::size_t e = 0; e < n; ++e) {
    auto k = static_cast<EditKind>(kind(rng));
    if (!engine.has_content()) k = EditKind::filled_pause;
    switch (k) {
      case EditKind::circumlocution: engine.circumlocution(rates.drop_target); break;
      case EditKind::false_start: engine.false_start(); break;
      case EditKind::filled_pause: engine.filled_pause(); break;
      case EditKind::word_repetition: engine.word_repetition(); break;
    }
  }
  return engine.finish(gt);
}

LexicalResult inject_naturalistic(std::string_view gt, std::uint64_t seed, const NaturalisticRates& rates) {
  auto u = to_word_aligned_ipa(gt);
  std::mt19937_64 rng(seed);
  Draft draft(u);
  std::vector<LexicalEdit> edits;
  struct Rep {
    std::size_t insertion;
    std::size_t word;
  };
  std::vector<Rep> reps;
  std::bernoulli_distribution pause(rates.filled_pause);
  std::bernoulli_distribution repeat(rates.repetition);
  for (std::size_t c = 0; c < u.clause_starts.size(); ++c) {
    bool paused = false;
    for (std::size_t i = u.clause_starts[c]; i < clause_end(u, c); ++i) {
      // Gaps are between words; word 0 has none before it.
      if (i > 0 && !paused && pause(rng)) {
        paused = true;
        Insertion ins;
        ins.comma_before = true;
        ins.items = {{std::bernoulli_distribution(0.5)(rng) ? "uh" : "um", ",", std::nullopt}};
        edits.push_back({EditKind::filled_pause, i, i, join_items(ins.items), false, false});
        draft.insert(i, ins);
      }
      if (repeat(rng)) {
        Insertion ins;
        ins.items = {{u.words[i].surface, ",", std::nullopt}};
        edits.push_back({EditKind::word_repetition, i, i, join_items(ins.items), true, false});
        reps.push_back({draft.insert(i, ins), i});
      }
    }
  }
  LexicalResult r;
  r.ground_truth = std::string(gt);
  r.edits = edits;
  if (edits.empty()) {
    r.dysfluent_text = r.ground_truth;
    for (std::size_t i = 0; i < u.words.size(); ++i) r.origins.emplace_back(i);
    return r;
  }
  auto rendered = draft.render();
  r.dysfluent_text = rendered.text;
  r.origins = rendered.origins;
  for (const auto& rep : reps) {
    r.repair_spans.push_back({rendered.insertions[rep.insertion].first, *rendered.gt_position[rep.word] + 1});
  }
  return r;
}

std::vector<RepairSpan> infer_repair_spans(const AlignedUtterance& u) {
  std::vector<RepairSpan> spans;
  const auto& w = u.words;
  auto same = [&](std::size_t a, std::size_t b) { return to_lower(w[a].surface) == to_lower(w[b].surface); };
  auto break_after = [&](std::size_t i) {
    const auto& p = u.punctuation[i];
    return p.find(',') != std::string::npos || p.find("…") != std::string::npos;
  };
  auto extend = [&](std::size_t restart, std::size_t end) {
    for (std::size_t i = restart; i < end; ++i) {
      if (w[i].content_word) return end;
    }
    for (std::size_t i = end; i < w.size(); ++i) {
      if (w[i].content_word) return i + 1;
      if (!u.punctuation[i].empty()) break;
    }
    return end;
  };
  for (std::size_t i = 0; i < w.size(); ++i) {
    bool found = false;
    for (std::size_t len : {std::size_t{2}, std::size_t{1}}) {
      if (i + 2 * len > w.size() || !break_after(i + len - 1)) continue;
      bool match = true;
      for (std::size_t k = 0; k < len; ++k) match = match && same(i + k, i + len + k);
      if (match) {
        spans.push_back({i, extend(i + len, i + 2 * len)});
        found = true;
        break;
      }
    }
    if (!found && i + 1 < w.size() && break_after(i)) {
      auto a = to_lower(w[i].surface);
      auto b = to_lower(w[i + 1].surface);
      if (a.size() < b.size() && b.starts_with(a)) spans.push_back({i, i + 2});
    }
  }
  return spans;
}

}  // namespace hass
