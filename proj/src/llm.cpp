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

#include "hass/llm.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <regex>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "hass/error.hpp"
#include "hass/phono.hpp"
#include "hass/seed.hpp"
#include "resources.hpp"

namespace hass {

std::string_view to_string(GenerationLayer l) {
  switch (l) {
    case GenerationLayer::lexical: return "lexical";
    case GenerationLayer::phonological: return "phonological";
    case GenerationLayer::prompt_text: return "prompt-text";
  }
  return "lexical";
}

void GenerationRequest::validate() const {
  if (layer == GenerationLayer::prompt_text) {
    if (count == 0) throw InvalidArgument("prompt-text request for zero sentences");
    return;
  }
  if (severity == SeverityLevel::control) throw InvalidArgument("generation requests need a dysfluent severity");
  if (ground_truth.empty()) throw InvalidArgument("generation request without ground truth");
  if (layer == GenerationLayer::phonological && !word_aligned_ipa) {
    throw InvalidArgument("phonological request without word-aligned IPA");
  }
}

namespace {

struct Template {
  std::string version;
  std::string body;
};

const Template& prompt_template() {
  static const Template t = [] {
    Template out;
    std::string_view text = resources::kPromptTemplate;
    auto sep = text.find("\n---\n");
    if (sep == std::string_view::npos) throw Error("prompt template has no header separator");
    auto header = text.substr(0, sep);
    auto v = header.find("version:");
    if (v == std::string_view::npos) throw Error("prompt template has no version");
    auto eol = header.find('\n', v);
    auto value = header.substr(v + 8, eol == std::string_view::npos ? std::string_view::npos : eol - v - 8);
    while (!value.empty() && value.front() == ' ') value.remove_prefix(1);
    out.version = std::string(value);
    out.body = std::string(text.substr(sep + 5));
    return out;
  }();
  return t;
}

void replace_all(std::string& s, std::string_view key, std::string_view value) {
  for (auto pos = s.find(key); pos != std::string::npos; pos = s.find(key, pos + value.size())) {
    s.replace(pos, key.size(), value);
  }
}

std::string_view severity_instruction(SeverityLevel s) {
  switch (s) {
    case SeverityLevel::mild:
      return "Mild: one or two brief word-finding slips; the sentence stays easy to follow.";
    case SeverityLevel::moderate:
      return "Moderate: several hesitations and reformulations; the listener has to wait for key words.";
    case SeverityLevel::severe:
      return "Severe: frequent breakdowns, abandoned starts and long searches; the message comes through in pieces.";
    case SeverityLevel::control:
      break;
  }
  return "Control: fluent speech with at most an ordinary hesitation.";
}

std::string layer_instructions(const GenerationRequest& req) {
  switch (req.layer) {
    case GenerationLayer::lexical:
      return "\nRewrite the sentence the way this speaker would say it, using circumlocutions, false starts, "
             "filled pauses (uh, um, you know) and word repetitions. Reply with the rewritten sentence only, as "
             "plain text without markup.\n";
    case GenerationLayer::phonological:
      return "\nWhat the speaker says at the word level:\n" + req.dysfluent_text +
             "\nIts IPA, one space-separated group per word:\n" + req.word_aligned_ipa.value_or("") +
             "\nRewrite this IPA with inline markers. [PAU] is a silent pause, written as its own group before a "
             "word or glued inside one. [SUB] follows a substituted segment (write the substitute), [DEL] follows "
             "the segment before a deleted one (leave the deleted segment out), [INS] follows an added segment, "
             "[PRO] follows a prolonged segment and [REP] follows a repeated onset. Use [REP] only inside "
             "reformulated stretches (false starts and repeated words). Keep exactly one group per word, keep "
             "the punctuation, and reply with the marked IPA only.\n";
    case GenerationLayer::prompt_text:
      return "\nWrite " + std::to_string(req.count) +
             " different sentences of 15 to 25 words, each in the style of a spoken answer to a picture "
             "description, daily routine or personal memory question. One sentence per line, no numbering.\n";
  }
  return {};
}

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

void add(std::vector<std::string>& v, std::string id) {
  if (std::find(v.begin(), v.end(), id) == v.end()) v.push_back(std::move(id));
}

std::size_t function_words(const AlignedUtterance& u) {
  return static_cast<std::size_t>(std::count_if(u.words.begin(), u.words.end(), [](const WordUnit& w) { return !w.content_word; }));
}

void check_text_layer(std::string_view raw, const GenerationRequest& req, std::vector<std::string>& v) {
  if (raw.find('[') != std::string_view::npos) add(v, "unknown-marker");
  AlignedUtterance resp, gt;
  try {
    resp = to_word_aligned_ipa(raw);
    gt = to_word_aligned_ipa(req.ground_truth);
  } catch (const Error&) {
    add(v, "parse");
    return;
  }
  if (function_words(resp) < function_words(gt)) add(v, "agrammatism");
  std::map<std::string, int> have;
  for (const auto& w : resp.words) have[to_lower(w.surface)] += 1;
  std::size_t content = 0, missing = 0;
  for (const auto& w : gt.words) {
    if (!w.content_word) continue;
    ++content;
    auto& n = have[to_lower(w.surface)];
    if (n > 0) {
      --n;
    } else {
      ++missing;
    }
  }
  // Circumlocuted targets may stay unsaid.
  if (missing > std::max<std::size_t>(1, content / 4)) add(v, "message");
}

void check_prompt_layer(std::string_view raw, const GenerationRequest& req, std::vector<std::string>& v) {
  if (raw.find('[') != std::string_view::npos) add(v, "unknown-marker");
  std::size_t lines = 0;
  std::size_t pos = 0;
  while (pos <= raw.size()) {
    auto eol = raw.find('\n', pos);
    if (eol == std::string_view::npos) eol = raw.size();
    auto line = trim(raw.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty()) continue;
    ++lines;
    try {
      to_word_aligned_ipa(line);
    } catch (const Error&) {
      add(v, "parse");
    }
  }
  if (lines < req.count) add(v, "count");
}

void check_ipa_layer(std::string_view raw, const GenerationRequest& req, const SeverityProfile& profile,
                     std::vector<std::string>& v) {
  static const std::regex tag(R"(\[([^\]\[]*)\])");
  for (auto it = std::cregex_iterator(raw.data(), raw.data() + raw.size(), tag); it != std::cregex_iterator(); ++it) {
    if (!parse_marker_kind((*it)[1].str())) add(v, "unknown-marker");
  }
  if (!req.word_aligned_ipa) add(v, "missing-ipa");
  if (!v.empty()) return;
  MarkedIpaUtterance self;
  try {
    self = parse_marked_ipa(raw);
  } catch (const Error&) {
    add(v, "parse");
    return;
  }
  MarkedIpaUtterance target;
  try {
    target = parse_marked_ipa(*req.word_aligned_ipa);
  } catch (const Error&) {
    add(v, "missing-ipa");
    return;
  }
  if (self.words.size() < target.words.size()) add(v, "agrammatism");
  try {
    parse_marked_ipa(raw, target.words);
  } catch (const Error&) {
    add(v, "alignment");
  }
  auto c = count_markers(self);
  double total_target = 0;
  for (auto m : kAllMarkers) total_target += profile.target(m);
  bool dense = c.total() > 3 * total_target;
  for (auto m : kAllMarkers) dense = dense || c[m] > 3 * std::max(profile.target(m), 1.0);
  if (dense) add(v, "density");
  for (auto n : markers_per_word(self)) {
    if (n > profile.cooccurrence_cap) add(v, "cap");
  }
  for (const auto& t : self.tokens) {
    if (t.kind != TokenKind::marker || *t.marker != MarkerKind::REP) continue;
    bool inside = std::any_of(req.repair_spans.begin(), req.repair_spans.end(),
                              [&](const RepairSpan& s) { return s.contains(t.word_index); });
    if (!inside) add(v, "repair-gating");
  }
}

}  // namespace

std::string_view prompt_template_version() { return prompt_template().version; }

std::string build_prompt(const GenerationRequest& req) {
  req.validate();
  std::string out = prompt_template().body;
  replace_all(out, "{{severity}}", req.layer == GenerationLayer::prompt_text ? "not applicable" : to_string(req.severity));
  replace_all(out, "{{severity_instruction}}",
              req.layer == GenerationLayer::prompt_text ? "Write fluent, natural sentences." : severity_instruction(req.severity));
  replace_all(out, "{{ground_truth}}", req.layer == GenerationLayer::prompt_text ? "(none; you are writing them)" : req.ground_truth);
  replace_all(out, "{{layer_instructions}}", layer_instructions(req));
  char variation[24];
  std::snprintf(variation, sizeof variation, "%016llx", static_cast<unsigned long long>(req.seed));
  replace_all(out, "{{variation}}", variation);
  return "[template v" + prompt_template().version + "]\n" + out;
}

BackendResponse validate_response(std::string_view raw, const GenerationRequest& req, const SeverityProfile* profile) {
  BackendResponse r;
  r.raw_text = std::string(raw);
  if (trim(raw).empty()) {
    r.violations.push_back("parse");
    return r;
  }
  switch (req.layer) {
    case GenerationLayer::lexical:
      check_text_layer(raw, req, r.violations);
      break;
    case GenerationLayer::prompt_text:
      check_prompt_layer(raw, req, r.violations);
      break;
    case GenerationLayer::phonological: {
      const SeverityProfile* p = profile;
      if (!p && req.severity != SeverityLevel::control) p = &default_profile(req.severity);
      if (!p) {
        r.violations.push_back("density");
        break;
      }
      check_ipa_layer(raw, req, *p, r.violations);
      break;
    }
  }
  r.validated = r.violations.empty();
  return r;
}

std::optional<HttpChatConfig> HttpChatConfig::from_env() {
  const char* endpoint = std::getenv("HASS_LLM_ENDPOINT");
  if (!endpoint || !*endpoint) return std::nullopt;
  HttpChatConfig c;
  c.endpoint = endpoint;
  if (const char* key = std::getenv("HASS_LLM_API_KEY")) c.api_key = key;
  if (const char* model = std::getenv("HASS_LLM_MODEL"); model && *model) c.model = model;
  return c;
}

HttpChatClient::HttpChatClient(HttpChatConfig config) : config_(std::move(config)) {
  auto scheme = config_.endpoint.find("://");
  if (scheme == std::string::npos) throw InvalidArgument("endpoint '" + config_.endpoint + "' has no scheme");
  auto slash = config_.endpoint.find('/', scheme + 3);
  base_ = config_.endpoint.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : config_.endpoint.substr(slash);
}

std::string HttpChatClient::complete(const std::string& prompt) {
  httplib::Client cli(base_);
  cli.set_connection_timeout(config_.timeout_seconds, 0);
  cli.set_read_timeout(config_.timeout_seconds, 0);
  if (!config_.api_key.empty()) cli.set_bearer_token_auth(config_.api_key);
  nlohmann::json body{{"model", config_.model},
                      {"temperature", config_.temperature},
                      {"messages", {{{"role", "user"}, {"content", prompt}}}}};
  auto res = cli.Post(path_, body.dump(), "application/json");
  if (!res) throw Error("request to " + base_ + path_ + " failed: " + httplib::to_string(res.error()));
  if (res->status != 200) throw Error("request to " + base_ + path_ + " returned HTTP " + std::to_string(res->status));
  try {
    auto j = nlohmann::json::parse(res->body);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("unexpected reply shape: ") + e.what());
  }
}

std::string request_hash(std::string_view prompt) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(prompt)));
  return buf;
}

ReplayClient ReplayClient::from_jsonl(std::istream& in) {
  ReplayClient c;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      c.replies_[j.at("request-hash").get<std::string>()] = j.at("response-text").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument("replay line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return c;
}

ReplayClient ReplayClient::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open replay file " + path);
  return from_jsonl(in);
}

void ReplayClient::add(std::string_view prompt, std::string response) { replies_[request_hash(prompt)] = std::move(response); }

std::string ReplayClient::complete(const std::string& prompt) {
  auto it = replies_.find(request_hash(prompt));
  if (it == replies_.end()) throw Error("no replay entry for request " + request_hash(prompt));
  return it->second;
}

BoundedClient::BoundedClient(std::shared_ptr<TextClient> inner, std::ptrdiff_t limit)
    : inner_(std::move(inner)), slots_(std::clamp<std::ptrdiff_t>(limit, 1, kMaxLimit)) {
  if (!inner_) throw InvalidArgument("bounded client needs an inner client");
}

std::string BoundedClient::complete(const std::string& prompt) {
  slots_.acquire();
  struct Release {
    std::counting_semaphore<kMaxLimit>& s;
    ~Release() { s.release(); }
  } release{slots_};
  return inner_->complete(prompt);
}

AuditingClient::AuditingClient(std::shared_ptr<TextClient> inner, std::string path)
    : inner_(std::move(inner)), path_(std::move(path)) {
  if (!inner_) throw InvalidArgument("auditing client needs an inner client");
}

std::string AuditingClient::complete(const std::string& prompt) {
  std::uint64_t id;
  {
    std::lock_guard lock(mutex_);
    id = next_id_++;
  }
  nlohmann::ordered_json j;
  j["request-id"] = id;
  j["request-hash"] = request_hash(prompt);
  j["prompt"] = prompt;
  auto write = [&] {
    std::lock_guard lock(mutex_);
    std::ofstream out(path_, std::ios::app);
    out << j.dump() << '\n';
  };
  try {
    auto reply = inner_->complete(prompt);
    j["response"] = reply;
    write();
    return reply;
  } catch (const std::exception& e) {
    j["error"] = e.what();
    write();
    throw;
  }
}

std::shared_ptr<TextClient> client_from_env() {
  auto config = HttpChatConfig::from_env();
  if (!config) return nullptr;
  std::shared_ptr<TextClient> c = std::make_shared<BoundedClient>(std::make_shared<HttpChatClient>(*config), 4);
  if (const char* log = std::getenv("HASS_AUDIT_LOG"); log && *log) c = std::make_shared<AuditingClient>(c, log);
  return c;
}

GenerationOutcome generate_with_fallback(const GenerationRequest& req, TextClient* client, int retries,
                                         const std::function<std::string()>& fallback, const SeverityProfile* profile) {
  if (retries < 0) throw InvalidArgument("retries must be non-negative");
  GenerationOutcome out;
  if (client) {
    auto prompt = build_prompt(req);
    for (int attempt = 0; attempt <= retries; ++attempt) {
      ++out.attempts;
      std::string reply;
      try {
        reply = trim(client->complete(prompt));
      } catch (const std::exception&) {
        out.last_violations = {"transport"};
        continue;
      }
      auto checked = validate_response(reply, req, profile);
      if (checked.validated) {
        out.text = std::move(reply);
        return out;
      }
      out.last_violations = checked.violations;
    }
  }
  out.text = fallback();
  out.rule_based = true;
  return out;
}

LexicalResult generate_lexical(std::string_view gt, SeverityLevel severity, std::uint64_t seed, TextClient* client,
                               int retries) {
  GenerationRequest req;
  req.layer = GenerationLayer::lexical;
  req.ground_truth = std::string(gt);
  req.severity = severity;
  req.seed = seed;
  std::optional<LexicalResult> rule;
  auto outcome = generate_with_fallback(req, client, retries, [&] {
    rule = inject_lexical(gt, severity, seed);
    return rule->dysfluent_text;
  });
  if (outcome.rule_based) return *rule;
  LexicalResult r;
  r.dysfluent_text = outcome.text;
  r.ground_truth = std::string(gt);
  r.repair_spans = infer_repair_spans(to_word_aligned_ipa(outcome.text));
  r.rule_based = false;
  return r;
}

MarkedIpaUtterance generate_phonological(const AlignedUtterance& u, const LexicalResult& lex,
                                         const SeverityProfile& profile, std::uint64_t seed, TextClient* client,
                                         int retries, bool* rule_based) {
  GenerationRequest req;
  req.layer = GenerationLayer::phonological;
  req.ground_truth = lex.ground_truth.empty() ? surface_text(u) : lex.ground_truth;
  req.severity = profile.severity;
  req.dysfluent_text = lex.dysfluent_text;
  req.word_aligned_ipa = serialize(to_marked_ipa(u));
  req.repair_spans = lex.repair_spans;
  req.seed = seed;
  std::optional<MarkedIpaUtterance> rule;
  auto outcome = generate_with_fallback(
      req, client, retries,
      [&] {
        rule = inject_phonological(u, lex, profile, seed);
        return serialize(*rule);
      },
      &profile);
  if (rule_based) *rule_based = outcome.rule_based;
  if (outcome.rule_based) return *rule;
  auto m = parse_marked_ipa(outcome.text, u.words);
  m.severity = profile.severity;
  return m;
}

}  // namespace hass
