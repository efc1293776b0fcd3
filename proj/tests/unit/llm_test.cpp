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

#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "hass/error.hpp"
#include "hass/llm.hpp"
#include "hass/phono.hpp"
#include "support/reference_rows.hpp"

namespace hass {
namespace {

using testing::kGroundTruth;

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

GenerationRequest mild_phono_request() {
  GenerationRequest req;
  req.layer = GenerationLayer::phonological;
  req.ground_truth = std::string(kGroundTruth);
  req.severity = SeverityLevel::mild;
  req.dysfluent_text = "unused here";
  // Undo the two edits to get the target the row was made from.
  std::string target(testing::kMildRow);
  target = replace_all(target, "[DEL]", "t");
  target = replace_all(target, "m[SUB]", "n");
  req.word_aligned_ipa = canonicalize(target);
  return req;
}

GenerationRequest lexical_request() {
  GenerationRequest req;
  req.layer = GenerationLayer::lexical;
  req.ground_truth = std::string(kGroundTruth);
  req.severity = SeverityLevel::moderate;
  req.seed = 7;
  return req;
}

bool has(const BackendResponse& r, std::string_view id) {
  return std::find(r.violations.begin(), r.violations.end(), id) != r.violations.end();
}

TEST(Validate, MildRowPasses) {
  auto r = validate_response(testing::kMildRow, mild_phono_request());
  EXPECT_TRUE(r.validated) << ::testing::PrintToString(r.violations);
}

TEST(Validate, UnknownTagIsRejected) {
  auto req = mild_phono_request();
  auto raw = replace_all(std::string(testing::kMildRow), "[DEL]", "[BLK]");
  auto r = validate_response(raw, req);
  EXPECT_FALSE(r.validated);
  EXPECT_TRUE(has(r, "unknown-marker"));
}

TEST(Validate, ImplausibleDensityIsRejected) {
  GenerationRequest req;
  req.layer = GenerationLayer::phonological;
  req.ground_truth = "stop";
  req.severity = SeverityLevel::mild;
  req.word_aligned_ipa = "stˈɑːp";
  std::string raw = "stˈɑː";
  for (int i = 0; i < 100; ++i) raw += "[DEL]";
  auto r = validate_response(raw, req);
  EXPECT_TRUE(has(r, "density"));
  EXPECT_TRUE(has(r, "cap"));
}

TEST(Validate, MisalignedIpa) {
  auto req = mild_phono_request();
  auto r = validate_response("ðə hˈaʊs", req);
  EXPECT_TRUE(has(r, "alignment"));
  EXPECT_TRUE(has(r, "agrammatism"));
  EXPECT_TRUE(has(validate_response("ðə [PAU", req), "parse"));
}

TEST(Validate, RepairGating) {
  GenerationRequest req;
  req.layer = GenerationLayer::phonological;
  req.ground_truth = "the cat sat";
  req.severity = SeverityLevel::mild;
  req.word_aligned_ipa = "ðə kˈæt sˈæt";
  EXPECT_TRUE(has(validate_response("ðə k[REP]ˈæt sˈæt", req), "repair-gating"));
  req.repair_spans = {{1, 2}};
  EXPECT_TRUE(validate_response("ðə k[REP]ˈæt sˈæt", req).validated);
}

TEST(Validate, LexicalLayer) {
  auto req = lexical_request();
  EXPECT_TRUE(validate_response("The house would go, uh, completely dark, save for the single amber glow of a, "
                                "the place where you burn the wood, a hearth fire.",
                                req)
                  .validated);
  EXPECT_TRUE(has(validate_response("House go completely dark, save single amber glow hearth fire.", req), "agrammatism"));
  EXPECT_TRUE(has(validate_response("The house would go, um, dark, save for the single glow of a thing.", req), "message"));
  EXPECT_TRUE(has(validate_response("The house [PAU] would go completely dark, save for the single amber glow of a hearth fire.", req),
                  "unknown-marker"));
  EXPECT_TRUE(has(validate_response("   ", req), "parse"));
}

TEST(Validate, PromptTextLayer) {
  GenerationRequest req;
  req.layer = GenerationLayer::prompt_text;
  req.count = 2;
  EXPECT_TRUE(validate_response("The dog ran home.\nWe ate bread on the porch.\n", req).validated);
  EXPECT_TRUE(has(validate_response("The dog ran home.", req), "count"));
}

TEST(Prompt, CarriesRulesAndIsDeterministic) {
  auto req = lexical_request();
  auto p = build_prompt(req);
  EXPECT_EQ(p, build_prompt(req));
  EXPECT_NE(p.find("Lexical Bias"), std::string::npos);
  EXPECT_NE(p.find("Syntactic Adherence"), std::string::npos);
  EXPECT_NE(p.find("Phenotype Exclusion"), std::string::npos);
  EXPECT_NE(p.find(kGroundTruth), std::string::npos);
  EXPECT_NE(p.find("moderate"), std::string::npos);
  EXPECT_EQ(p.find("{{"), std::string::npos);
  EXPECT_NE(p.find("v" + std::string(prompt_template_version())), std::string::npos);
  req.seed = 8;
  EXPECT_NE(p, build_prompt(req));
}

TEST(Prompt, RequestPreconditions) {
  GenerationRequest req;
  req.layer = GenerationLayer::phonological;
  req.ground_truth = "the cat";
  req.severity = SeverityLevel::mild;
  EXPECT_THROW(build_prompt(req), InvalidArgument);
  req.layer = GenerationLayer::lexical;
  req.severity = SeverityLevel::control;
  EXPECT_THROW(build_prompt(req), InvalidArgument);
}

class ScriptedClient : public TextClient {
 public:
  explicit ScriptedClient(std::string reply) : reply_(std::move(reply)) {}
  std::string complete(const std::string&) override {
    ++calls;
    return reply_;
  }
  int calls = 0;

 private:
  std::string reply_;
};

class FailingClient : public TextClient {
 public:
  std::string complete(const std::string&) override { throw Error("boom"); }
};

TEST(Fallback, InvalidRepliesFallBackToRules) {
  ScriptedClient client("[BLK] nonsense");
  auto out = generate_with_fallback(lexical_request(), &client, 2, [] { return std::string("rule text"); });
  EXPECT_EQ(client.calls, 3);
  EXPECT_EQ(out.attempts, 3);
  EXPECT_TRUE(out.rule_based);
  EXPECT_EQ(out.text, "rule text");
  EXPECT_FALSE(out.last_violations.empty());
  EXPECT_THROW(generate_with_fallback(lexical_request(), &client, -1, [] { return std::string(); }), InvalidArgument);
}

TEST(Fallback, LexicalMatchesRuleEngine) {
  ScriptedClient client("nope [X]");
  auto r = generate_lexical(kGroundTruth, SeverityLevel::severe, 11, &client, 1);
  auto rule = inject_lexical(kGroundTruth, SeverityLevel::severe, 11);
  EXPECT_TRUE(r.rule_based);
  EXPECT_EQ(r.dysfluent_text, rule.dysfluent_text);
  EXPECT_EQ(r.edits, rule.edits);
  auto offline = generate_lexical(kGroundTruth, SeverityLevel::severe, 11, nullptr, 3);
  EXPECT_EQ(offline.dysfluent_text, rule.dysfluent_text);
}

TEST(Fallback, TransportFailureIsRecorded) {
  FailingClient client;
  auto out = generate_with_fallback(lexical_request(), &client, 1, [] { return std::string("x"); });
  EXPECT_TRUE(out.rule_based);
  EXPECT_EQ(out.last_violations, std::vector<std::string>{"transport"});
}

TEST(Replay, ValidatedReplyIsUsed) {
  auto req = lexical_request();
  req.seed = 5;
  std::string reply = "The, the house would go completely dark, save for the single amber glow of a hearth fire.";
  ReplayClient replay;
  replay.add(build_prompt(req), reply);
  auto r = generate_lexical(kGroundTruth, SeverityLevel::moderate, 5, &replay, 0);
  EXPECT_FALSE(r.rule_based);
  EXPECT_EQ(r.dysfluent_text, reply);
  EXPECT_EQ(r.repair_spans, (std::vector<RepairSpan>{{0, 3}}));
  EXPECT_TRUE(r.edits.empty());
}

TEST(Replay, JsonlFixture) {
  std::ostringstream lines;
  lines << nlohmann::json{{"request-hash", request_hash("a")}, {"response-text", "first"}}.dump() << "\n\n"
        << nlohmann::json{{"request-hash", request_hash("b")}, {"response-text", "second"}}.dump() << "\n";
  std::istringstream in(lines.str());
  auto replay = ReplayClient::from_jsonl(in);
  EXPECT_EQ(replay.size(), 2u);
  EXPECT_EQ(replay.complete("b"), "second");
  EXPECT_THROW(replay.complete("c"), Error);
  std::istringstream bad("{\"request-hash\": 1}\n");
  EXPECT_THROW(ReplayClient::from_jsonl(bad), InvalidArgument);
  EXPECT_EQ(request_hash("a").size(), 16u);
  EXPECT_NE(request_hash("a"), request_hash("b"));
}

TEST(Replay, PhonologicalReplyIsParsedAgainstTarget) {
  auto u = to_word_aligned_ipa("the cat sat");
  LexicalResult lex;
  lex.dysfluent_text = "the cat sat";
  lex.ground_truth = "the cat sat";
  const auto& profile = default_profile(SeverityLevel::mild);
  GenerationRequest req;
  req.layer = GenerationLayer::phonological;
  req.ground_truth = lex.ground_truth;
  req.severity = SeverityLevel::mild;
  req.dysfluent_text = lex.dysfluent_text;
  req.word_aligned_ipa = serialize(to_marked_ipa(u));
  req.seed = 3;
  ReplayClient replay;
  replay.add(build_prompt(req), "ðə kˈæ[DEL] [PAU] sˈæt");
  bool rule_based = true;
  auto m = generate_phonological(u, lex, profile, 3, &replay, 0, &rule_based);
  EXPECT_FALSE(rule_based);
  EXPECT_EQ(serialize(m), "ðə kˈæ[DEL] [PAU] sˈæt");
  EXPECT_EQ(m.alignment, Alignment::target);
  EXPECT_EQ(m.severity, SeverityLevel::mild);
}

TEST(Http, ChatEndpointRoundTrip) {
  httplib::Server server;
  std::string seen_auth, seen_prompt;
  server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    seen_auth = req.get_header_value("Authorization");
    auto body = nlohmann::json::parse(req.body);
    seen_prompt = body["messages"][0]["content"];
    nlohmann::json reply{{"choices", {{{"message", {{"role", "assistant"}, {"content", "hello there"}}}}}}};
    res.set_content(reply.dump(), "application/json");
  });
  server.Post("/broken", [](const httplib::Request&, httplib::Response& res) { res.status = 500; });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  HttpChatConfig config;
  config.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
  config.api_key = "k123";
  config.timeout_seconds = 5;
  HttpChatClient client(config);
  EXPECT_EQ(client.complete("say hi"), "hello there");
  EXPECT_EQ(seen_auth, "Bearer k123");
  EXPECT_EQ(seen_prompt, "say hi");

  config.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/broken";
  HttpChatClient broken(config);
  EXPECT_THROW(broken.complete("x"), Error);

  server.stop();
  t.join();
}

TEST(Http, UnreachableEndpointFallsBack) {
  HttpChatConfig config;
  config.endpoint = "http://127.0.0.1:1/v1/chat/completions";
  config.timeout_seconds = 2;
  HttpChatClient client(config);
  EXPECT_THROW(client.complete("x"), Error);
  auto r = generate_lexical(kGroundTruth, SeverityLevel::mild, 4, &client, 1);
  EXPECT_TRUE(r.rule_based);
  EXPECT_THROW(HttpChatClient(HttpChatConfig{}), InvalidArgument);
}

class SlowClient : public TextClient {
 public:
  std::string complete(const std::string&) override {
    int now = ++active;
    int prev = peak.load();
    while (now > prev && !peak.compare_exchange_weak(prev, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(15));
    --active;
    return "ok";
  }
  std::atomic<int> active{0};
  std::atomic<int> peak{0};
};

TEST(Clients, BoundedConcurrency) {
  auto slow = std::make_shared<SlowClient>();
  BoundedClient bounded(slow, 3);
  std::vector<std::thread> threads;
  for (int i = 0; i < 12; ++i) threads.emplace_back([&] { bounded.complete("p"); });
  for (auto& t : threads) t.join();
  EXPECT_LE(slow->peak.load(), 3);
  EXPECT_GE(slow->peak.load(), 1);
}

TEST(Clients, AuditLogRecordsEveryCall) {
  auto path = std::filesystem::temp_directory_path() / "hass_audit_test.jsonl";
  std::filesystem::remove(path);
  AuditingClient ok(std::make_shared<ScriptedClient>("fine"), path.string());
  AuditingClient bad(std::make_shared<FailingClient>(), path.string());
  EXPECT_EQ(ok.complete("one"), "fine");
  EXPECT_THROW(bad.complete("two"), Error);
  std::ifstream in(path);
  std::vector<nlohmann::json> rows;
  for (std::string line; std::getline(in, line);) rows.push_back(nlohmann::json::parse(line));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0]["prompt"], "one");
  EXPECT_EQ(rows[0]["response"], "fine");
  EXPECT_EQ(rows[0]["request-hash"], request_hash("one"));
  EXPECT_EQ(rows[1]["error"], "boom");
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace hass
