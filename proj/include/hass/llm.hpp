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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hass/lexical.hpp"
#include "hass/marker.hpp"
#include "hass/profile.hpp"

namespace hass {

enum class GenerationLayer : std::uint8_t { lexical, phonological, prompt_text };

std::string_view to_string(GenerationLayer l);

struct GenerationRequest {
  GenerationLayer layer = GenerationLayer::lexical;
  std::string ground_truth;
  SeverityLevel severity = SeverityLevel::mild;
  // Phonological layer: the word-level dysfluent text and its plain IPA
  // (one group per word), which the response must stay aligned with.
  std::string dysfluent_text;
  std::optional<std::string> word_aligned_ipa;
  std::vector<RepairSpan> repair_spans;
  std::uint64_t seed = 0;
  // prompt_text layer: how many sentences to ask for.
  std::size_t count = 1;

  // Throws InvalidArgument, e.g. a phonological request without IPA.
  void validate() const;
};

std::string_view prompt_template_version();

/// Pure function of the request.
std::string build_prompt(const GenerationRequest& req);

struct BackendResponse {
  std::string raw_text;
  bool validated = false;
  // parse, unknown-marker, alignment, missing-ipa, agrammatism, message,
  // density, cap, repair-gating
  std::vector<std::string> violations;
};

/// Checks a service reply against the request. `profile` sets the density
/// and cap limits for phonological replies (default: the bundled profile).
BackendResponse validate_response(std::string_view raw, const GenerationRequest& req,
                                  const SeverityProfile* profile = nullptr);

// Text-in, text-out service. complete() throws Error on transport failure
// and must be safe to call from several threads.
class TextClient {
 public:
  virtual ~TextClient() = default;
  virtual std::string complete(const std::string& prompt) = 0;
};

struct HttpChatConfig {
  std::string endpoint;  // scheme://host[:port]/path
  std::string api_key;
  std::string model = "default";
  double temperature = 0.7;
  int timeout_seconds = 60;

  // HASS_LLM_ENDPOINT, HASS_LLM_API_KEY, HASS_LLM_MODEL; empty without an endpoint.
  static std::optional<HttpChatConfig> from_env();
};

/// Chat-completion JSON over HTTP(S): posts {model, messages, temperature}
/// and reads choices[0].message.content.
class HttpChatClient : public TextClient {
 public:
  explicit HttpChatClient(HttpChatConfig config);
  std::string complete(const std::string& prompt) override;

 private:
  HttpChatConfig config_;
  std::string base_;
  std::string path_;
};

std::string request_hash(std::string_view prompt);

/// Canned replies from JSONL lines {"request-hash": ..., "response-text": ...}.
class ReplayClient : public TextClient {
 public:
  static ReplayClient from_jsonl(std::istream& in);
  static ReplayClient from_file(const std::string& path);
  void add(std::string_view prompt, std::string response);
  std::string complete(const std::string& prompt) override;
  std::size_t size() const { return replies_.size(); }

 private:
  std::unordered_map<std::string, std::string> replies_;
};

/// At most `limit` requests in flight through `inner`.
class BoundedClient : public TextClient {
 public:
  static constexpr std::ptrdiff_t kMaxLimit = 64;
  BoundedClient(std::shared_ptr<TextClient> inner, std::ptrdiff_t limit = 4);
  std::string complete(const std::string& prompt) override;

 private:
  std::shared_ptr<TextClient> inner_;
  std::counting_semaphore<kMaxLimit> slots_;
};

/// Appends {request-id, request-hash, prompt, response|error} lines to a JSONL file.
class AuditingClient : public TextClient {
 public:
  AuditingClient(std::shared_ptr<TextClient> inner, std::string path);
  std::string complete(const std::string& prompt) override;

 private:
  std::shared_ptr<TextClient> inner_;
  std::string path_;
  std::mutex mutex_;
  std::uint64_t next_id_ = 0;
};

/// HTTP client from the environment, bounded to 4 in flight and audited
/// when HASS_AUDIT_LOG is set. Null when no endpoint is configured.
std::shared_ptr<TextClient> client_from_env();

struct GenerationOutcome {
  std::string text;
  bool rule_based = false;
  int attempts = 0;
  std::vector<std::string> last_violations;
};

/// First validated reply within 1 + retries attempts, else fallback().
/// Transport errors count as failed attempts.
GenerationOutcome generate_with_fallback(const GenerationRequest& req, TextClient* client, int retries,
                                         const std::function<std::string()>& fallback,
                                         const SeverityProfile* profile = nullptr);

/// Word-level layer through a service, with the rule engine behind it.
LexicalResult generate_lexical(std::string_view gt, SeverityLevel severity, std::uint64_t seed, TextClient* client,
                               int retries);

/// Phoneme-level layer through a service, with the rule engine behind it.
/// `rule_based` reports which one produced the result.
MarkedIpaUtterance generate_phonological(const AlignedUtterance& u, const LexicalResult& lex,
                                         const SeverityProfile& profile, std::uint64_t seed, TextClient* client,
                                         int retries, bool* rule_based = nullptr);

}  // namespace hass
