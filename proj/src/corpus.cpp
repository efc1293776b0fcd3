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

#include "hass/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <openssl/evp.h>
#include <toml.hpp>

#include "hass/error.hpp"
#include "hass/phono.hpp"
#include "hass/prompts.hpp"
#include "hass/seed.hpp"

namespace hass {

std::string_view toolkit_version() { return HASS_VERSION; }

ClassCounts reference_class_counts() {
  return {{SeverityLevel::control, 2007},
          {SeverityLevel::mild, 871},
          {SeverityLevel::moderate, 1101},
          {SeverityLevel::severe, 794}};
}

std::vector<std::string> default_speaker_pool(std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "spk-%03zu", i);
    out.emplace_back(buf);
  }
  return out;
}

void CorpusSpec::validate() const {
  if (prompt_count == 0) throw SpecError("prompt-count must be at least 1");
  if (speaker_pool.empty()) throw SpecError("speaker pool is empty");
  if (std::set<std::string>(speaker_pool.begin(), speaker_pool.end()).size() != speaker_pool.size()) {
    throw SpecError("speaker pool has duplicate ids");
  }
  if (llm_retries < 0) throw SpecError("retries must be non-negative");
  for (const auto& [s, n] : class_counts) {
    if (s == SeverityLevel::control || n == 0) continue;
    auto it = profiles.find(s);
    if (it == profiles.end()) throw SpecError("no profile for requested severity " + std::string(to_string(s)));
    try {
      it->second.validate();
    } catch (const InvalidArgument& e) {
      throw SpecError(std::string(to_string(s)) + " profile: " + e.what());
    }
  }
}

nlohmann::ordered_json to_json(const CorpusSpec& spec) {
  nlohmann::ordered_json j;
  j["prompt-count"] = spec.prompt_count;
  j["speakers"] = spec.speaker_pool;
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  for (auto s : kAllSeverities) {
    auto it = spec.class_counts.find(s);
    counts[std::string(to_string(s))] = it == spec.class_counts.end() ? 0 : it->second;
  }
  j["class-counts"] = counts;
  j["seed"] = spec.seed;
  j["retries"] = spec.llm_retries;
  j["profiles"] = to_json(spec.profiles);
  return j;
}

namespace {

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T v{};
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) {
    throw SpecError(std::string(what) + ": '" + std::string(text) + "' is not a valid number");
  }
  return v;
}

ProfileSet load_profiles_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open profiles file " + path.string());
  try {
    return profiles_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw SpecError("profiles file " + path.string() + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw SpecError("profiles file " + path.string() + ": " + e.what());
  }
}

nlohmann::json toml_to_json(const toml::node& node) {
  if (auto* t = node.as_table()) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : *t) j[std::string(k.str())] = toml_to_json(v);
    return j;
  }
  if (auto* a = node.as_array()) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& v : *a) j.push_back(toml_to_json(v));
    return j;
  }
  if (auto v = node.value<std::string>(); v && node.is_string()) return *v;
  if (node.is_integer()) return node.value<std::int64_t>().value();
  if (node.is_floating_point()) return node.value<double>().value();
  if (node.is_boolean()) return node.value<bool>().value();
  throw SpecError("unsupported TOML value (dates and times are not used in corpus specs)");
}

}  // namespace

CorpusSpec corpus_spec_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw SpecError("corpus spec must be an object");
  static const std::set<std::string> known{"prompt-count", "speakers", "speaker-count", "class-counts",
                                           "seed", "retries", "profiles"};
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) throw SpecError("unknown corpus spec key '" + k + "'");
  }
  CorpusSpec spec;
  try {
    if (j.contains("prompt-count")) {
      auto n = j.at("prompt-count").get<std::int64_t>();
      if (n < 1) throw SpecError("prompt-count must be at least 1");
      spec.prompt_count = static_cast<std::size_t>(n);
    }
    if (j.contains("speakers") && j.contains("speaker-count")) throw SpecError("give speakers or speaker-count, not both");
    if (j.contains("speakers")) spec.speaker_pool = j.at("speakers").get<std::vector<std::string>>();
    if (j.contains("speaker-count")) {
      auto n = j.at("speaker-count").get<std::int64_t>();
      if (n < 1) throw SpecError("speaker-count must be at least 1");
      spec.speaker_pool = default_speaker_pool(static_cast<std::size_t>(n));
    }
    if (j.contains("class-counts")) {
      spec.class_counts.clear();
      for (const auto& [k, v] : j.at("class-counts").items()) {
        SeverityLevel s;
        try {
          s = parse_severity(k);
        } catch (const InvalidArgument& e) {
          throw SpecError(std::string("class-counts: ") + e.what());
        }
        auto n = v.get<std::int64_t>();
        if (n < 0) throw SpecError("class-counts." + k + " is negative");
        spec.class_counts[s] = static_cast<std::size_t>(n);
      }
    }
    if (j.contains("seed")) {
      const auto& s = j.at("seed");
      if (s.is_string()) {
        spec.seed = parse_number<std::uint64_t>(s.get<std::string>(), "seed");
      } else if (s.is_number_unsigned() || (s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
        spec.seed = s.get<std::uint64_t>();
      } else {
        throw SpecError("seed must be a non-negative integer");
      }
    }
    if (j.contains("retries")) spec.llm_retries = j.at("retries").get<int>();
    if (j.contains("profiles")) {
      const auto& p = j.at("profiles");
      if (p.is_string()) {
        std::filesystem::path path = p.get<std::string>();
        if (path.is_relative()) path = base_dir / path;
        spec.profiles = load_profiles_file(path);
      } else {
        spec.profiles = profiles_from_json(p);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("corpus spec: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw SpecError(std::string("corpus spec: ") + e.what());
  }
  return spec;
}

CorpusSpec corpus_spec_from_toml(std::string_view text, const std::filesystem::path& base_dir) {
  try {
    auto table = toml::parse(text);
    return corpus_spec_from_json(toml_to_json(table), base_dir);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "corpus spec TOML: " << e.description() << " at line " << e.source().begin.line;
    throw SpecError(msg.str());
  }
}

CorpusSpec load_corpus_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot open corpus spec " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  auto base = path.parent_path();
  if (path.extension() == ".json") {
    try {
      return corpus_spec_from_json(nlohmann::json::parse(buf.str()), base);
    } catch (const nlohmann::json::exception& e) {
      throw SpecError("corpus spec " + path.string() + ": " + e.what());
    }
  }
  return corpus_spec_from_toml(buf.str(), base);
}

std::optional<std::string> process_env(std::string_view name) {
  const char* v = std::getenv(std::string(name).c_str());
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

void apply_env_overrides(CorpusSpec& spec, const EnvLookup& env) {
  if (auto v = env("HASS_SEED")) spec.seed = parse_number<std::uint64_t>(*v, "HASS_SEED");
  if (auto v = env("HASS_PROMPT_COUNT")) spec.prompt_count = parse_number<std::size_t>(*v, "HASS_PROMPT_COUNT");
  if (auto v = env("HASS_SPEAKER_COUNT")) {
    spec.speaker_pool = default_speaker_pool(parse_number<std::size_t>(*v, "HASS_SPEAKER_COUNT"));
  }
  if (auto v = env("HASS_RETRIES")) spec.llm_retries = parse_number<int>(*v, "HASS_RETRIES");
  if (auto v = env("HASS_PROFILES")) spec.profiles = load_profiles_file(*v);
  for (auto s : kAllSeverities) {
    std::string name = "HASS_COUNT_";
    for (char c : to_string(s)) name += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (auto v = env(name)) spec.class_counts[s] = parse_number<std::size_t>(*v, name);
  }
}

namespace {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  std::string hex;
  hex.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    char b[3];
    std::snprintf(b, sizeof b, "%02x", digest[i]);
    hex += b;
  }
  return hex;
}

}  // namespace

std::string spec_hash(const CorpusSpec& spec) { return sha256_hex(to_json(spec).dump()); }

nlohmann::ordered_json to_json(const ManifestRow& row) {
  nlohmann::ordered_json j;
  j["clip-id"] = row.clip_id;
  j["prompt-id"] = row.prompt_id;
  j["speaker-id"] = row.speaker_id;
  j["severity"] = to_string(row.severity);
  j["seed"] = row.seed;
  j["ground-truth"] = row.ground_truth;
  j["dysfluent-text"] = row.dysfluent_text;
  j["marked-ipa"] = row.marked_ipa;
  j["marker-counts"] = to_json(row.counts);
  j["content-markers"] = row.content_markers;
  j["lexical"] = to_json(row.lexical);
  j["plan-path"] = row.plan_path;
  j["backend"] = row.backend;
  j["predicted-duration-ms"] = row.predicted_duration_ms;
  return j;
}

ManifestRow manifest_row_from_json(const nlohmann::json& j) {
  ManifestRow r;
  try {
    r.clip_id = j.at("clip-id").get<std::string>();
    r.prompt_id = j.at("prompt-id").get<std::size_t>();
    r.speaker_id = j.at("speaker-id").get<std::string>();
    r.severity = parse_severity(j.at("severity").get<std::string>());
    r.seed = j.at("seed").get<std::uint64_t>();
    r.ground_truth = j.at("ground-truth").get<std::string>();
    r.dysfluent_text = j.at("dysfluent-text").get<std::string>();
    r.marked_ipa = j.at("marked-ipa").get<std::string>();
    r.counts = marker_counts_from_json(j.at("marker-counts"));
    r.content_markers = j.at("content-markers").get<std::uint32_t>();
    r.lexical = lexical_result_from_json(j.at("lexical"));
    r.plan_path = j.at("plan-path").get<std::string>();
    r.backend = j.at("backend").get<std::string>();
    r.predicted_duration_ms = j.at("predicted-duration-ms").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("manifest row: ") + e.what());
  }
  if (r.backend != "rule-based" && r.backend != "llm" && r.backend != "mixed") {
    throw InvalidArgument("manifest row " + r.clip_id + ": unknown backend '" + r.backend + "'");
  }
  return r;
}

std::vector<std::string> generate_prompt_texts(std::size_t n, TextClient* client, std::uint64_t seed, int retries) {
  if (n == 0) throw InvalidArgument("need at least one prompt");
  const auto& bundle = bundled_prompts();
  auto offline = [&] {
    if (n > bundle.size()) {
      throw InvalidArgument("asked for " + std::to_string(n) + " prompts; the bundled set has " +
                            std::to_string(bundle.size()));
    }
    return std::vector<std::string>(bundle.begin(), bundle.begin() + static_cast<std::ptrdiff_t>(n));
  };
  if (!client) return offline();

  GenerationRequest req;
  req.layer = GenerationLayer::prompt_text;
  req.count = n;
  req.seed = seed;
  auto out = generate_with_fallback(req, client, retries, [] { return std::string(); });
  if (out.rule_based) return offline();
  std::vector<std::string> lines;
  std::set<std::string> seen;
  std::istringstream in(out.text);
  for (std::string line; std::getline(in, line) && lines.size() < n;) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    line = line.substr(b, line.find_last_not_of(" \t\r") - b + 1);
    if (seen.insert(line).second) lines.push_back(line);
  }
  if (lines.size() < n) return offline();
  return lines;
}

namespace {

struct Job {
  SeverityLevel severity;
  std::size_t index;
};

std::string clip_id(SeverityLevel s, std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "-%05zu", k);
  return std::string(to_string(s)) + buf;
}

void run_job(const Job& job, const CorpusSpec& spec, const std::vector<std::string>& prompts,
             const CorpusBackends& backends, const BuildOptions& options, ManifestRow& row, RealizationPlan& plan) {
  auto sev = static_cast<std::uint64_t>(job.severity);
  row.clip_id = clip_id(job.severity, job.index);
  row.severity = job.severity;
  row.prompt_id = job.index % prompts.size();
  row.speaker_id = spec.speaker_pool[derive_seed(spec.seed, {0x5350, sev, job.index}) % spec.speaker_pool.size()];
  row.seed = derive_seed(spec.seed, {sev, job.index});
  row.ground_truth = prompts[row.prompt_id];

  MarkedIpaUtterance marked;
  if (job.severity == SeverityLevel::control) {
    row.lexical = inject_naturalistic(row.ground_truth, derive_seed(row.seed, {1}));
    auto u = to_word_aligned_ipa(row.lexical.dysfluent_text, backends.g2p);
    marked = to_marked_ipa(u);
    row.backend = "rule-based";
  } else {
    const auto& profile = spec.profiles.at(job.severity);
    row.lexical = generate_lexical(row.ground_truth, job.severity, derive_seed(row.seed, {1}), backends.llm,
                                   spec.llm_retries);
    auto u = to_word_aligned_ipa(row.lexical.dysfluent_text, backends.g2p);
    bool phono_rule = true;
    marked = generate_phonological(u, row.lexical, profile, derive_seed(row.seed, {2}), backends.llm,
                                   spec.llm_retries, &phono_rule);
    if (row.lexical.rule_based && phono_rule) {
      row.backend = "rule-based";
    } else if (!row.lexical.rule_based && !phono_rule) {
      row.backend = "llm";
    } else {
      row.backend = "mixed";
    }
  }
  row.dysfluent_text = row.lexical.dysfluent_text;
  row.marked_ipa = serialize(marked);
  row.counts = count_markers(marked);
  row.content_markers = count_content_markers(marked);
  row.plan_path = "plans/" + row.clip_id + ".json";

  PlanOptions po = options.plan;
  po.utterance_id = row.clip_id;
  po.speaker_id = row.speaker_id;
  plan = plan_realization(marked, po, derive_seed(row.seed, {3}));
  row.predicted_duration_ms = predicted_duration_ms(plan);
}

}  // namespace

CorpusManifest build_corpus(const CorpusSpec& spec, const CorpusBackends& backends, const BuildOptions& options) {
  spec.validate();
  std::vector<std::string> prompts;
  try {
    prompts = generate_prompt_texts(spec.prompt_count, backends.llm, derive_seed(spec.seed, {0x5052}), spec.llm_retries);
  } catch (const InvalidArgument& e) {
    throw SpecError(e.what());
  }

  std::vector<Job> jobs;
  for (auto s : kAllSeverities) {
    auto it = spec.class_counts.find(s);
    if (it == spec.class_counts.end()) continue;
    for (std::size_t k = 0; k < it->second; ++k) jobs.push_back({s, k});
  }

  CorpusManifest m;
  m.spec_hash = spec_hash(spec);
  m.toolkit_version = std::string(toolkit_version());
  m.rows.resize(jobs.size());
  m.plans.resize(jobs.size());

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(jobs.size(), 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        run_job(jobs[i], spec, prompts, backends, options, m.rows[i], m.plans[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = jobs.size();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<std::size_t> order(jobs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return m.rows[a].clip_id < m.rows[b].clip_id; });
  CorpusManifest sorted{m.spec_hash, m.toolkit_version, {}, {}};
  sorted.rows.reserve(order.size());
  sorted.plans.reserve(order.size());
  for (auto i : order) {
    sorted.rows.push_back(std::move(m.rows[i]));
    sorted.plans.push_back(std::move(m.plans[i]));
  }
  return sorted;
}

bool CorpusStats::passed() const {
  return std::all_of(by_severity.begin(), by_severity.end(), [](const auto& kv) { return kv.second.passed(); });
}

CorpusStats compute_stats(const std::vector<ManifestRow>& rows, const ProfileSet& profiles, const StatsTolerance& tol) {
  if (rows.empty()) throw InvalidArgument("cannot compute statistics of an empty manifest");
  CorpusStats out;
  std::map<SeverityLevel, MarkerCounts> sums;
  std::map<SeverityLevel, std::uint64_t> content;
  for (const auto& r : rows) {
    auto& st = out.by_severity[r.severity];
    ++st.files;
    sums[r.severity] += r.counts;
    content[r.severity] += r.content_markers;
    st.total_histogram[r.counts.total()] += 1;
    for (auto k : kAllMarkers) st.marker_histograms[index_of(k)][r.counts[k]] += 1;

    auto marked = parse_marked_ipa(r.marked_ipa);
    auto cap = r.severity == SeverityLevel::control ? 0u
               : profiles.count(r.severity)          ? profiles.at(r.severity).cooccurrence_cap
                                                     : default_cooccurrence_cap(r.severity);
    if (r.severity != SeverityLevel::control) {
      for (auto n : markers_per_word(marked)) {
        if (n > cap) ++st.cap_violations;
      }
    }
    for (const auto& t : marked.tokens) {
      if (t.kind == TokenKind::marker && *t.marker == MarkerKind::REP && !r.lexical.in_repair_span(t.word_index)) {
        ++st.gating_violations;
      }
    }
  }
  for (auto& [s, st] : out.by_severity) {
    const auto& sum = sums[s];
    double n = static_cast<double>(st.files);
    for (auto k : kAllMarkers) st.means[index_of(k)] = sum[k] / n;
    st.mean_total = sum.total() / n;
    st.primary_share = sum.total() ? static_cast<double>(sum.primary()) / sum.total() : 0.0;
    st.content_share = sum.total() ? static_cast<double>(content[s]) / sum.total() : 0.0;
    if (s == SeverityLevel::control) {
      st.total_ok = sum.total() == 0;
      continue;
    }
    auto it = profiles.find(s);
    if (it == profiles.end()) continue;
    const auto& p = it->second;
    double primary_target = p.target(MarkerKind::PAU) + p.target(MarkerKind::SUB) + p.target(MarkerKind::DEL);
    for (auto k : kAllMarkers) st.target_total += p.target(k);
    st.target_primary_share = st.target_total > 0 ? primary_target / st.target_total : 0.0;
    st.total_ok = std::abs(st.mean_total - st.target_total) <= tol.total * st.target_total;
    st.primary_ok = std::abs(st.primary_share - st.target_primary_share) <= tol.primary_points;
    st.content_ok = sum.total() == 0 || st.content_share >= tol.content_min;
    for (auto k : kAllMarkers) {
      auto i = index_of(k);
      st.marker_ok[i] = std::abs(st.means[i] - p.target(k)) <= tol.per_marker * std::max(p.target(k), 1.0);
    }
  }
  return out;
}

nlohmann::ordered_json to_json(const CorpusStats& stats) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [s, st] : stats.by_severity) {
    nlohmann::ordered_json o;
    o["files"] = st.files;
    nlohmann::ordered_json means, ok;
    for (auto k : kAllMarkers) {
      means[std::string(to_string(k))] = st.means[index_of(k)];
      ok[std::string(to_string(k))] = st.marker_ok[index_of(k)];
    }
    o["means"] = means;
    o["mean-total"] = st.mean_total;
    o["primary-share"] = st.primary_share;
    o["content-share"] = st.content_share;
    o["target-total"] = st.target_total;
    o["target-primary-share"] = st.target_primary_share;
    nlohmann::ordered_json hist = nlohmann::ordered_json::object();
    for (const auto& [t, c] : st.total_histogram) hist[std::to_string(t)] = c;
    o["total-histogram"] = hist;
    nlohmann::ordered_json mh = nlohmann::ordered_json::object();
    for (auto k : kAllMarkers) {
      nlohmann::ordered_json h = nlohmann::ordered_json::object();
      for (const auto& [t, c] : st.marker_histograms[index_of(k)]) h[std::to_string(t)] = c;
      mh[std::string(to_string(k))] = h;
    }
    o["marker-histograms"] = mh;
    o["cap-violations"] = st.cap_violations;
    o["gating-violations"] = st.gating_violations;
    o["checks"] = {{"total", st.total_ok}, {"primary-share", st.primary_ok}, {"content-share", st.content_ok},
                   {"per-marker", ok}, {"passed", st.passed()}};
    j[std::string(to_string(s))] = o;
  }
  return j;
}

void write_corpus(const CorpusManifest& manifest, const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  if (!manifest.plans.empty() && manifest.plans.size() != manifest.rows.size()) {
    throw InvalidArgument("manifest has " + std::to_string(manifest.rows.size()) + " rows but " +
                          std::to_string(manifest.plans.size()) + " plans");
  }
  fs::create_directories(out_dir / "plans");

  std::ofstream out(out_dir / "manifest.jsonl", std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + (out_dir / "manifest.jsonl").string());
  nlohmann::ordered_json header;
  header["schema"] = kManifestSchemaName;
  header["schema-version"] = kManifestSchemaVersion;
  header["toolkit-version"] = manifest.toolkit_version;
  header["spec-hash"] = manifest.spec_hash;
  header["rows"] = manifest.rows.size();
  out << header.dump() << '\n';
  for (const auto& r : manifest.rows) out << to_json(r).dump() << '\n';

  for (std::size_t i = 0; i < manifest.plans.size(); ++i) {
    std::ofstream p(out_dir / manifest.rows[i].plan_path, std::ios::binary | std::ios::trunc);
    if (!p) throw Error("cannot write plan " + manifest.rows[i].plan_path);
    p << to_json(manifest.plans[i]).dump(2) << '\n';
  }

  nlohmann::ordered_json summary;
  summary["toolkit-version"] = manifest.toolkit_version;
  summary["spec-hash"] = manifest.spec_hash;
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  std::map<std::string, std::size_t> backends;
  for (auto s : kAllSeverities) counts[std::string(to_string(s))] = 0;
  for (const auto& r : manifest.rows) {
    counts[std::string(to_string(r.severity))] = counts[std::string(to_string(r.severity))].get<std::size_t>() + 1;
    backends[r.backend] += 1;
  }
  summary["counts"] = counts;
  summary["backends"] = backends;
  summary["stats"] = manifest.rows.empty() ? nlohmann::ordered_json() : to_json(compute_stats(manifest.rows));
  std::ofstream s(out_dir / "summary.json", std::ios::binary | std::ios::trunc);
  s << summary.dump(2) << '\n';
}

CorpusManifest read_manifest(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open manifest " + manifest_path.string());
  CorpusManifest m;
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("manifest " + manifest_path.string() + " is empty");
  try {
    auto header = nlohmann::json::parse(line);
    if (header.at("schema").get<std::string>() != kManifestSchemaName) {
      throw InvalidArgument("not a corpus manifest: " + manifest_path.string());
    }
    auto v = header.at("schema-version").get<int>();
    if (v != kManifestSchemaVersion) {
      throw InvalidArgument("manifest schema version " + std::to_string(v) + ", expected " +
                            std::to_string(kManifestSchemaVersion));
    }
    m.toolkit_version = header.at("toolkit-version").get<std::string>();
    m.spec_hash = header.at("spec-hash").get<std::string>();
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      try {
        m.rows.push_back(manifest_row_from_json(nlohmann::json::parse(line)));
      } catch (const Error& e) {
        throw InvalidArgument("manifest line " + std::to_string(line_no) + ": " + e.what());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("manifest " + manifest_path.string() + ": " + e.what());
  }
  return m;
}

}  // namespace hass
