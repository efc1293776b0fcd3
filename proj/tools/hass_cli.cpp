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

// hass: command-line front end.
// Exit codes: 0 ok, 2 validation failure, 3 spec or usage error, 1 other.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hass/calibrate.hpp"
#include "hass/corpus.hpp"
#include "hass/error.hpp"
#include "hass/lexical.hpp"
#include "hass/llm.hpp"
#include "hass/marker.hpp"
#include "hass/phono.hpp"
#include "hass/profile.hpp"
#include "hass/prompts.hpp"
#include "hass/realize.hpp"
#include "hass/seed.hpp"

namespace fs = std::filesystem;
using namespace hass;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kValidation = 2;
constexpr int kSpec = 3;

ProfileSet load_profiles(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open profiles file " + path);
  try {
    return profiles_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(path + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw SpecError(path + ": " + e.what());
  }
}

std::shared_ptr<TextClient> backend(bool offline, const std::string& replay) {
  if (offline) return nullptr;
  if (!replay.empty()) return std::make_shared<ReplayClient>(ReplayClient::from_file(replay));
  return client_from_env();
}

struct GenerateArgs {
  std::string spec_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> prompt_count;
  std::optional<std::size_t> speaker_count;
  std::optional<int> retries;
  std::string profiles;
  std::vector<std::string> counts;  // class=n
  unsigned threads = 0;
  bool offline = false;
  std::string replay;
};

int run_generate(const GenerateArgs& a) {
  CorpusSpec spec = a.spec_path.empty() ? CorpusSpec{} : load_corpus_spec(a.spec_path);
  apply_env_overrides(spec);
  if (a.seed) spec.seed = *a.seed;
  if (a.prompt_count) spec.prompt_count = *a.prompt_count;
  if (a.speaker_count) spec.speaker_pool = default_speaker_pool(*a.speaker_count);
  if (a.retries) spec.llm_retries = *a.retries;
  if (!a.profiles.empty()) spec.profiles = load_profiles(a.profiles);
  for (const auto& kv : a.counts) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw SpecError("--count expects class=n, got '" + kv + "'");
    try {
      std::size_t used = 0;
      auto n = std::stoull(kv.substr(eq + 1), &used);
      if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
      spec.class_counts[parse_severity(kv.substr(0, eq))] = n;
    } catch (const InvalidArgument& e) {
      throw SpecError(e.what());
    } catch (const std::logic_error&) {
      throw SpecError("--count: '" + kv + "' is not class=n");
    }
  }
  auto client = backend(a.offline, a.replay);
  CorpusBackends backends{client.get(), nullptr};
  BuildOptions options;
  options.threads = a.threads;
  auto manifest = build_corpus(spec, backends, options);
  write_corpus(manifest, a.out_dir);
  std::cout << "wrote " << manifest.rows.size() << " rows to " << a.out_dir << " (spec " << manifest.spec_hash.substr(0, 12)
            << ")\n";
  return kOk;
}

struct InjectArgs {
  std::string severity = "moderate";
  std::uint64_t seed = 0;
  std::string text;
  std::optional<std::size_t> prompt_id;
  std::string profiles;
  bool json = false;
  bool offline = false;
  std::string replay;
  int retries = 2;
};

nlohmann::ordered_json inject_one(const std::string& gt, SeverityLevel s, std::uint64_t seed, const ProfileSet& profiles,
                                  TextClient* client, int retries) {
  LexicalResult lex;
  MarkedIpaUtterance marked;
  bool phono_rule = true;
  if (s == SeverityLevel::control) {
    lex = inject_naturalistic(gt, derive_seed(seed, {1}));
    marked = to_marked_ipa(to_word_aligned_ipa(lex.dysfluent_text));
  } else {
    auto it = profiles.find(s);
    if (it == profiles.end()) throw SpecError("no profile for " + std::string(to_string(s)));
    lex = generate_lexical(gt, s, derive_seed(seed, {1}), client, retries);
    auto u = to_word_aligned_ipa(lex.dysfluent_text);
    marked = generate_phonological(u, lex, it->second, derive_seed(seed, {2}), client, retries, &phono_rule);
  }
  nlohmann::ordered_json j;
  j["ground-truth"] = gt;
  j["severity"] = to_string(s);
  j["seed"] = seed;
  j["dysfluent-text"] = lex.dysfluent_text;
  j["marked-ipa"] = serialize(marked);
  j["marker-counts"] = to_json(count_markers(marked));
  j["lexical"] = to_json(lex);
  j["rule-based"] = lex.rule_based && phono_rule;
  for (const auto& w : marked.warnings) std::cerr << "warning: " << w << '\n';
  return j;
}

int run_inject(const InjectArgs& a) {
  SeverityLevel s;
  try {
    s = parse_severity(a.severity);
  } catch (const InvalidArgument& e) {
    throw SpecError(e.what());
  }
  ProfileSet profiles = a.profiles.empty() ? default_profiles() : load_profiles(a.profiles);
  auto client = backend(a.offline, a.replay);

  std::vector<std::string> inputs;
  if (!a.text.empty()) {
    inputs.push_back(a.text);
  } else if (a.prompt_id) {
    const auto& prompts = bundled_prompts();
    if (*a.prompt_id >= prompts.size()) throw SpecError("prompt id out of range (0.." + std::to_string(prompts.size() - 1) + ")");
    inputs.push_back(prompts[*a.prompt_id]);
  } else {
    for (std::string line; std::getline(std::cin, line);) {
      if (!line.empty() && line[0] != '#') inputs.push_back(line);
    }
  }
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    // Several input lines get independent streams.
    auto seed = inputs.size() == 1 ? a.seed : derive_seed(a.seed, {i});
    auto j = inject_one(inputs[i], s, seed, profiles, client.get(), a.retries);
    if (a.json) {
      std::cout << j.dump() << '\n';
    } else {
      std::cout << j["dysfluent-text"].get<std::string>() << '\n' << j["marked-ipa"].get<std::string>() << '\n';
    }
  }
  return kOk;
}

struct RealizeArgs {
  std::string manifest;
  std::string out_dir;
  std::string concat;
  double crossfade_ms = 50.0;
};

int run_realize(const RealizeArgs& a) {
  auto m = read_manifest(a.manifest);
  fs::path out = a.out_dir.empty() ? fs::path(a.manifest).parent_path() : fs::path(a.out_dir);
  fs::create_directories(out / "plans");
  std::vector<RealizationPlan> plans;
  for (const auto& r : m.rows) {
    PlanOptions po;
    po.utterance_id = r.clip_id;
    po.speaker_id = r.speaker_id;
    auto plan = plan_realization(parse_marked_ipa(r.marked_ipa), po, derive_seed(r.seed, {3}));
    std::ofstream f(out / r.plan_path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + (out / r.plan_path).string());
    f << to_json(plan).dump(2) << '\n';
    plans.push_back(std::move(plan));
  }
  if (!a.concat.empty()) {
    auto spec = plan_concatenation(plans, a.crossfade_ms);
    std::ofstream f(a.concat, std::ios::binary | std::ios::trunc);
    f << to_json(spec).dump(2) << '\n';
    std::cout << "concatenation: " << spec.clips.size() << " clips, " << spec.predicted_duration_ms << " ms\n";
  }
  std::cout << "wrote " << plans.size() << " plans to " << (out / "plans").string() << '\n';
  return kOk;
}

struct StatsArgs {
  std::string manifest;
  bool check = false;
  std::string profiles;
  StatsTolerance tolerance;
};

int run_stats(const StatsArgs& a) {
  auto m = read_manifest(a.manifest);
  ProfileSet profiles = a.profiles.empty() ? default_profiles() : load_profiles(a.profiles);
  auto stats = compute_stats(m.rows, profiles, a.tolerance);
  std::cout << to_json(stats).dump(2) << '\n';
  if (!a.check) return kOk;
  for (const auto& [s, st] : stats.by_severity) {
    std::cerr << to_string(s) << ": " << (st.passed() ? "PASS" : "FAIL") << " (mean total " << st.mean_total
              << ", primary share " << st.primary_share << ", content share " << st.content_share << ")\n";
  }
  return stats.passed() ? kOk : kValidation;
}

struct ValidateArgs {
  std::string file;
  std::string target;
};

int run_validate(const ValidateArgs& a) {
  auto read_lines = [](const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open " + path);
    std::vector<std::pair<std::size_t, std::string>> out;
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) {
      ++n;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      out.emplace_back(n, line);
    }
    return out;
  };
  auto lines = read_lines(a.file);
  std::vector<std::pair<std::size_t, std::string>> targets;
  if (!a.target.empty()) {
    targets = read_lines(a.target);
    if (targets.size() != lines.size()) {
      std::cerr << a.file << ": " << lines.size() << " utterances but " << targets.size() << " targets\n";
      return kValidation;
    }
  }
  std::size_t bad = 0;
  MarkerCounts total;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& [n, text] = lines[i];
    try {
      auto u = targets.empty() ? parse_marked_ipa(text)
                               : parse_marked_ipa(text, parse_marked_ipa(targets[i].second).words);
      if (serialize(u) != canonicalize(text)) throw Error("does not round-trip");
      total += count_markers(u);
    } catch (const Error& e) {
      ++bad;
      std::cerr << a.file << ":" << n << ": " << e.what() << '\n';
    }
  }
  std::cout << lines.size() - bad << "/" << lines.size() << " utterances valid; markers " << to_json(total).dump() << '\n';
  return bad ? kValidation : kOk;
}

struct CalibrateArgs {
  BundledCalibration config;
  std::string out;
};

int run_calibrate(const CalibrateArgs& a) {
  auto profiles = calibrate_bundled(a.config);
  auto text = to_json(profiles).dump(2) + "\n";
  if (a.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(a.out, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + a.out);
    f << text;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hass: simulated lvPPA speech specifications"};
  app.set_version_flag("--version", std::string(toolkit_version()));
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "build a corpus manifest with plans");
  g->add_option("--spec", gen.spec_path, "corpus spec (TOML, or JSON by extension)")->check(CLI::ExistingFile);
  g->add_option("--out", gen.out_dir, "output directory")->required();
  g->add_option("--seed", gen.seed);
  g->add_option("--prompt-count", gen.prompt_count);
  g->add_option("--speaker-count", gen.speaker_count);
  g->add_option("--retries", gen.retries, "LLM attempts after the first");
  g->add_option("--profiles", gen.profiles, "profiles JSON");
  g->add_option("--count", gen.counts, "class count override, e.g. --count mild=87")->delimiter(',');
  g->add_option("--threads", gen.threads, "worker threads (0 = all cores)");
  g->add_flag("--offline", gen.offline, "ignore HASS_LLM_ENDPOINT; rule engines only");
  g->add_option("--replay", gen.replay, "answer LLM requests from a JSONL fixture");

  InjectArgs inj;
  auto* i = app.add_subcommand("inject", "inject one sentence (or stdin lines)");
  i->add_option("--severity", inj.severity)->check(CLI::IsMember({"control", "mild", "moderate", "severe"}));
  i->add_option("--seed", inj.seed);
  i->add_option("--text", inj.text, "ground-truth sentence");
  i->add_option("--prompt-id", inj.prompt_id, "index into the bundled prompts");
  i->add_option("--profiles", inj.profiles);
  i->add_option("--retries", inj.retries);
  i->add_flag("--json", inj.json);
  i->add_flag("--offline", inj.offline);
  i->add_option("--replay", inj.replay);

  RealizeArgs real;
  auto* r = app.add_subcommand("realize", "realization plans for every manifest row");
  r->add_option("--manifest", real.manifest)->required()->check(CLI::ExistingFile);
  r->add_option("--out", real.out_dir, "default: the manifest's directory");
  r->add_option("--concat", real.concat, "also write a concatenation spec over all rows");
  r->add_option("--crossfade-ms", real.crossfade_ms);

  StatsArgs st;
  auto* s = app.add_subcommand("stats", "per-severity marker statistics");
  s->add_option("--manifest", st.manifest)->required()->check(CLI::ExistingFile);
  s->add_flag("--check", st.check, "exit 2 unless every severity is within tolerance");
  s->add_option("--profiles", st.profiles);
  s->add_option("--total-tolerance", st.tolerance.total);
  s->add_option("--primary-points", st.tolerance.primary_points);
  s->add_option("--content-min", st.tolerance.content_min);

  ValidateArgs val;
  auto* v = app.add_subcommand("validate", "check a marked-IPA file, one utterance per line");
  v->add_option("file", val.file)->required()->check(CLI::ExistingFile);
  v->add_option("--target", val.target, "plain IPA targets, line for line")->check(CLI::ExistingFile);

  CalibrateArgs cal;
  auto* c = app.add_subcommand("calibrate", "fit profiles to the default target means");
  c->add_option("--seed", cal.config.seed);
  c->add_option("--sample-size", cal.config.sample_size);
  c->add_option("--tolerance", cal.config.tolerance);
  c->add_option("--runs", cal.config.options.runs);
  c->add_option("--content-word-bias", cal.config.options.content_word_bias);
  c->add_option("--out", cal.out, "default: stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kSpec;
  }

  try {
    if (g->parsed()) return run_generate(gen);
    if (i->parsed()) return run_inject(inj);
    if (r->parsed()) return run_realize(real);
    if (s->parsed()) return run_stats(st);
    if (v->parsed()) return run_validate(val);
    if (c->parsed()) return run_calibrate(cal);
  } catch (const SpecError& e) {
    std::cerr << "spec error: " << e.what() << '\n';
    return kSpec;
  } catch (const ConvergenceError& e) {
    std::cerr << "calibration failed: " << e.what() << '\n';
    return kValidation;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kValidation;
  } catch (const SyntaxError& e) {
    std::cerr << e.what() << '\n';
    return kValidation;
  } catch (const AlignmentError& e) {
    std::cerr << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
