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

#include "hass/calibrate.hpp"

#include <cmath>
#include <cstdio>

#include "hass/error.hpp"
#include "hass/phono.hpp"
#include "hass/prompts.hpp"
#include "hass/seed.hpp"

namespace hass {

std::vector<CalibrationItem> make_calibration_sample(std::span<const std::string> prompts, SeverityLevel s,
                                                     std::size_t n, std::uint64_t seed) {
  if (prompts.empty()) throw InvalidArgument("calibration needs at least one prompt");
  std::vector<CalibrationItem> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    auto lex = inject_lexical(prompts[k % prompts.size()], s, derive_seed(seed, {static_cast<std::uint64_t>(s), k}));
    auto u = to_word_aligned_ipa(lex.dysfluent_text);
    out.push_back({std::move(u), std::move(lex)});
  }
  return out;
}

MarkerRates simulate_means(const SeverityProfile& profile, std::span<const CalibrationItem> sample, std::size_t runs,
                           std::uint64_t seed) {
  if (sample.empty() || runs == 0) throw InvalidArgument("simulation needs a sample and at least one run");
  MarkerCounts total;
  for (std::size_t k = 0; k < runs; ++k) {
    const auto& item = sample[k % sample.size()];
    total += count_markers(inject_phonological(item.utterance, item.lexical, profile, derive_seed(seed, {k})));
  }
  MarkerRates means{};
  for (auto m : kAllMarkers) means[index_of(m)] = static_cast<double>(total[m]) / static_cast<double>(runs);
  return means;
}

SeverityProfile calibrate_profile(SeverityLevel s, const MarkerRates& targets, std::span<const CalibrationItem> sample,
                                  double tolerance, std::uint64_t seed, const CalibrationOptions& options) {
  if (!(tolerance > 0)) throw InvalidArgument("calibration tolerance must be positive");
  if (sample.size() < 100) throw InvalidArgument("calibration sample needs at least 100 utterances");
  SeverityProfile p;
  p.severity = s;
  p.content_word_bias = options.content_word_bias;
  p.complexity_exponent = options.complexity_exponent;
  p.cooccurrence_cap = default_cooccurrence_cap(s);
  p.target_means = targets;
  p.validate();

  // Start from target / mean eligible-site count, which is exact with no
  // clamping and no caps.
  std::array<double, 6> sites{};
  for (const auto& item : sample) {
    for (const auto& site : enumerate_sites(item.utterance, item.lexical, p.complexity_exponent)) {
      for (auto m : kAllMarkers) sites[index_of(m)] += site.allows(m);
    }
  }
  for (auto m : kAllMarkers) {
    auto i = index_of(m);
    if (targets[i] <= 0) continue;
    if (sites[i] == 0) throw ConvergenceError(std::string(to_string(m)) + " has no eligible sites in the sample");
    p.base_rate[i] = targets[i] / (sites[i] / static_cast<double>(sample.size()));
  }

  MarkerKind worst = MarkerKind::PAU;
  double worst_err = 0;
  for (int it = 0; it < options.max_iterations; ++it) {
    auto means = simulate_means(p, sample, options.runs, seed);
    worst_err = 0;
    for (auto m : kAllMarkers) {
      auto i = index_of(m);
      if (targets[i] <= 0) continue;
      double err = std::abs(means[i] - targets[i]) / targets[i];
      if (err > worst_err) {
        worst_err = err;
        worst = m;
      }
    }
    if (worst_err <= tolerance) return p;
    for (auto m : kAllMarkers) {
      auto i = index_of(m);
      if (targets[i] <= 0) continue;
      p.base_rate[i] = means[i] > 0 ? p.base_rate[i] * targets[i] / means[i] : p.base_rate[i] * 4 + 1e-3;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s calibration did not converge in %d iterations: %s off by %.1f%%",
                std::string(to_string(s)).c_str(), options.max_iterations, std::string(to_string(worst)).c_str(),
                100 * worst_err);
  throw ConvergenceError(buf);
}

ProfileSet calibrate(const std::map<SeverityLevel, MarkerRates>& targets,
                     const std::map<SeverityLevel, std::vector<CalibrationItem>>& samples, double tolerance,
                     std::uint64_t seed, const CalibrationOptions& options) {
  ProfileSet out;
  for (const auto& [s, t] : targets) {
    auto it = samples.find(s);
    if (it == samples.end()) throw InvalidArgument("no calibration sample for " + std::string(to_string(s)));
    out.emplace(s, calibrate_profile(s, t, it->second, tolerance, derive_seed(seed, {static_cast<std::uint64_t>(s)}),
                                     options));
  }
  return out;
}

ProfileSet calibrate_bundled(const BundledCalibration& config) {
  std::map<SeverityLevel, MarkerRates> targets;
  std::map<SeverityLevel, std::vector<CalibrationItem>> samples;
  for (auto s : kDysfluentSeverities) {
    targets[s] = default_target_means(s);
    samples[s] = make_calibration_sample(bundled_prompts(), s, config.sample_size, derive_seed(config.seed, {1}));
  }
  return calibrate(targets, samples, config.tolerance, derive_seed(config.seed, {2}), config.options);
}

}  // namespace hass
