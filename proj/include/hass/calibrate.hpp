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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hass/lexical.hpp"
#include "hass/lexicon.hpp"
#include "hass/profile.hpp"

namespace hass {

// A dysfluent sentence ready for phoneme-level injection.
struct CalibrationItem {
  AlignedUtterance utterance;
  LexicalResult lexical;
};

/// n word-level draws over the prompts (round robin) at one severity.
std::vector<CalibrationItem> make_calibration_sample(std::span<const std::string> prompts, SeverityLevel s,
                                                     std::size_t n, std::uint64_t seed);

/// Mean marker counts per file over `runs` injections, item k % size with
/// seed derive_seed(seed, {k}).
MarkerRates simulate_means(const SeverityProfile& profile, std::span<const CalibrationItem> sample, std::size_t runs,
                           std::uint64_t seed);

struct CalibrationOptions {
  std::size_t runs = 2000;
  int max_iterations = 50;
  double content_word_bias = 0.95;
  double complexity_exponent = 1.0;
};

/// Fits base rates so simulated means land within `tolerance` (relative)
/// of every positive target; zero targets get zero rates. Throws
/// ConvergenceError naming the worst marker when the budget runs out.
SeverityProfile calibrate_profile(SeverityLevel s, const MarkerRates& targets, std::span<const CalibrationItem> sample,
                                  double tolerance, std::uint64_t seed, const CalibrationOptions& options = {});

ProfileSet calibrate(const std::map<SeverityLevel, MarkerRates>& targets,
                     const std::map<SeverityLevel, std::vector<CalibrationItem>>& samples, double tolerance,
                     std::uint64_t seed, const CalibrationOptions& options = {});

struct BundledCalibration {
  std::uint64_t seed = 20240601;
  std::size_t sample_size = 2000;
  double tolerance = 0.02;
  CalibrationOptions options;
};

/// Profiles for mild, moderate and severe, fitted to default_target_means
/// over the bundled prompts. This is how data/profiles.json is produced.
ProfileSet calibrate_bundled(const BundledCalibration& config = {});

}  // namespace hass
