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

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hass::testing {

// Prompt sentences straight from the data directory, independent of the
// embedded copy.
inline const std::vector<std::string>& prompt_sentences() {
  static const std::vector<std::string> prompts = [] {
    std::ifstream in(std::string(HASS_TEST_DATA_DIR) + "/prompts.txt");
    if (!in) throw std::runtime_error("cannot open prompts.txt");
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);) {
      if (!line.empty() && line[0] != '#') out.push_back(line);
    }
    return out;
  }();
  return prompts;
}

}  // namespace hass::testing
