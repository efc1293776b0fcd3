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

#include "hass/prompts.hpp"

#include "resources.hpp"

namespace hass {

const std::vector<std::string>& bundled_prompts() {
  static const std::vector<std::string> prompts = [] {
    std::vector<std::string> out;
    std::string_view text = resources::kPromptsTxt;
    std::size_t pos = 0;
    while (pos < text.size()) {
      auto eol = text.find('\n', pos);
      if (eol == std::string_view::npos) eol = text.size();
      auto line = text.substr(pos, eol - pos);
      pos = eol + 1;
      if (!line.empty() && line.front() != '#') out.emplace_back(line);
    }
    return out;
  }();
  return prompts;
}

}  // namespace hass
