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

#include <string_view>

// Data files compiled into the library (generated at configure time from
// data/).
namespace hass::resources {

extern const std::string_view kLexiconTsv;
extern const std::string_view kFrequencyTsv;
extern const std::string_view kFunctionWordsTsv;
extern const std::string_view kCircumlocutionsTsv;
extern const std::string_view kPromptsTxt;
extern const std::string_view kProfilesJson;
extern const std::string_view kPromptTemplate;

}  // namespace hass::resources
