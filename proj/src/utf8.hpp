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
#include <string>
#include <string_view>

namespace hass::utf8 {

struct Decoded {
  char32_t cp = 0;
  std::size_t length = 0;  // 0 means malformed
};

inline Decoded decode(std::string_view s, std::size_t pos) {
  auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
  if (pos >= s.size()) return {};
  unsigned char c = byte(pos);
  if (c < 0x80) return {c, 1};
  std::size_t n = 0;
  char32_t cp = 0;
  if ((c & 0xE0) == 0xC0) {
    n = 2;
    cp = c & 0x1F;
  } else if ((c & 0xF0) == 0xE0) {
    n = 3;
    cp = c & 0x0F;
  } else if ((c & 0xF8) == 0xF0) {
    n = 4;
    cp = c & 0x07;
  } else {
    return {};
  }
  if (pos + n > s.size()) return {};
  for (std::size_t i = 1; i < n; ++i) {
    unsigned char cc = byte(pos + i);
    if ((cc & 0xC0) != 0x80) return {};
    cp = (cp << 6) | (cc & 0x3F);
  }
  return {cp, n};
}

inline void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::string encode(char32_t cp) {
  std::string s;
  append(s, cp);
  return s;
}

// Letters that can start an IPA segment.
inline bool is_ipa_base(char32_t cp) {
  if (cp >= 'a' && cp <= 'z') return true;
  if (cp == 0xE6 || cp == 0xE7 || cp == 0xF0 || cp == 0xF8) return true;  // æ ç ð ø
  if (cp >= 0x0100 && cp <= 0x024F) return true;                        // Latin Extended-A/B (ŋ œ ...)
  if (cp >= 0x0250 && cp <= 0x02AF) return true;                        // IPA Extensions
  if (cp == 0x03B2 || cp == 0x03B8 || cp == 0x03C7) return true;        // β θ χ
  return false;
}

// Length marks, spacing modifier letters, and combining diacritics that
// attach to the preceding segment. Stress marks are handled separately.
inline bool is_ipa_modifier(char32_t cp) {
  if (cp == 0x02C8 || cp == 0x02CC) return false;
  if (cp >= 0x02B0 && cp <= 0x02FF) return true;
  if (cp >= 0x0300 && cp <= 0x036F) return true;
  return false;
}

}  // namespace hass::utf8
