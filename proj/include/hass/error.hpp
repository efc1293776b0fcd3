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
#include <stdexcept>
#include <string>

namespace hass {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition (bad argument, bad profile).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Marked-IPA text that does not follow the marker grammar.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, const std::string& what)
      : Error("syntax error at byte " + std::to_string(offset) + ": " + what),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Phoneme stream that cannot be partitioned into the supplied words.
class AlignmentError : public Error {
 public:
  AlignmentError(std::size_t word_index, const std::string& what)
      : Error("alignment error at word " + std::to_string(word_index) + ": " + what),
        word_index_(word_index) {}

  std::size_t word_index() const noexcept { return word_index_; }

 private:
  std::size_t word_index_;
};

/// Corpus or profile configuration that cannot be used.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// Calibration did not reach its tolerance within the iteration budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace hass
