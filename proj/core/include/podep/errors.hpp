// Copyright 2026 The podep Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
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

namespace podep {

// Malformed input text. line is 1-based, 0 when unknown.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Well-formed input that violates a semantic constraint, e.g. a head index
// pointing past the end of its sentence.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& what, std::size_t sentence_index)
      : std::runtime_error("sentence " + std::to_string(sentence_index) + ": " + what),
        sentence_index_(sentence_index) {}
  std::size_t sentence_index() const { return sentence_index_; }

 private:
  std::size_t sentence_index_;
};

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Gold and predicted corpora disagree in sentence or token counts.
class AlignmentError : public std::runtime_error {
 public:
  AlignmentError(const std::string& what, std::size_t sentence_index)
      : std::runtime_error("sentence " + std::to_string(sentence_index) + ": " + what),
        sentence_index_(sentence_index) {}
  std::size_t sentence_index() const { return sentence_index_; }

 private:
  std::size_t sentence_index_;
};

// Non-finite values showed up in a forward pass or a gradient.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace podep
