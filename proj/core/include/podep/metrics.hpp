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
#include <span>
#include <string>
#include <vector>

#include "podep/conllu.hpp"
#include "podep/decoder.hpp"
#include "podep/lexicon.hpp"

namespace podep {

struct EvalCounts {
  std::size_t tokens = 0;
  std::size_t heads = 0;   // correct head
  std::size_t labels = 0;  // correct label
  std::size_t both = 0;    // correct head and label

  EvalCounts& operator+=(const EvalCounts& o) {
    tokens += o.tokens;
    heads += o.heads;
    labels += o.labels;
    both += o.both;
    return *this;
  }
  friend bool operator==(const EvalCounts&, const EvalCounts&) = default;
};

// LA, UAS and LAS in percent. All three are 0 when no token was scored.
struct EvalReport {
  double la = 0.0;
  double uas = 0.0;
  double las = 0.0;
  std::size_t token_count = 0;
  EvalCounts counts;
  std::vector<EvalCounts> per_sentence;

  static EvalReport from_counts(const EvalCounts& counts);
};

struct EvalOptions {
  // Skip tokens whose gold UPOS is PUNCT or gold relation is punct.
  bool exclude_punct = false;
  bool per_sentence = false;
};

bool is_punctuation(const Token& gold);

// Compares HEAD and DEPREL columns. Throws AlignmentError when the corpora
// differ in sentence count or a sentence differs in length.
EvalReport attachment_scores(std::span<const Sentence> gold, std::span<const Sentence> pred,
                             const EvalOptions& options = {});
EvalReport attachment_scores(std::span<const Sentence> gold, std::span<const ParseResult> pred,
                             const Lexicon& lexicon, const EvalOptions& options = {});

// Fixed-width text table with two-decimal percentages.
std::string format_report_table(const EvalReport& report);
// One JSON object on a single line.
std::string format_report_json(const EvalReport& report);

}  // namespace podep
