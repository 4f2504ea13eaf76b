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

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "podep/config.hpp"
#include "podep/conllu.hpp"
#include "podep/decoder.hpp"
#include "podep/lexicon.hpp"
#include "podep/parser_head.hpp"
#include "podep/reader.hpp"
#include "podep/tagger.hpp"
#include "podep/tape.hpp"

namespace podep {

// Integer view of one sentence, ready for the network.
struct EncodedSentence {
  std::vector<std::vector<int>> chars;     // fenced character ids per word
  std::vector<int> heads;                  // gold heads, empty when unannotated
  std::vector<int> labels;                 // gold label ids, -1 when unknown
  std::vector<std::vector<int>> pos;       // [attribute][word], -1 when absent

  std::size_t size() const { return chars.size(); }
};

// Reader, tagger, optional POS head and parser head wired together.
class Model {
 public:
  struct Forward {
    Var annotations;  // [n, hidden]
    Var located;      // [n + 1, hidden], root first
    Var scores;       // [n, n + 1]
    Var probs;        // [n, n + 1]
    Var branch;       // POS head input
  };

  struct Losses {
    Var heads;   // mean NLL of gold head locations
    Var labels;  // mean NLL of gold labels
    std::optional<Var> pos;
  };

  Model(ModelConfig config, Lexicon lexicon);

  void initialize(std::uint64_t seed);

  // Training encoding (strict) rejects labels or POS attributes missing
  // from the lexicon; inference encoding maps them to -1.
  EncodedSentence encode(const Sentence& sentence, bool strict = false) const;

  // Dropout is active when the tape is in training mode.
  Forward forward(Tape& tape, const EncodedSentence& sentence) const;
  Losses losses(Tape& tape, const EncodedSentence& sentence) const;
  Losses losses(Tape& tape, const EncodedSentence& sentence, const Forward& fwd) const;

  // Head-location probabilities, [n, n + 1], evaluation mode.
  Tensor head_probabilities(const Sentence& sentence) const;
  ParseResult parse(const Sentence& sentence, DecodeMode mode = DecodeMode::GreedyThenCle,
                    bool single_root = false) const;
  // Copies the sentence with HEAD and DEPREL replaced by the prediction.
  Sentence annotate(const Sentence& sentence, const ParseResult& result) const;

  const ModelConfig& config() const { return config_; }
  const Lexicon& lexicon() const { return lexicon_; }
  ParameterSet& params() { return params_; }
  const ParameterSet& params() const { return params_; }
  const Reader& reader() const { return reader_; }
  const Tagger& tagger() const { return tagger_; }
  const ParserHead& head() const { return head_; }
  const PosHead* pos_head() const { return pos_head_ ? &*pos_head_ : nullptr; }

 private:
  ModelConfig config_;
  Lexicon lexicon_;
  ParameterSet params_;
  Reader reader_;
  Tagger tagger_;
  std::optional<PosHead> pos_head_;
  ParserHead head_;
};

// Parses sentences on up to `threads` workers; output order follows input.
std::vector<ParseResult> parse_all(const Model& model, std::span<const Sentence> sentences, DecodeMode mode,
                                   std::size_t threads = 1, bool single_root = false);

// Worker count from PODEP_THREADS (at least 1), capped by `requested` when nonzero.
std::size_t worker_count(std::size_t requested = 0);

}  // namespace podep
