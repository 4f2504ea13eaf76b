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
#include <random>
#include <span>
#include <string>

#include "podep/config.hpp"
#include "podep/tape.hpp"

namespace podep {

// Pointer-style head selection and dependency labelling over tagger
// annotations. Location 0 is a learned root vector prepended to the words.
class ParserHead {
 public:
  ParserHead(const ScorerConfig& config, std::size_t annotation_dim, std::size_t label_count, ParameterSet& params,
             const std::string& prefix = "parser");

  void initialize(std::mt19937_64& rng, Real sigma = 0.01);

  // [n + 1, d]: root vector followed by the word annotations.
  Var with_root(Tape& tape, Var annotations) const;

  // s(w, l) = v . tanh(H_w A + H_l B + b), i.e. a one-hidden-layer network
  // over concat(H_w, H_l) with weight [A; B]. Returns [1, 1].
  Var score(Tape& tape, Var dependent, Var location) const;
  // Unnormalized scores of all words against all locations, [n, n + 1].
  Var score_matrix(Tape& tape, Var annotations, Var located) const;
  // Row-wise softmax of score_matrix; row w is p(head of w = l).
  Var head_distribution(Tape& tape, Var scores) const;

  // Label logits from concat(head annotation, dependent annotation), [n, labels].
  Var label_logits(Tape& tape, Var heads, Var dependents, Real dropout) const;
  // Expected head annotation under probs [n, n + 1].
  Var label_soft(Tape& tape, Var located, Var probs, Var annotations, Real dropout) const;
  // Head annotation picked at heads[w] (0 = root). Integer selection: no
  // gradient reaches the scorer through this path.
  Var label_hard(Tape& tape, Var located, std::span<const int> heads, Var annotations, Real dropout) const;

  const ScorerConfig& config() const { return config_; }
  std::size_t label_count() const { return label_count_; }

 private:
  ScorerConfig config_;
  std::size_t label_count_;
  Parameter* root_;
  Parameter* score_dep_;
  Parameter* score_loc_;
  Parameter* score_b_;
  Parameter* score_v_;
  Parameter* label_w_;
  Parameter* label_b_;
  Parameter* out_w_;
  Parameter* out_b_;
};

}  // namespace podep
