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
#include <vector>

#include "podep/config.hpp"
#include "podep/lexicon.hpp"
#include "podep/tape.hpp"

namespace podep {

// Gated recurrent unit over row-vector inputs:
//   z = sigmoid(x Wz + h Uz + bz), r = sigmoid(x Wr + h Ur + br)
//   c = tanh(x Wc + (r * h) Uc + bc), h' = (1 - z) * h + z * c
// Wz, Wr, Wc are stored side by side in one [input, 3 * hidden] matrix.
class Gru {
 public:
  Gru(std::size_t input, std::size_t hidden, ParameterSet& params, const std::string& prefix);

  void initialize(std::mt19937_64& rng, Real sigma = 0.01);

  Var step(Tape& tape, Var x, Var h_prev) const;
  // States for every row of inputs [T, input], scanning backwards when reverse
  // is set. Row t of the result is the state after reading row t.
  Var run(Tape& tape, Var inputs, bool reverse) const;
  Var initial_state(Tape& tape) const { return tape.param(*h0_); }

  std::size_t hidden() const { return hidden_; }

 private:
  Var step_projected(Tape& tape, Var x_proj, Var h_prev) const;

  std::size_t hidden_;
  Parameter* w_;
  Parameter* b_;
  Parameter* u_z_;
  Parameter* u_r_;
  Parameter* u_c_;
  Parameter* h0_;
};

// Forward and backward GRUs whose states are summed per position.
class BiGruLayer {
 public:
  BiGruLayer(std::size_t input, std::size_t hidden, ParameterSet& params, const std::string& prefix);

  void initialize(std::mt19937_64& rng, Real sigma = 0.01);
  Var forward(Tape& tape, Var inputs) const;

  const Gru& forward_gru() const { return fwd_; }
  const Gru& backward_gru() const { return bwd_; }

 private:
  Gru fwd_;
  Gru bwd_;
};

class Tagger {
 public:
  struct Output {
    Var annotations;  // [n, hidden], output of the last layer
    Var branch;       // input to the POS head
  };

  Tagger(const TaggerConfig& config, std::size_t input_dim, ParameterSet& params,
         const std::string& prefix = "tagger");

  void initialize(std::mt19937_64& rng, Real sigma = 0.01);
  // Applies `dropout` to the output of every layer.
  Output forward(Tape& tape, Var embeddings, Real dropout) const;

  const TaggerConfig& config() const { return config_; }
  std::size_t branch_dim() const;
  const BiGruLayer& layer(std::size_t i) const { return layers_[i]; }

 private:
  TaggerConfig config_;
  std::size_t input_dim_;
  std::vector<BiGruLayer> layers_;
};

// One linear softmax classifier per POS attribute on top of the tagger branch.
class PosHead {
 public:
  PosHead(const std::vector<AttributeVocab>& attributes, std::size_t input_dim, ParameterSet& params,
          const std::string& prefix = "pos");

  void initialize(std::mt19937_64& rng, Real sigma = 0.01);

  std::vector<Var> logits(Tape& tape, Var branch) const;
  // Per-attribute probability rows, [n, values of attribute a].
  std::vector<Var> distributions(Tape& tape, Var branch) const;
  // targets[a][w] is the value id of attribute a on word w, or -1 when the
  // word does not carry it. Sum of negative log-likelihoods divided by the
  // number of supervised (word, attribute) pairs; 0 when there are none.
  Var loss(Tape& tape, Var branch, const std::vector<std::vector<int>>& targets) const;

  std::size_t attribute_count() const { return classifiers_.size(); }

 private:
  struct Classifier {
    Parameter* w;
    Parameter* b;
  };
  std::vector<Classifier> classifiers_;
};

}  // namespace podep
