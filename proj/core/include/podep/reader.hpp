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
#include "podep/tape.hpp"

namespace podep {

// Character-level word encoder: character embeddings, a convolutional
// filterbank reduced by max over time, a linear projection and a stack of
// highway layers.
class Reader {
 public:
  Reader(const ReaderConfig& config, std::size_t char_count, ParameterSet& params,
         const std::string& prefix = "reader");

  void initialize(std::mt19937_64& rng, Real sigma = 0.01);

  // [len, char_embed_dim]; row j embeds character j.
  Var embed_chars(Tape& tape, std::span<const int> char_ids) const;
  // [1, filter_count]: per filter, max over positions of tanh(window . F + b).
  // Throws ShapeError when the input is shorter than the widest filter.
  Var filter_responses(Tape& tape, Var chars) const;
  // Highway stack over the linear projection of filter responses.
  Var transform(Tape& tape, Var responses) const;

  // Embedding of one fenced word, [1, projection_dim]. Words shorter than the
  // widest filter are right-padded with PAD.
  Var forward(Tape& tape, std::span<const int> char_ids) const;
  // One row per word, [n, projection_dim].
  Var forward_words(Tape& tape, const std::vector<std::vector<int>>& words) const;

  const ReaderConfig& config() const { return config_; }
  std::size_t output_dim() const { return config_.projection_dim; }

 private:
  struct FilterBank {
    std::size_t width;
    Parameter* weights;
    Parameter* bias;
  };
  struct Highway {
    Parameter* w_h;
    Parameter* b_h;
    Parameter* w_t;
    Parameter* b_t;
  };

  Var responses_for(Tape& tape, std::span<const int> char_ids) const;

  ReaderConfig config_;
  Parameter* char_table_;
  std::vector<FilterBank> banks_;
  Parameter* proj_w_;
  Parameter* proj_b_;
  std::vector<Highway> highways_;
};

}  // namespace podep
