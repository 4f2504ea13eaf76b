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

#include "podep/reader.hpp"

#include "podep/init.hpp"
#include "podep/lexicon.hpp"
#include "podep/ops.hpp"

namespace podep {

Reader::Reader(const ReaderConfig& config, std::size_t char_count, ParameterSet& params, const std::string& prefix)
    : config_(config) {
  const std::size_t dim = config_.char_embed_dim;
  char_table_ = &params.add(prefix + ".char_embed", {char_count, dim});
  for (const FilterSpec& f : config_.filters) {
    const std::string name = prefix + ".filter" + std::to_string(f.width);
    banks_.push_back({f.width, &params.add(name + ".w", {f.width * dim, f.count}),
                      &params.add(name + ".b", {1, f.count})});
  }
  const std::size_t nf = config_.filter_count();
  const std::size_t proj = config_.projection_dim;
  proj_w_ = &params.add(prefix + ".proj.w", {nf, proj});
  proj_b_ = &params.add(prefix + ".proj.b", {1, proj});
  for (std::size_t l = 0; l < config_.highway_layers; ++l) {
    const std::string name = prefix + ".highway" + std::to_string(l);
    highways_.push_back({&params.add(name + ".wh", {proj, proj}), &params.add(name + ".bh", {1, proj}),
                         &params.add(name + ".wt", {proj, proj}), &params.add(name + ".bt", {1, proj})});
  }
}

void Reader::initialize(std::mt19937_64& rng, Real sigma) {
  char_table_->value = init_gaussian(char_table_->value.shape(), rng, sigma);
  for (FilterBank& bank : banks_) {
    bank.weights->value = init_gaussian(bank.weights->value.shape(), rng, sigma);
    bank.bias->value.fill(0.0);
  }
  proj_w_->value = init_gaussian(proj_w_->value.shape(), rng, sigma);
  proj_b_->value.fill(0.0);
  for (Highway& h : highways_) {
    h.w_h->value = init_gaussian(h.w_h->value.shape(), rng, sigma);
    h.b_h->value.fill(0.0);
    h.w_t->value = init_gaussian(h.w_t->value.shape(), rng, sigma);
    h.b_t->value.fill(config_.highway_gate_bias);
  }
}

Var Reader::embed_chars(Tape& tape, std::span<const int> char_ids) const {
  return ops::gather_rows(tape.param(*char_table_), char_ids);
}

Var Reader::filter_responses(Tape& tape, Var chars) const {
  std::vector<Var> parts;
  parts.reserve(banks_.size());
  for (const FilterBank& bank : banks_) {
    Var conv = ops::conv_over_time(chars, tape.param(*bank.weights), bank.width);
    // The bias is constant over positions and tanh is monotone, so taking the
    // max first gives the same value and gradient as max(tanh(conv + b)).
    Var peak = ops::max_over_time(conv);
    parts.push_back(ops::tanh(ops::add(peak, tape.param(*bank.bias))));
  }
  return parts.size() == 1 ? parts.front() : ops::concat(parts, 1);
}

Var Reader::transform(Tape& tape, Var responses) const {
  Var x = ops::add(ops::matmul(responses, tape.param(*proj_w_)), tape.param(*proj_b_));
  for (const Highway& h : highways_) {
    Var g = ops::tanh(ops::add(ops::matmul(x, tape.param(*h.w_h)), tape.param(*h.b_h)));
    Var t = ops::sigmoid(ops::add(ops::matmul(x, tape.param(*h.w_t)), tape.param(*h.b_t)));
    // t * g + (1 - t) * x
    x = ops::add(x, ops::mul(t, ops::sub(g, x)));
  }
  return x;
}

Var Reader::responses_for(Tape& tape, std::span<const int> char_ids) const {
  const std::size_t width = config_.max_width();
  if (char_ids.size() >= width) return filter_responses(tape, embed_chars(tape, char_ids));
  std::vector<int> padded(char_ids.begin(), char_ids.end());
  padded.resize(width, Lexicon::kPad);
  return filter_responses(tape, embed_chars(tape, padded));
}

Var Reader::forward(Tape& tape, std::span<const int> char_ids) const {
  return transform(tape, responses_for(tape, char_ids));
}

Var Reader::forward_words(Tape& tape, const std::vector<std::vector<int>>& words) const {
  std::vector<Var> rows;
  rows.reserve(words.size());
  for (const auto& w : words) rows.push_back(responses_for(tape, w));
  return transform(tape, rows.size() == 1 ? rows.front() : ops::concat(rows, 0));
}

}  // namespace podep
