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

#include "podep/parser_head.hpp"

#include "podep/errors.hpp"
#include "podep/init.hpp"
#include "podep/ops.hpp"

namespace podep {

ParserHead::ParserHead(const ScorerConfig& config, std::size_t annotation_dim, std::size_t label_count,
                       ParameterSet& params, const std::string& prefix)
    : config_(config), label_count_(label_count) {
  const std::size_t d = annotation_dim;
  const std::size_t sh = config_.hidden;
  const std::size_t lh = config_.label_hidden * config_.maxout_pieces;
  root_ = &params.add(prefix + ".root", {1, d});
  score_dep_ = &params.add(prefix + ".scorer.dep", {d, sh});
  score_loc_ = &params.add(prefix + ".scorer.loc", {d, sh});
  score_b_ = &params.add(prefix + ".scorer.b", {1, sh});
  score_v_ = &params.add(prefix + ".scorer.v", {sh, 1});
  label_w_ = &params.add(prefix + ".labeler.w", {2 * d, lh});
  label_b_ = &params.add(prefix + ".labeler.b", {1, lh});
  out_w_ = &params.add(prefix + ".labeler.out.w", {config_.label_hidden, label_count});
  out_b_ = &params.add(prefix + ".labeler.out.b", {1, label_count});
}

void ParserHead::initialize(std::mt19937_64& rng, Real sigma) {
  root_->value = init_gaussian(root_->value.shape(), rng, sigma);
  score_dep_->value = init_gaussian(score_dep_->value.shape(), rng, sigma);
  score_loc_->value = init_gaussian(score_loc_->value.shape(), rng, sigma);
  score_b_->value.fill(0.0);
  score_v_->value = init_gaussian(score_v_->value.shape(), rng, sigma);
  label_w_->value = init_gaussian(label_w_->value.shape(), rng, sigma);
  label_b_->value.fill(0.0);
  out_w_->value = init_gaussian(out_w_->value.shape(), rng, sigma);
  out_b_->value.fill(0.0);
}

Var ParserHead::with_root(Tape& tape, Var annotations) const {
  return ops::concat({tape.param(*root_), annotations}, 0);
}

Var ParserHead::score(Tape& tape, Var dependent, Var location) const {
  Var pre = ops::add(ops::add(ops::matmul(dependent, tape.param(*score_dep_)),
                              ops::matmul(location, tape.param(*score_loc_))),
                     tape.param(*score_b_));
  return ops::matmul(ops::tanh(pre), tape.param(*score_v_));
}

Var ParserHead::score_matrix(Tape& tape, Var annotations, Var located) const {
  const std::size_t n = annotations.rows();
  const std::size_t m = located.rows();
  if (m != n + 1) {
    throw ShapeError("score_matrix: " + std::to_string(m) + " locations for " + std::to_string(n) + " words");
  }
  Var dep = ops::matmul(annotations, tape.param(*score_dep_));
  Var loc = ops::add(ops::matmul(located, tape.param(*score_loc_)), tape.param(*score_b_));
  Var hidden = ops::tanh(ops::pairwise_add(dep, loc));
  return ops::reshape(ops::matmul(hidden, tape.param(*score_v_)), {n, m});
}

Var ParserHead::head_distribution(Tape&, Var scores) const { return ops::softmax(scores, 1); }

Var ParserHead::label_logits(Tape& tape, Var heads, Var dependents, Real dropout) const {
  Var pre = ops::add(ops::matmul(ops::concat({heads, dependents}, 1), tape.param(*label_w_)), tape.param(*label_b_));
  Var hidden = ops::dropout(ops::maxout(pre, config_.maxout_pieces), dropout);
  return ops::add(ops::matmul(hidden, tape.param(*out_w_)), tape.param(*out_b_));
}

Var ParserHead::label_soft(Tape& tape, Var located, Var probs, Var annotations, Real dropout) const {
  return label_logits(tape, ops::matmul(probs, located), annotations, dropout);
}

Var ParserHead::label_hard(Tape& tape, Var located, std::span<const int> heads, Var annotations,
                           Real dropout) const {
  return label_logits(tape, ops::gather_rows(located, heads), annotations, dropout);
}

}  // namespace podep
