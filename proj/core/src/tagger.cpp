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

#include "podep/tagger.hpp"

#include <stdexcept>

#include "podep/errors.hpp"
#include "podep/init.hpp"
#include "podep/ops.hpp"

namespace podep {

Gru::Gru(std::size_t input, std::size_t hidden, ParameterSet& params, const std::string& prefix)
    : hidden_(hidden),
      w_(&params.add(prefix + ".w", {input, 3 * hidden})),
      b_(&params.add(prefix + ".b", {1, 3 * hidden})),
      u_z_(&params.add(prefix + ".uz", {hidden, hidden})),
      u_r_(&params.add(prefix + ".ur", {hidden, hidden})),
      u_c_(&params.add(prefix + ".uc", {hidden, hidden})),
      h0_(&params.add(prefix + ".h0", {1, hidden})) {}

void Gru::initialize(std::mt19937_64& rng, Real sigma) {
  w_->value = init_gaussian(w_->value.shape(), rng, sigma);
  b_->value.fill(0.0);
  u_z_->value = init_orthogonal(u_z_->value.shape(), rng);
  u_r_->value = init_orthogonal(u_r_->value.shape(), rng);
  u_c_->value = init_orthogonal(u_c_->value.shape(), rng);
  h0_->value = init_learned_state(hidden_);
}

Var Gru::step_projected(Tape& tape, Var x_proj, Var h_prev) const {
  const std::size_t h = hidden_;
  Var z = ops::sigmoid(ops::add(ops::slice(x_proj, 1, 0, h), ops::matmul(h_prev, tape.param(*u_z_))));
  Var r = ops::sigmoid(ops::add(ops::slice(x_proj, 1, h, 2 * h), ops::matmul(h_prev, tape.param(*u_r_))));
  Var c = ops::tanh(
      ops::add(ops::slice(x_proj, 1, 2 * h, 3 * h), ops::matmul(ops::mul(r, h_prev), tape.param(*u_c_))));
  // (1 - z) * h + z * c
  return ops::add(h_prev, ops::mul(z, ops::sub(c, h_prev)));
}

Var Gru::step(Tape& tape, Var x, Var h_prev) const {
  Var x_proj = ops::add(ops::matmul(x, tape.param(*w_)), tape.param(*b_));
  return step_projected(tape, x_proj, h_prev);
}

Var Gru::run(Tape& tape, Var inputs, bool reverse) const {
  const std::size_t steps = inputs.rows();
  if (steps == 0) throw ShapeError("gru: empty input sequence");
  Var projected = ops::add(ops::matmul(inputs, tape.param(*w_)), tape.param(*b_));
  std::vector<Var> states(steps);
  Var h = initial_state(tape);
  for (std::size_t k = 0; k < steps; ++k) {
    const std::size_t t = reverse ? steps - 1 - k : k;
    h = step_projected(tape, ops::slice(projected, 0, t, t + 1), h);
    states[t] = h;
  }
  return steps == 1 ? states.front() : ops::concat(states, 0);
}

BiGruLayer::BiGruLayer(std::size_t input, std::size_t hidden, ParameterSet& params, const std::string& prefix)
    : fwd_(input, hidden, params, prefix + ".fwd"), bwd_(input, hidden, params, prefix + ".bwd") {}

void BiGruLayer::initialize(std::mt19937_64& rng, Real sigma) {
  fwd_.initialize(rng, sigma);
  bwd_.initialize(rng, sigma);
}

Var BiGruLayer::forward(Tape& tape, Var inputs) const {
  return ops::add(fwd_.run(tape, inputs, false), bwd_.run(tape, inputs, true));
}

Tagger::Tagger(const TaggerConfig& config, std::size_t input_dim, ParameterSet& params, const std::string& prefix)
    : config_(config), input_dim_(input_dim) {
  if (config_.layers == 0) throw std::invalid_argument("tagger: at least one layer required");
  layers_.reserve(config_.layers);
  for (std::size_t l = 0; l < config_.layers; ++l) {
    layers_.emplace_back(l == 0 ? input_dim : config_.hidden, config_.hidden, params,
                         prefix + ".layer" + std::to_string(l));
  }
}

void Tagger::initialize(std::mt19937_64& rng, Real sigma) {
  for (BiGruLayer& layer : layers_) layer.initialize(rng, sigma);
}

std::size_t Tagger::branch_dim() const { return config_.branch_layer() == 0 ? input_dim_ : config_.hidden; }

Tagger::Output Tagger::forward(Tape& tape, Var embeddings, Real dropout) const {
  const std::size_t branch_at = config_.branch_layer();
  Output out;
  Var x = embeddings;
  if (branch_at == 0) out.branch = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    x = ops::dropout(layers_[l].forward(tape, x), dropout);
    if (branch_at == l + 1) out.branch = x;
  }
  out.annotations = x;
  return out;
}

PosHead::PosHead(const std::vector<AttributeVocab>& attributes, std::size_t input_dim, ParameterSet& params,
                 const std::string& prefix) {
  for (const AttributeVocab& a : attributes) {
    const std::string name = prefix + "." + a.name();
    classifiers_.push_back({&params.add(name + ".w", {input_dim, a.size()}), &params.add(name + ".b", {1, a.size()})});
  }
}

void PosHead::initialize(std::mt19937_64& rng, Real sigma) {
  for (Classifier& c : classifiers_) {
    c.w->value = init_gaussian(c.w->value.shape(), rng, sigma);
    c.b->value.fill(0.0);
  }
}

std::vector<Var> PosHead::logits(Tape& tape, Var branch) const {
  std::vector<Var> out;
  out.reserve(classifiers_.size());
  for (const Classifier& c : classifiers_) {
    out.push_back(ops::add(ops::matmul(branch, tape.param(*c.w)), tape.param(*c.b)));
  }
  return out;
}

std::vector<Var> PosHead::distributions(Tape& tape, Var branch) const {
  std::vector<Var> out = logits(tape, branch);
  for (Var& v : out) v = ops::softmax(v, 1);
  return out;
}

Var PosHead::loss(Tape& tape, Var branch, const std::vector<std::vector<int>>& targets) const {
  if (targets.size() != classifiers_.size()) {
    throw std::invalid_argument("pos_head: " + std::to_string(targets.size()) + " target rows for " +
                                std::to_string(classifiers_.size()) + " attributes");
  }
  std::vector<Var> logit_rows = logits(tape, branch);
  std::size_t supervised = 0;
  std::vector<Var> terms;
  for (std::size_t a = 0; a < classifiers_.size(); ++a) {
    std::size_t count = 0;
    for (int t : targets[a]) count += t != ops::kIgnoreTarget;
    if (count == 0) continue;
    supervised += count;
    terms.push_back(ops::cross_entropy(logit_rows[a], targets[a], ops::Reduction::Sum));
  }
  if (terms.empty()) return tape.constant(Tensor::scalar(0.0));
  Var total = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) total = ops::add(total, terms[i]);
  return ops::scale(total, 1.0 / static_cast<Real>(supervised));
}

}  // namespace podep
