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

#include "podep/tape.hpp"

#include <algorithm>
#include <stdexcept>

#include "podep/errors.hpp"

namespace podep {

Parameter& ParameterSet::add(std::string name, Shape shape) {
  if (find(name)) throw std::invalid_argument("duplicate parameter '" + name + "'");
  auto p = std::make_unique<Parameter>();
  p->name = std::move(name);
  p->value = Tensor(shape);
  p->grad = Tensor(std::move(shape));
  params_.push_back(std::move(p));
  return *params_.back();
}

Parameter* ParameterSet::find(std::string_view name) {
  for (auto& p : params_) {
    if (p->name == name) return p.get();
  }
  return nullptr;
}

const Parameter* ParameterSet::find(std::string_view name) const {
  for (const auto& p : params_) {
    if (p->name == name) return p.get();
  }
  return nullptr;
}

Parameter& ParameterSet::at(std::string_view name) {
  Parameter* p = find(name);
  if (!p) throw std::out_of_range("no parameter named '" + std::string(name) + "'");
  return *p;
}

void ParameterSet::zero_grad() {
  for (auto& p : params_) p->grad.fill(0.0);
}

std::size_t ParameterSet::element_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p->value.size();
  return n;
}

std::vector<Tensor> ParameterSet::snapshot() const {
  std::vector<Tensor> out;
  out.reserve(params_.size());
  for (const auto& p : params_) out.push_back(p->value);
  return out;
}

void ParameterSet::restore(const std::vector<Tensor>& values) {
  if (values.size() != params_.size()) throw std::invalid_argument("restore: parameter count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].shape() != params_[i]->value.shape()) {
      throw ShapeError("restore: shape mismatch for '" + params_[i]->name + "'");
    }
    params_[i]->value = values[i];
  }
}

Tape::Tape(TapeOptions options) : options_(options) { nodes_.reserve(256); }

Var Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size() - 1));
}

Var Tape::constant(Tensor value) {
  Node n;
  n.op = "constant";
  n.value = std::move(value);
  return push(std::move(n));
}

Var Tape::param(Parameter& p) {
  for (const auto& [param, index] : param_nodes_) {
    if (param == &p) return Var(this, index);
  }
  Node n;
  n.op = "param";
  n.external = &p.value;
  n.param = &p;
  n.needs_grad = true;
  Var v = push(std::move(n));
  param_nodes_.emplace_back(&p, v.index());
  return v;
}

Var Tape::record(std::string_view op, Tensor value, std::initializer_list<Var> inputs, Backprop backprop) {
  return record(op, std::move(value), std::vector<Var>(inputs), std::move(backprop));
}

Var Tape::record(std::string_view op, Tensor value, const std::vector<Var>& inputs, Backprop backprop) {
  if (options_.check_finite && !value.all_finite()) {
    throw NumericError(std::string(op) + ": non-finite value in output of shape " + shape_string(value.shape()));
  }
  Node n;
  n.op = op;
  n.value = std::move(value);
  for (const Var& in : inputs) {
    if (&in.tape() != this) throw std::invalid_argument(std::string(op) + ": input recorded on another tape");
    n.needs_grad = n.needs_grad || nodes_[in.index()].needs_grad;
  }
  if (n.needs_grad) n.backprop = std::move(backprop);
  return push(std::move(n));
}

const Tensor& Tape::value(int i) const {
  const Node& n = nodes_[i];
  return n.external ? *n.external : n.value;
}

Tensor& Tape::grad(int i) {
  Node& n = nodes_[i];
  if (n.grad.empty()) n.grad = Tensor(value(i).shape());
  return n.grad;
}

std::mt19937_64& Tape::rng() {
  if (!options_.rng) throw std::logic_error("tape: training-mode randomness requested without an rng");
  return *options_.rng;
}

void Tape::backward(Var loss) {
  if (&loss.tape() != this) throw std::invalid_argument("backward: loss belongs to another tape");
  if (loss.value().size() != 1) {
    throw ShapeError("backward: loss must be a scalar, got shape " + shape_string(loss.shape()));
  }
  if (backward_done_) throw std::logic_error("backward: tape already replayed");
  backward_done_ = true;
  if (!nodes_[loss.index()].needs_grad) return;

  grad(loss.index()).fill(1.0);
  for (int i = loss.index(); i >= 0; --i) {
    Node& n = nodes_[i];
    if (n.grad.empty() || !n.backprop) continue;
    n.backprop(*this, i);
    ++ops_replayed_;
  }
  for (const auto& [param, index] : param_nodes_) {
    const Tensor& g = nodes_[index].grad;
    if (g.empty()) continue;
    if (options_.check_finite && !g.all_finite()) {
      throw NumericError("backward: non-finite gradient for parameter '" + param->name + "'");
    }
    auto dst = param->grad.data();
    auto src = g.data();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
  }
}

}  // namespace podep
