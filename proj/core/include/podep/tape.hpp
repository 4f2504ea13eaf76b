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
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "podep/tensor.hpp"

namespace podep {

// A named learnable array with its gradient accumulator.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
};

// Owns every learnable array of a model. Addresses are stable, so network
// modules keep raw pointers into the set. Declaration order is the
// serialization order.
class ParameterSet {
 public:
  ParameterSet() = default;
  ParameterSet(const ParameterSet&) = delete;
  ParameterSet& operator=(const ParameterSet&) = delete;
  ParameterSet(ParameterSet&&) = default;
  ParameterSet& operator=(ParameterSet&&) = default;

  Parameter& add(std::string name, Shape shape);
  Parameter* find(std::string_view name);
  const Parameter* find(std::string_view name) const;
  Parameter& at(std::string_view name);

  std::size_t size() const { return params_.size(); }
  Parameter& operator[](std::size_t i) { return *params_[i]; }
  const Parameter& operator[](std::size_t i) const { return *params_[i]; }

  void zero_grad();
  std::size_t element_count() const;
  std::vector<Tensor> snapshot() const;
  void restore(const std::vector<Tensor>& values);

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
};

class Tape;

// Handle to a value recorded on a Tape.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, int index) : tape_(tape), index_(index) {}

  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  Tape& tape() const { return *tape_; }
  int index() const { return index_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  Tape* tape_ = nullptr;
  int index_ = -1;
};

struct TapeOptions {
  bool train = false;
#ifdef NDEBUG
  bool check_finite = false;
#else
  bool check_finite = true;
#endif
  // Source of dropout masks; required when train is set and dropout is used.
  std::mt19937_64* rng = nullptr;
};

// Records executed ops in order and replays them backwards. One Tape per
// forward pass; confined to the thread that created it.
class Tape {
 public:
  using Backprop = std::function<void(Tape&, int self)>;

  explicit Tape(TapeOptions options = {});
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor value);
  // Parameters are registered once per tape; repeated calls return the same node.
  Var param(Parameter& p);

  // Appends an op result. backprop is dropped when no input needs a gradient.
  Var record(std::string_view op, Tensor value, std::initializer_list<Var> inputs, Backprop backprop);
  Var record(std::string_view op, Tensor value, const std::vector<Var>& inputs, Backprop backprop);

  const Tensor& value(int i) const;
  Tensor& grad(int i);
  bool has_grad(int i) const { return !nodes_[i].grad.empty(); }
  bool needs_grad(int i) const { return nodes_[i].needs_grad; }
  bool needs_grad(Var v) const { return nodes_[v.index()].needs_grad; }

  // Propagates d(loss)/d(node) backwards and adds parameter gradients into
  // Parameter::grad. May be called once per tape.
  void backward(Var loss);

  bool training() const { return options_.train; }
  std::mt19937_64& rng();
  std::size_t size() const { return nodes_.size(); }
  std::size_t ops_replayed() const { return ops_replayed_; }

 private:
  struct Node {
    std::string_view op;
    Tensor value;
    const Tensor* external = nullptr;
    Tensor grad;
    Backprop backprop;
    Parameter* param = nullptr;
    bool needs_grad = false;
  };

  Var push(Node node);

  TapeOptions options_;
  std::vector<Node> nodes_;
  std::vector<std::pair<Parameter*, int>> param_nodes_;
  bool backward_done_ = false;
  std::size_t ops_replayed_ = 0;
};

inline const Tensor& Var::value() const { return tape_->value(index_); }

}  // namespace podep
