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
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace podep {

using Real = double;
using Shape = std::vector<std::size_t>;

std::string shape_string(const Shape& shape);
std::size_t shape_size(const Shape& shape);

// Dense row-major array. Most of the network works on rank-2 tensors where a
// row is one time step (character, word or location) and columns are features.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, Real fill = 0.0);
  Tensor(Shape shape, std::vector<Real> data);

  static Tensor matrix(std::size_t rows, std::size_t cols, Real fill = 0.0) {
    return Tensor({rows, cols}, fill);
  }
  static Tensor row(std::initializer_list<Real> values);
  static Tensor scalar(Real value) { return Tensor({1, 1}, std::vector<Real>{value}); }

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  // Rank-2 accessors; throw ShapeError on other ranks.
  std::size_t rows() const;
  std::size_t cols() const;

  Real& operator[](std::size_t i) { return data_[i]; }
  const Real& operator[](std::size_t i) const { return data_[i]; }
  Real& at(std::size_t r, std::size_t c) { return data_[r * shape_[1] + c]; }
  const Real& at(std::size_t r, std::size_t c) const { return data_[r * shape_[1] + c]; }

  std::span<Real> data() { return data_; }
  std::span<const Real> data() const { return data_; }
  std::span<Real> row_span(std::size_t r) { return {data_.data() + r * cols(), cols()}; }
  std::span<const Real> row_span(std::size_t r) const {
    return {data_.data() + r * cols(), cols()};
  }

  Real item() const;
  void fill(Real value);
  Tensor reshaped(Shape shape) const;
  bool all_finite() const;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_;
  std::vector<Real> data_;
};

}  // namespace podep
