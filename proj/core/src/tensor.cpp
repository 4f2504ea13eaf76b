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

#include "podep/tensor.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "podep/errors.hpp"

namespace podep {

std::string shape_string(const Shape& shape) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out << 'x';
    out << shape[i];
  }
  out << ']';
  return out.str();
}

std::size_t shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

Tensor::Tensor(Shape shape, Real fill) : shape_(std::move(shape)), data_(shape_size(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<Real> data) : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != shape_size(shape_)) {
    throw ShapeError("tensor: " + std::to_string(data_.size()) + " values for shape " +
                     shape_string(shape_));
  }
}

Tensor Tensor::row(std::initializer_list<Real> values) {
  return Tensor({1, values.size()}, std::vector<Real>(values));
}

std::size_t Tensor::rows() const {
  if (rank() != 2) throw ShapeError("rows(): tensor of shape " + shape_string(shape_) + " is not a matrix");
  return shape_[0];
}

std::size_t Tensor::cols() const {
  if (rank() != 2) throw ShapeError("cols(): tensor of shape " + shape_string(shape_) + " is not a matrix");
  return shape_[1];
}

Real Tensor::item() const {
  if (data_.size() != 1) throw ShapeError("item(): tensor of shape " + shape_string(shape_) + " is not a scalar");
  return data_[0];
}

void Tensor::fill(Real value) { std::fill(data_.begin(), data_.end(), value); }

Tensor Tensor::reshaped(Shape shape) const {
  if (shape_size(shape) != data_.size()) {
    throw ShapeError("reshape: cannot view " + shape_string(shape_) + " as " + shape_string(shape));
  }
  return Tensor(std::move(shape), data_);
}

bool Tensor::all_finite() const {
  for (Real v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace podep
