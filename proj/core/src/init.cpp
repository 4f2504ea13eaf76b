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

#include "podep/init.hpp"

#include <cmath>
#include <vector>

#include "podep/errors.hpp"

namespace podep {

Tensor init_gaussian(const Shape& shape, std::mt19937_64& rng, Real sigma) {
  std::normal_distribution<Real> normal(0.0, sigma);
  Tensor t(shape);
  for (Real& v : t.data()) v = normal(rng);
  return t;
}

Tensor init_orthogonal(const Shape& shape, std::mt19937_64& rng) {
  if (shape.size() != 2) throw ShapeError("init_orthogonal: expected a matrix shape, got " + shape_string(shape));
  const std::size_t rows = shape[0], cols = shape[1];
  // Orthonormalize `count` vectors of length `len`: the columns when the
  // matrix is tall, the rows when it is wide.
  const bool by_columns = rows >= cols;
  const std::size_t count = by_columns ? cols : rows;
  const std::size_t len = by_columns ? rows : cols;

  std::normal_distribution<Real> normal(0.0, 1.0);
  std::vector<std::vector<Real>> basis;
  basis.reserve(count);
  while (basis.size() < count) {
    std::vector<Real> v(len);
    for (Real& x : v) x = normal(rng);
    // Two passes of modified Gram-Schmidt keep the residual at round-off level.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) {
        Real dot = 0.0;
        for (std::size_t i = 0; i < len; ++i) dot += v[i] * q[i];
        for (std::size_t i = 0; i < len; ++i) v[i] -= dot * q[i];
      }
    }
    Real norm = 0.0;
    for (Real x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-8) continue;  // numerically dependent draw; resample
    for (Real& x : v) x /= norm;
    basis.push_back(std::move(v));
  }

  Tensor out = Tensor::matrix(rows, cols);
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t i = 0; i < len; ++i) {
      if (by_columns) out.at(i, k) = basis[k][i];
      else out.at(k, i) = basis[k][i];
    }
  }
  return out;
}

Tensor init_learned_state(std::size_t size) { return Tensor::matrix(1, size); }

}  // namespace podep
