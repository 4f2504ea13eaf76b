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

#include "podep/tensor.hpp"

namespace podep {

// Zero-mean normal entries with the given standard deviation.
Tensor init_gaussian(const Shape& shape, std::mt19937_64& rng, Real sigma = 0.01);

// Matrix with orthonormal rows or columns (whichever are fewer); square
// inputs give QᵀQ = I. Throws ShapeError for anything but rank 2.
Tensor init_orthogonal(const Shape& shape, std::mt19937_64& rng);

// Starting value of a trainable recurrent initial state: a zero row.
Tensor init_learned_state(std::size_t size);

}  // namespace podep
