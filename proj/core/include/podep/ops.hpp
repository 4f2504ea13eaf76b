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
#include <span>
#include <vector>

#include "podep/tape.hpp"

// Differentiable operations recorded on a Tape. Inputs are rank-2 tensors
// unless stated otherwise; shape mismatches throw ShapeError naming the op.
namespace podep::ops {

Var matmul(Var a, Var b);
// Elementwise sum; b may also be a single row broadcast over the rows of a.
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, Real factor);

// axis 0 stacks rows, axis 1 joins columns.
Var concat(const std::vector<Var>& parts, int axis);
Var slice(Var a, int axis, std::size_t begin, std::size_t end);
Var reshape(Var a, Shape shape);

Var tanh(Var a);
Var sigmoid(Var a);
Var softmax(Var a, int axis = 1);

// Column-wise maximum over rows: [T, d] -> [1, d]. Ties go to the first row.
Var max_over_time(Var a);

// Valid cross-correlation along rows. input [T, c], filters [width * c, f]
// -> [T - width + 1, f]. Filter row i * c + k multiplies channel k at offset i.
Var conv_over_time(Var input, Var filters, std::size_t width);

// Groups of `pieces` consecutive columns reduced by max: [m, u * pieces] -> [m, u].
Var maxout(Var a, std::size_t pieces);

// Inverted dropout: scales kept activations by 1 / (1 - rate) while the tape
// is in training mode, identity otherwise.
Var dropout(Var a, Real rate);

enum class Reduction { Mean, Sum };
inline constexpr int kIgnoreTarget = -1;

// Negative log-likelihood of targets[r] under softmax(logits row r). Rows with
// target kIgnoreTarget are skipped; Mean divides by the supervised row count.
Var cross_entropy(Var logits, std::span<const int> targets, Reduction reduction = Reduction::Mean);
Var cross_entropy(Var logits, int target);

// Row lookup: table [V, d], ids -> [ids.size(), d].
Var gather_rows(Var table, std::span<const int> ids);

// All row pairs: a [n, h], b [m, h] -> [n * m, h], row i * m + j = a_i + b_j.
Var pairwise_add(Var a, Var b);

Var sum(Var a);

// Passes the value through and blocks every gradient into a.
Var stop_gradient(Var a);

}  // namespace podep::ops
