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

#include <span>
#include <string_view>
#include <vector>

#include "podep/tensor.hpp"

namespace podep {

// Heads are stored per word: heads[w - 1] is the location (0 = root) that
// heads word w. Score and probability matrices are [n, n + 1] with row
// w - 1 for word w and column l for location l.

enum class DecodeMode { Greedy, GreedyThenCle, Cle };
std::string_view to_string(DecodeMode mode);
DecodeMode decode_mode_from_string(std::string_view text);

struct ParseResult {
  std::vector<int> heads;
  std::vector<int> labels;
  bool used_fallback = false;
};

// Best location per row excluding the word itself; ties go to the lowest index.
std::vector<int> greedy_decode(const Tensor& probs);

// Vertex sets (ascending word ids) of every cycle in the head function,
// ordered by smallest member.
std::vector<std::vector<int>> find_cycles(std::span<const int> heads);

// Every word reaches the root and nothing points at itself.
bool is_arborescence(std::span<const int> heads);
std::size_t root_children(std::span<const int> heads);

// Sum of scores(w - 1, heads[w - 1]).
Real tree_score(const Tensor& scores, std::span<const int> heads);

// Maximum spanning arborescence rooted at 0 (Chu-Liu-Edmonds). With
// single_root only one word may attach to the root. Throws
// std::invalid_argument for n = 0.
std::vector<int> cle_decode(const Tensor& scores, bool single_root = false);

// Element-wise log with a floor so zero probabilities stay finite.
Tensor log_scores(const Tensor& probs);

// Heads for one sentence. GreedyThenCle falls back to CLE on cycles (and
// on multiple root children when single_root is set) and flags it.
ParseResult decode(const Tensor& probs, DecodeMode mode, bool single_root = false);

}  // namespace podep
