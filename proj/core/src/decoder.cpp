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

#include "podep/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "podep/errors.hpp"

namespace podep {
namespace {

constexpr Real kNegInf = -std::numeric_limits<Real>::infinity();

using Square = std::vector<std::vector<Real>>;  // w[dependent][head]

// Returns head per node, head[0] = -1.
std::vector<int> chu_liu_edmonds(const Square& w) {
  const int n = static_cast<int>(w.size());
  std::vector<int> head(static_cast<std::size_t>(n), -1);
  for (int d = 1; d < n; ++d) {
    int best = -1;
    for (int h = 0; h < n; ++h) {
      if (h == d) continue;
      if (best < 0 || w[d][h] > w[d][best]) best = h;
    }
    head[d] = best;
  }

  // Find one cycle among the chosen edges.
  std::vector<int> color(static_cast<std::size_t>(n), 0);
  std::vector<int> cycle;
  color[0] = 2;
  for (int start = 1; start < n && cycle.empty(); ++start) {
    int v = start;
    while (color[v] == 0) {
      color[v] = 1;
      v = head[v];
    }
    if (color[v] == 1) {
      int u = v;
      do {
        cycle.push_back(u);
        u = head[u];
      } while (u != v);
    }
    for (int u = start; color[u] == 1; u = head[u]) color[u] = 2;
  }
  if (cycle.empty()) return head;

  std::vector<bool> in_cycle(static_cast<std::size_t>(n), false);
  for (int v : cycle) in_cycle[v] = true;

  // Contract the cycle into a single node placed last.
  std::vector<int> to_new(static_cast<std::size_t>(n), -1);
  std::vector<int> to_old;
  for (int v = 0; v < n; ++v) {
    if (!in_cycle[v]) {
      to_new[v] = static_cast<int>(to_old.size());
      to_old.push_back(v);
    }
  }
  const int c = static_cast<int>(to_old.size());
  const int m = c + 1;
  Square contracted(static_cast<std::size_t>(m), std::vector<Real>(static_cast<std::size_t>(m), kNegInf));
  std::vector<int> leave_from(static_cast<std::size_t>(n), -1);  // cycle member heading an outside dependent
  std::vector<int> enter_at(static_cast<std::size_t>(n), -1);    // cycle member entered from an outside head

  for (int d = 1; d < n; ++d) {
    if (in_cycle[d]) continue;
    for (int h = 0; h < n; ++h) {
      if (h == d || in_cycle[h]) continue;
      contracted[to_new[d]][to_new[h]] = w[d][h];
    }
    int best = -1;
    for (int h : cycle) {
      if (best < 0 || w[d][h] > w[d][best] || (w[d][h] == w[d][best] && h < best)) best = h;
    }
    contracted[to_new[d]][c] = w[d][best];
    leave_from[d] = best;
  }
  for (int h = 0; h < n; ++h) {
    if (in_cycle[h]) continue;
    int best = -1;
    Real best_gain = kNegInf;
    for (int d : cycle) {
      const Real gain = w[d][h] - w[d][head[d]];
      if (best < 0 || gain > best_gain || (gain == best_gain && d < best)) {
        best = d;
        best_gain = gain;
      }
    }
    contracted[c][to_new[h]] = best_gain;
    enter_at[h] = best;
  }

  const std::vector<int> sub = chu_liu_edmonds(contracted);

  std::vector<int> result(static_cast<std::size_t>(n), -1);
  for (int d = 1; d < n; ++d) {
    if (in_cycle[d]) {
      result[d] = head[d];
      continue;
    }
    const int h = sub[to_new[d]];
    result[d] = h == c ? leave_from[d] : to_old[h];
  }
  const int outside = to_old[sub[c]];
  result[enter_at[outside]] = outside;
  return result;
}

Square square_from(const Tensor& scores) {
  const std::size_t n = scores.rows();
  Square w(n + 1, std::vector<Real>(n + 1, kNegInf));
  for (std::size_t d = 1; d <= n; ++d) {
    for (std::size_t h = 0; h <= n; ++h) {
      if (h != d) w[d][h] = scores.at(d - 1, h);
    }
  }
  return w;
}

void require_score_shape(const char* what, const Tensor& m) {
  if (m.rank() != 2 || m.cols() != m.rows() + 1) {
    throw ShapeError(std::string(what) + ": expected an [n, n + 1] matrix, got " + shape_string(m.shape()));
  }
}

}  // namespace

std::string_view to_string(DecodeMode mode) {
  switch (mode) {
    case DecodeMode::Greedy: return "greedy";
    case DecodeMode::GreedyThenCle: return "greedy_then_cle";
    case DecodeMode::Cle: return "cle";
  }
  return "greedy_then_cle";
}

DecodeMode decode_mode_from_string(std::string_view text) {
  if (text == "greedy") return DecodeMode::Greedy;
  if (text == "greedy_then_cle") return DecodeMode::GreedyThenCle;
  if (text == "cle") return DecodeMode::Cle;
  throw std::invalid_argument("unknown decode mode '" + std::string(text) + "'");
}

std::vector<int> greedy_decode(const Tensor& probs) {
  require_score_shape("greedy_decode", probs);
  const std::size_t n = probs.rows();
  std::vector<int> heads(n, 0);
  for (std::size_t w = 0; w < n; ++w) {
    std::size_t best = 0;
    for (std::size_t l = 1; l <= n; ++l) {
      if (l == w + 1) continue;
      if (probs.at(w, l) > probs.at(w, best)) best = l;
    }
    heads[w] = static_cast<int>(best);
  }
  return heads;
}

std::vector<std::vector<int>> find_cycles(std::span<const int> heads) {
  const int n = static_cast<int>(heads.size());
  auto head_of = [&](int v) { return heads[static_cast<std::size_t>(v - 1)]; };
  std::vector<int> color(static_cast<std::size_t>(n) + 1, 0);
  color[0] = 2;
  std::vector<std::vector<int>> cycles;
  for (int start = 1; start <= n; ++start) {
    int v = start;
    while (v >= 0 && v <= n && color[v] == 0) {
      color[v] = 1;
      v = head_of(v);
    }
    if (v >= 0 && v <= n && color[v] == 1) {
      std::vector<int> cycle;
      int u = v;
      do {
        cycle.push_back(u);
        u = head_of(u);
      } while (u != v);
      std::sort(cycle.begin(), cycle.end());
      cycles.push_back(std::move(cycle));
    }
    for (int u = start; u >= 1 && u <= n && color[u] == 1; u = head_of(u)) color[u] = 2;
  }
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

bool is_arborescence(std::span<const int> heads) {
  const int n = static_cast<int>(heads.size());
  for (int w = 1; w <= n; ++w) {
    const int h = heads[static_cast<std::size_t>(w - 1)];
    if (h < 0 || h > n || h == w) return false;
  }
  return find_cycles(heads).empty();
}

std::size_t root_children(std::span<const int> heads) {
  return static_cast<std::size_t>(std::count(heads.begin(), heads.end(), 0));
}

Real tree_score(const Tensor& scores, std::span<const int> heads) {
  Real total = 0.0;
  for (std::size_t w = 0; w < heads.size(); ++w) total += scores.at(w, static_cast<std::size_t>(heads[w]));
  return total;
}

std::vector<int> cle_decode(const Tensor& scores, bool single_root) {
  require_score_shape("cle_decode", scores);
  const std::size_t n = scores.rows();
  if (n == 0) throw std::invalid_argument("cle_decode: empty sentence");
  Square w = square_from(scores);
  auto solve = [](const Square& sq) {
    std::vector<int> h = chu_liu_edmonds(sq);
    return std::vector<int>(h.begin() + 1, h.end());
  };
  std::vector<int> best = solve(w);
  if (!single_root || root_children(best) <= 1) return best;

  // Try every word as the only root child and keep the best tree.
  Real best_score = kNegInf;
  for (std::size_t c = 1; c <= n; ++c) {
    Square constrained = w;
    for (std::size_t d = 1; d <= n; ++d) {
      if (d != c) constrained[d][0] = kNegInf;
    }
    std::vector<int> heads = solve(constrained);
    const Real s = tree_score(scores, heads);
    if (s > best_score) {
      best_score = s;
      best = std::move(heads);
    }
  }
  return best;
}

Tensor log_scores(const Tensor& probs) {
  Tensor out = probs;
  for (Real& v : out.data()) v = std::log(std::max(v, 1e-300));
  return out;
}

ParseResult decode(const Tensor& probs, DecodeMode mode, bool single_root) {
  require_score_shape("decode", probs);
  ParseResult result;
  if (mode == DecodeMode::Cle) {
    result.heads = cle_decode(log_scores(probs), single_root);
    return result;
  }
  result.heads = greedy_decode(probs);
  if (mode == DecodeMode::Greedy) return result;
  const bool cyclic = !find_cycles(result.heads).empty();
  const bool multi_root = single_root && root_children(result.heads) != 1;
  if (cyclic || multi_root) {
    result.heads = cle_decode(log_scores(probs), single_root);
    result.used_fallback = true;
  }
  return result;
}

}  // namespace podep
