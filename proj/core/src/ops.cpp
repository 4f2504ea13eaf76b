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

#include "podep/ops.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "podep/errors.hpp"

namespace podep::ops {
namespace {

void require_matrix(const char* op, const Tensor& t) {
  if (t.rank() != 2) throw ShapeError(std::string(op) + ": expected a matrix, got " + shape_string(t.shape()));
}

void require_same(const char* op, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_string(a.shape()) + " vs " +
                     shape_string(b.shape()));
  }
}

void accumulate(Tape& tape, Var input, const Tensor& delta) {
  if (!tape.needs_grad(input)) return;
  auto dst = tape.grad(input.index()).data();
  auto src = delta.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

}  // namespace

Var matmul(Var a, Var b) {
  const Tensor& A = a.value();
  const Tensor& B = b.value();
  require_matrix("matmul", A);
  require_matrix("matmul", B);
  const std::size_t m = A.rows(), k = A.cols(), n = B.cols();
  if (B.rows() != k) {
    throw ShapeError("matmul: inner dimensions differ " + shape_string(A.shape()) + " x " + shape_string(B.shape()));
  }
  Tensor out = Tensor::matrix(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    Real* o = &out.at(i, 0);
    for (std::size_t p = 0; p < k; ++p) {
      const Real av = A.at(i, p);
      if (av == 0.0) continue;
      const Real* br = &B.at(p, 0);
      for (std::size_t j = 0; j < n; ++j) o[j] += av * br[j];
    }
  }
  return a.tape().record("matmul", std::move(out), {a, b}, [a, b, m, k, n](Tape& t, int self) {
    const Tensor& g = t.grad(self);
    const Tensor& A = a.value();
    const Tensor& B = b.value();
    if (t.needs_grad(a)) {
      Tensor& ga = t.grad(a.index());
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
          const Real* br = &B.at(p, 0);
          const Real* gr = &g.at(i, 0);
          Real acc = 0.0;
          for (std::size_t j = 0; j < n; ++j) acc += gr[j] * br[j];
          ga.at(i, p) += acc;
        }
      }
    }
    if (t.needs_grad(b)) {
      Tensor& gb = t.grad(b.index());
      for (std::size_t i = 0; i < m; ++i) {
        const Real* gr = &g.at(i, 0);
        for (std::size_t p = 0; p < k; ++p) {
          const Real av = A.at(i, p);
          if (av == 0.0) continue;
          Real* gbr = &gb.at(p, 0);
          for (std::size_t j = 0; j < n; ++j) gbr[j] += av * gr[j];
        }
      }
    }
  });
}

Var add(Var a, Var b) {
  const Tensor& A = a.value();
  const Tensor& B = b.value();
  if (A.shape() == B.shape()) {
    Tensor out = A;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += B[i];
    return a.tape().record("add", std::move(out), {a, b}, [a, b](Tape& t, int self) {
      const Tensor& g = t.grad(self);
      accumulate(t, a, g);
      accumulate(t, b, g);
    });
  }
  require_matrix("add", A);
  require_matrix("add", B);
  if (B.rows() != 1 || B.cols() != A.cols()) {
    throw ShapeError("add: cannot broadcast " + shape_string(B.shape()) + " onto " + shape_string(A.shape()));
  }
  Tensor out = A;
  const std::size_t rows = A.rows(), cols = A.cols();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out.at(r, c) += B[c];
  }
  return a.tape().record("add", std::move(out), {a, b}, [a, b, rows, cols](Tape& t, int self) {
    const Tensor& g = t.grad(self);
    accumulate(t, a, g);
    if (t.needs_grad(b)) {
      Tensor& gb = t.grad(b.index());
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) gb[c] += g.at(r, c);
      }
    }
  });
}

Var sub(Var a, Var b) {
  require_same("sub", a.value(), b.value());
  Tensor out = a.value();
  const Tensor& B = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= B[i];
  return a.tape().record("sub", std::move(out), {a, b}, [a, b](Tape& t, int self) {
    const Tensor& g = t.grad(self);
    accumulate(t, a, g);
    if (t.needs_grad(b)) {
      Tensor& gb = t.grad(b.index());
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
    }
  });
}

Var mul(Var a, Var b) {
  require_same("mul", a.value(), b.value());
  Tensor out = a.value();
  const Tensor& B = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= B[i];
  return a.tape().record("mul", std::move(out), {a, b}, [a, b](Tape& t, int self) {
    const Tensor& g = t.grad(self);
    if (t.needs_grad(a)) {
      Tensor& ga = t.grad(a.index());
      const Tensor& B = b.value();
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * B[i];
    }
    if (t.needs_grad(b)) {
      Tensor& gb = t.grad(b.index());
      const Tensor& A = a.value();
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * A[i];
    }
  });
}

Var scale(Var a, Real factor) {
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= factor;
  return a.tape().record("scale", std::move(out), {a}, [a, factor](Tape& t, int self) {
    const Tensor& g = t.grad(self);
    Tensor& ga = t.grad(a.index());
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * factor;
  });
}

Var concat(const std::vector<Var>& parts, int axis) {
  if (parts.empty()) throw ShapeError("concat: no inputs");
  if (axis != 0 && axis != 1) throw ShapeError("concat: axis must be 0 or 1");
  for (const Var& p : parts) require_matrix("concat", p.value());
  const Tensor& first = parts.front().value();
  std::size_t rows = 0, cols = 0;
  if (axis == 0) {
    cols = first.cols();
    for (const Var& p : parts) {
      if (p.cols() != cols) {
        throw ShapeError("concat: column mismatch " + shape_string(first.shape()) + " vs " + shape_string(p.shape()));
      }
      rows += p.rows();
    }
  } else {
    rows = first.rows();
    for (const Var& p : parts) {
      if (p.rows() != rows) {
        throw ShapeError("concat: row mismatch " + shape_string(first.shape()) + " vs " + shape_string(p.shape()));
      }
      cols += p.cols();
    }
  }
  Tensor out = Tensor::matrix(rows, cols);
  std::size_t offset = 0;
  for (const Var& p : parts) {
    const Tensor& v = p.value();
    for (std::size_t r = 0; r < v.rows(); ++r) {
      for (std::size_t c = 0; c < v.cols(); ++c) {
        if (axis == 0) out.at(offset + r, c) = v.at(r, c);
        else out.at(r, offset + c) = v.at(r, c);
      }
    }
    offset += axis == 0 ? v.rows() : v.cols();
  }
  Tape& tape = parts.front().tape();
  return tape.record("concat", std::move(out), parts, [parts, axis](Tape& t, int self) {
    const Tensor& g = t.grad(self);
    std::size_t offset = 0;
    for (const Var& p : parts) {
      const std::size_t pr = p.rows(), pc = p.cols();
      if (t.needs_grad(p)) {
        Tensor& gp = t.grad(p.index());
        for (std::size_t r = 0; r < pr; ++r) {
          for (std::size_t c = 0; c < pc; ++c) {
            gp.at(r, c) += axis == 0 ? g.at(offset + r, c) : g.at(r, offset + c);
          }
        }
      }
      offset += axis == 0 ? pr : pc;
    }
  });
}

Var slice(Var a, int axis, std::size_t begin, std::size_t end) {
  const Tensor& A = a.value();
  require_matrix("slice", A);
  if (axis != 0 && axis != 1) throw ShapeError("slice: axis must be 0 or 1");
  const std::size_t extent = axis == 0 ? A.rows() : A.cols();
  if (begin >= end || end > extent) {
    throw ShapeError("slice: range [" + std::to_string(begin) + ", " + std::to_string(end) + ") invalid for " +
                     shape_string(A.shape()));
  }
  const std::size_t rows = axis == 0 ? end - begin : A.rows();
  const std::size_t cols = axis == 1 ? end - begin : A.cols();
  Tensor out = Tensor::matrix(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      out.at(r, c) = axis == 0 ? A.at(begin + r, c) : A.at(r, begin + c);
    }
  }
  return a.tape().record("slice", std::move(out), {a}, [a, axis, begin, rows, cols](Tape& t, int self) {
    const Tensor& g = t.grad(self);
    Tensor& ga = t.grad(a.index());
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        if (axis == 0) ga.at(begin + r, c) += g.at(r, c);
        else ga.at(r, begin + c) += g.at(r, c);
      }
    }
  });
}

Var reshape(Var a, Shape shape) {
  Tensor out = a.value().reshaped(std::move(shape));
  return a.tape().record("reshape", std::move(out), {a}, [a](Tape& t, int self) {
    accumulate(t, a, t.grad(self));
  });
}

Var tanh(Var a) {
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(out[i]);
  return a.tape().record("tanh", std::move(out), {a}, [a](Tape& t, int self) {
    const Tensor& g = t.grad(self);
    const Tensor& y = t.value(self);
    Tensor& ga = t.grad(a.index());
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
  });
}

Var sigmoid(Var a) {
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Real x = out[i];
    // Split by sign so exp never overflows.
    out[i] = x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
  }
  return a.tape().record("sigmoid", std::move(out), {a}, [a](Tape& t, int self) {
    const Tensor& g = t.grad(self);
    const Tensor& y = t.value(self);
    Tensor& ga = t.grad(a.index());
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * y[i] * (1.0 - y[i]);
  });
}

Var softmax(Var a, int axis) {
  const Tensor& A = a.value();
  require_matrix("softmax", A);
  if (axis != 0 && axis != 1) throw ShapeError("softmax: axis must be 0 or 1");
  const std::size_t rows = A.rows(), cols = A.cols();
  const std::size_t groups = axis == 1 ? rows : cols;
  const std::size_t len = axis == 1 ? cols : rows;
  // Element e of group q lives at flat index q * outer + e * inner.
  const std::size_t outer = axis == 1 ? cols : 1;
  const std::size_t inner = axis == 1 ? 1 : cols;
  Tensor out = A;
  for (std::size_t q = 0; q < groups; ++q) {
    Real hi = -INFINITY;
    for (std::size_t e = 0; e < len; ++e) hi = std::max(hi, out[q * outer + e * inner]);
    Real total = 0.0;
    for (std::size_t e = 0; e < len; ++e) {
      Real& v = out[q * outer + e * inner];
      v = std::exp(v - hi);
      total += v;
    }
    for (std::size_t e = 0; e < len; ++e) out[q * outer + e * inner] /= total;
  }
  return a.tape().record("softmax", std::move(out), {a}, [a, groups, len, outer, inner](Tape& t, int self) {
    const Tensor& g = t.grad(self);
    const Tensor& y = t.value(self);
    Tensor& ga = t.grad(a.index());
    for (std::size_t q = 0; q < groups; ++q) {
      Real dot = 0.0;
      for (std::size_t e = 0; e < len; ++e) {
        const std::size_t k = q * outer + e * inner;
        dot += g[k] * y[k];
      }
      for (std::size_t e = 0; e < len; ++e) {
        const std::size_t k = q * outer + e * inner;
        ga[k] += y[k] * (g[k] - dot);
      }
    }
  });
}

Var max_over_time(Var a) {
  const Tensor& A = a.value();
  require_matrix("max_over_time", A);
  const std::size_t rows = A.rows(), cols = A.cols();
  if (rows == 0) throw ShapeError("max_over_time: empty sequence");
  Tensor out = Tensor::matrix(1, cols);
  std::vector<std::size_t> argmax(cols, 0);
  for (std::size_t c = 0; c < cols; ++c) {
    Real best = A.at(0, c);
    for (std::size_t r = 1; r < rows; ++r) {
      if (A.at(r, c) > best) {
        best = A.at(r, c);
        argmax[c] = r;
      }
    }
    out[c] = best;
  }
  return a.tape().record("max_over_time", std::move(out), {a}, [a, argmax = std::move(argmax)](Tape& t, int self) {
    const Tensor& g = t.grad(self);
    Tensor& ga = t.grad(a.index());
    for (std::size_t c = 0; c < argmax.size(); ++c) ga.at(argmax[c], c) += g[c];
  });
}

Var conv_over_time(Var input, Var filters, std::size_t width) {
  const Tensor& X = input.value();
  const Tensor& F = filters.value();
  require_matrix("conv_over_time", X);
  require_matrix("conv_over_time", F);
  const std::size_t steps = X.rows(), channels = X.cols(), nf = F.cols();
  if (width == 0 || F.rows() != width * channels) {
    throw ShapeError("conv_over_time: filters " + shape_string(F.shape()) + " do not match width " +
                     std::to_string(width) + " over input " + shape_string(X.shape()));
  }
  if (steps < width) {
    throw ShapeError("conv_over_time: input " + shape_string(X.shape()) + " shorter than width " +
                     std::to_string(width));
  }
  const std::size_t positions = steps - width + 1;
  const std::size_t span = width * channels;
  Tensor out = Tensor::matrix(positions, nf);
  // Row-major storage makes window t the contiguous run X[t * channels, t * channels + span).
  for (std::size_t p = 0; p < positions; ++p) {
    const Real* window = X.data().data() + p * channels;
    Real* o = &out.at(p, 0);
    for (std::size_t q = 0; q < span; ++q) {
      const Real xv = window[q];
      if (xv == 0.0) continue;
      const Real* fr = &F.at(q, 0);
      for (std::size_t j = 0; j < nf; ++j) o[j] += xv * fr[j];
    }
  }
  return input.tape().record(
      "conv_over_time", std::move(out), {input, filters},
      [input, filters, positions, channels, span, nf](Tape& t, int self) {
        const Tensor& g = t.grad(self);
        const Tensor& X = input.value();
        const Tensor& F = filters.value();
        if (t.needs_grad(input)) {
          Real* gx = t.grad(input.index()).data().data();
          for (std::size_t p = 0; p < positions; ++p) {
            const Real* gr = &g.at(p, 0);
            for (std::size_t q = 0; q < span; ++q) {
              const Real* fr = &F.at(q, 0);
              Real acc = 0.0;
              for (std::size_t j = 0; j < nf; ++j) acc += gr[j] * fr[j];
              gx[p * channels + q] += acc;
            }
          }
        }
        if (t.needs_grad(filters)) {
          Tensor& gf = t.grad(filters.index());
          for (std::size_t p = 0; p < positions; ++p) {
            const Real* window = X.data().data() + p * channels;
            const Real* gr = &g.at(p, 0);
            for (std::size_t q = 0; q < span; ++q) {
              const Real xv = window[q];
              if (xv == 0.0) continue;
              Real* gfr = &gf.at(q, 0);
              for (std::size_t j = 0; j < nf; ++j) gfr[j] += xv * gr[j];
            }
          }
        }
      });
}

Var maxout(Var a, std::size_t pieces) {
  const Tensor& A = a.value();
  require_matrix("maxout", A);
  if (pieces == 0 || A.cols() % pieces != 0) {
    throw ShapeError("maxout: " + std::to_string(A.cols()) + " columns not divisible into " +
                     std::to_string(pieces) + " pieces");
  }
  const std::size_t rows = A.rows(), units = A.cols() / pieces;
  Tensor out = Tensor::matrix(rows, units);
  std::vector<std::size_t> argmax(rows * units);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t u = 0; u < units; ++u) {
      std::size_t best = u * pieces;
      for (std::size_t k = 1; k < pieces; ++k) {
        if (A.at(r, u * pieces + k) > A.at(r, best)) best = u * pieces + k;
      }
      argmax[r * units + u] = best;
      out.at(r, u) = A.at(r, best);
    }
  }
  return a.tape().record("maxout", std::move(out), {a}, [a, rows, units, argmax = std::move(argmax)](Tape& t, int self) {
    const Tensor& g = t.grad(self);
    Tensor& ga = t.grad(a.index());
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t u = 0; u < units; ++u) ga.at(r, argmax[r * units + u]) += g.at(r, u);
    }
  });
}

Var dropout(Var a, Real rate) {
  if (rate < 0.0 || rate >= 1.0) throw std::invalid_argument("dropout: rate must lie in [0, 1)");
  Tape& tape = a.tape();
  if (!tape.training() || rate == 0.0) return a;
  const Real keep_scale = 1.0 / (1.0 - rate);
  std::bernoulli_distribution keep(1.0 - rate);
  Tensor mask(a.shape());
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = keep(tape.rng()) ? keep_scale : 0.0;
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= mask[i];
  return tape.record("dropout", std::move(out), {a}, [a, mask = std::move(mask)](Tape& t, int self) {
    const Tensor& g = t.grad(self);
    Tensor& ga = t.grad(a.index());
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * mask[i];
  });
}

Var cross_entropy(Var logits, std::span<const int> targets, Reduction reduction) {
  const Tensor& X = logits.value();
  require_matrix("cross_entropy", X);
  const std::size_t rows = X.rows(), classes = X.cols();
  if (targets.size() != rows) {
    throw ShapeError("cross_entropy: " + std::to_string(targets.size()) + " targets for logits " +
                     shape_string(X.shape()));
  }
  Tensor probs = X;
  Real total = 0.0;
  std::size_t count = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const int target = targets[r];
    if (target == kIgnoreTarget) continue;
    if (target < 0 || static_cast<std::size_t>(target) >= classes) {
      throw ShapeError("cross_entropy: target " + std::to_string(target) + " outside " + std::to_string(classes) +
                       " classes");
    }
    auto row = probs.row_span(r);
    const Real hi = *std::max_element(row.begin(), row.end());
    Real z = 0.0;
    for (Real& v : row) {
      v = std::exp(v - hi);
      z += v;
    }
    for (Real& v : row) v /= z;
    total += hi + std::log(z) - X.at(r, target);
    ++count;
  }
  const Real norm = reduction == Reduction::Mean && count > 0 ? 1.0 / static_cast<Real>(count) : 1.0;
  std::vector<int> kept(targets.begin(), targets.end());
  return logits.tape().record(
      "cross_entropy", Tensor::scalar(total * norm), {logits},
      [logits, probs = std::move(probs), kept = std::move(kept), norm, classes](Tape& t, int self) {
        const Real g = t.grad(self)[0] * norm;
        Tensor& gx = t.grad(logits.index());
        for (std::size_t r = 0; r < kept.size(); ++r) {
          if (kept[r] == kIgnoreTarget) continue;
          for (std::size_t c = 0; c < classes; ++c) gx.at(r, c) += g * probs.at(r, c);
          gx.at(r, kept[r]) -= g;
        }
      });
}

Var cross_entropy(Var logits, int target) {
  const int targets[] = {target};
  return cross_entropy(logits, targets, Reduction::Mean);
}

Var gather_rows(Var table, std::span<const int> ids) {
  const Tensor& T = table.value();
  require_matrix("gather_rows", T);
  const std::size_t vocab = T.rows(), dim = T.cols();
  Tensor out = Tensor::matrix(ids.size(), dim);
  for (std::size_t r = 0; r < ids.size(); ++r) {
    if (ids[r] < 0 || static_cast<std::size_t>(ids[r]) >= vocab) {
      throw ShapeError("gather_rows: id " + std::to_string(ids[r]) + " outside table " + shape_string(T.shape()));
    }
    auto src = T.row_span(static_cast<std::size_t>(ids[r]));
    std::copy(src.begin(), src.end(), out.row_span(r).begin());
  }
  std::vector<int> kept(ids.begin(), ids.end());
  return table.tape().record("gather_rows", std::move(out), {table}, [table, kept = std::move(kept), dim](Tape& t, int self) {
    const Tensor& g = t.grad(self);
    Tensor& gt = t.grad(table.index());
    for (std::size_t r = 0; r < kept.size(); ++r) {
      for (std::size_t c = 0; c < dim; ++c) gt.at(static_cast<std::size_t>(kept[r]), c) += g.at(r, c);
    }
  });
}

Var pairwise_add(Var a, Var b) {
  const Tensor& A = a.value();
  const Tensor& B = b.value();
  require_matrix("pairwise_add", A);
  require_matrix("pairwise_add", B);
  if (A.cols() != B.cols()) {
    throw ShapeError("pairwise_add: width mismatch " + shape_string(A.shape()) + " vs " + shape_string(B.shape()));
  }
  const std::size_t n = A.rows(), m = B.rows(), h = A.cols();
  Tensor out = Tensor::matrix(n * m, h);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      Real* o = &out.at(i * m + j, 0);
      for (std::size_t c = 0; c < h; ++c) o[c] = A.at(i, c) + B.at(j, c);
    }
  }
  return a.tape().record("pairwise_add", std::move(out), {a, b}, [a, b, n, m, h](Tape& t, int self) {
    const Tensor& g = t.grad(self);
    const bool da = t.needs_grad(a), db = t.needs_grad(b);
    Tensor* ga = da ? &t.grad(a.index()) : nullptr;
    Tensor* gb = db ? &t.grad(b.index()) : nullptr;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const Real* gr = &g.at(i * m + j, 0);
        for (std::size_t c = 0; c < h; ++c) {
          if (da) ga->at(i, c) += gr[c];
          if (db) gb->at(j, c) += gr[c];
        }
      }
    }
  });
}

Var sum(Var a) {
  Real total = 0.0;
  for (Real v : a.value().data()) total += v;
  return a.tape().record("sum", Tensor::scalar(total), {a}, [a](Tape& t, int self) {
    const Real g = t.grad(self)[0];
    for (Real& v : t.grad(a.index()).data()) v += g;
  });
}

Var stop_gradient(Var a) {
  return a.tape().record("stop_gradient", a.value(), std::initializer_list<Var>{}, nullptr);
}

}  // namespace podep::ops
