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


#include <cmath>
#include <random>

#include "doctest.h"
#include "podep/gradcheck.hpp"
#include "podep/ops.hpp"
#include "podep/tagger.hpp"
#include "test_support.hpp"

using namespace podep;
using podep::testing::random_tensor;

namespace {

void randomize(ParameterSet& params, std::mt19937_64& rng, Real scale) {
  for (std::size_t i = 0; i < params.size(); ++i) params[i].value = random_tensor(params[i].value.shape(), rng, scale);
}

Tensor reverse_rows(const Tensor& t) {
  Tensor out(t.shape());
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.cols(); ++c) out.at(t.rows() - 1 - r, c) = t.at(r, c);
  }
  return out;
}

std::vector<AttributeVocab> two_attributes() {
  AttributeVocab upos("UPOS");
  upos.add("NOUN");
  upos.add("VERB");
  AttributeVocab c("Case");
  c.add("Nom");
  return {c, upos};
}

}  // namespace

TEST_CASE("gru step with zero weights") {
  ParameterSet params;
  Gru gru(3, 2, params, "g");
  for (std::size_t i = 0; i < params.size(); ++i) params[i].value.fill(0.0);
  Tape tape;
  Var h = gru.step(tape, tape.constant(Tensor::row({0.3, -1.0, 2.0})), tape.constant(Tensor::row({1.0, 1.0})));
  CHECK(h.value().at(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(h.value().at(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("a closed update gate keeps the previous state") {
  ParameterSet params;
  Gru gru(3, 2, params, "g");
  std::mt19937_64 rng(1);
  gru.initialize(rng, 0.5);
  Tensor& b = params.at("g.b").value;
  b.at(0, 0) = -60.0;
  b.at(0, 1) = -60.0;
  Tape tape;
  const Tensor prev = Tensor::row({0.7, -0.4});
  Var h = gru.step(tape, tape.constant(Tensor::row({0.3, -1.0, 2.0})), tape.constant(prev));
  CHECK(h.value().at(0, 0) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(h.value().at(0, 1) == doctest::Approx(-0.4).epsilon(1e-14));
}

TEST_CASE("gru initialisation") {
  ParameterSet params;
  Gru gru(5, 4, params, "g");
  std::mt19937_64 rng(2);
  gru.initialize(rng);
  CHECK(params.at("g.h0").value == Tensor({1, 4}, 0.0));
  CHECK(params.at("g.w").value.shape() == Shape{5, 12});
  const Tensor& u = params.at("g.uz").value;
  Real worst = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      Real dot = 0;
      for (std::size_t k = 0; k < 4; ++k) dot += u.at(k, i) * u.at(k, j);
      worst = std::max(worst, std::abs(dot - (i == j)));
    }
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("gru sequence gradients match finite differences") {
  std::mt19937_64 rng(3);
  ParameterSet params;
  Gru gru(3, 4, params, "g");
  randomize(params, rng, 0.6);
  Parameter& x = params.add("x", {3, 3});
  x.value = random_tensor({3, 3}, rng);
  const Tensor weights = random_tensor({3, 4}, rng);
  for (bool reverse : {false, true}) {
    const GradCheckResult r = finite_diff_check(params, [&](Tape& t) {
      return ops::sum(ops::mul(gru.run(t, t.param(x), reverse), t.constant(weights)));
    });
    CAPTURE(r.worst_parameter);
    CHECK(r.max_rel_error < 1e-6);
  }
}

TEST_CASE("bigru output length matches input length") {
  std::mt19937_64 rng(4);
  ParameterSet params;
  BiGruLayer layer(3, 5, params, "l");
  layer.initialize(rng);
  for (std::size_t n = 1; n <= 10; ++n) {
    Tape tape;
    CHECK(layer.forward(tape, tape.constant(random_tensor({n, 3}, rng))).shape() == Shape{n, 5});
  }
}

TEST_CASE("length-one sequence takes one step in each direction") {
  std::mt19937_64 rng(5);
  ParameterSet params;
  BiGruLayer layer(3, 4, params, "l");
  randomize(params, rng, 0.5);
  Tape tape;
  Var x = tape.constant(random_tensor({1, 3}, rng));
  const Tensor& both = layer.forward(tape, x).value();
  const Tensor& f = layer.forward_gru().step(tape, x, layer.forward_gru().initial_state(tape)).value();
  const Tensor& b = layer.backward_gru().step(tape, x, layer.backward_gru().initial_state(tape)).value();
  for (std::size_t j = 0; j < 4; ++j) CHECK(both.at(0, j) == doctest::Approx(f.at(0, j) + b.at(0, j)).epsilon(1e-14));
}

TEST_CASE("reversing the input swaps the two directions") {
  std::mt19937_64 rng(6);
  ParameterSet a_params, b_params;
  BiGruLayer a(3, 4, a_params, "l");
  BiGruLayer b(3, 4, b_params, "l");
  randomize(a_params, rng, 0.5);
  for (std::size_t i = 0; i < a_params.size(); ++i) {
    std::string name = a_params[i].name;
    const bool fwd = name.find(".fwd.") != std::string::npos;
    name.replace(name.find(fwd ? ".fwd." : ".bwd."), 5, fwd ? ".bwd." : ".fwd.");
    b_params.at(name).value = a_params[i].value;
  }
  const Tensor x = random_tensor({3, 3}, rng);
  Tape tape;
  const Tensor ya = a.forward(tape, tape.constant(x)).value();
  const Tensor yb = b.forward(tape, tape.constant(reverse_rows(x))).value();
  const Tensor expected = reverse_rows(ya);
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(yb[i] == doctest::Approx(expected[i]).epsilon(1e-14));
}

TEST_CASE("tagger branch point") {
  std::mt19937_64 rng(7);
  SUBCASE("one layer branches at the embeddings") {
    TaggerConfig c;
    c.layers = 1;
    c.hidden = 4;
    CHECK(c.branch_layer() == 0);
    ParameterSet params;
    Tagger tagger(c, 3, params);
    tagger.initialize(rng);
    CHECK(tagger.branch_dim() == 3);
    Tape tape;
    Var e = tape.constant(random_tensor({4, 3}, rng));
    const Tagger::Output out = tagger.forward(tape, e, 0.0);
    CHECK(out.branch.index() == e.index());
    CHECK(out.annotations.shape() == Shape{4, 4});
  }
  SUBCASE("two layers branch after the first") {
    TaggerConfig c;
    c.layers = 2;
    c.hidden = 4;
    CHECK(c.branch_layer() == 1);
    ParameterSet params;
    Tagger tagger(c, 3, params);
    tagger.initialize(rng, 0.5);
    CHECK(tagger.branch_dim() == 4);
    Tape tape;
    Var e = tape.constant(random_tensor({4, 3}, rng));
    const Tagger::Output out = tagger.forward(tape, e, 0.0);
    const Tensor& first = tagger.layer(0).forward(tape, e).value();
    CHECK(out.branch.value() == first);
    CHECK_FALSE(out.annotations.value() == first);
  }
  SUBCASE("explicit branch layer") {
    TaggerConfig c;
    c.layers = 3;
    c.pos_branch_layer = 0;
    CHECK(c.branch_layer() == 0);
    c.pos_branch_layer = 3;
    CHECK(c.branch_layer() == 3);
  }
}

TEST_CASE("tagger is deterministic without dropout") {
  std::mt19937_64 rng(8);
  TaggerConfig c;
  c.layers = 2;
  c.hidden = 5;
  ParameterSet params;
  Tagger tagger(c, 3, params);
  tagger.initialize(rng, 0.3);
  const Tensor e = random_tensor({6, 3}, rng);
  Tape t1, t2;
  CHECK(tagger.forward(t1, t1.constant(e), 0.7).annotations.value() ==
        tagger.forward(t2, t2.constant(e), 0.7).annotations.value());
}

TEST_CASE("pos distributions are normalised") {
  std::mt19937_64 rng(9);
  ParameterSet params;
  PosHead head(two_attributes(), 4, params);
  head.initialize(rng);
  randomize(params, rng, 2.0);
  Tape tape;
  const auto dists = head.distributions(tape, tape.constant(random_tensor({5, 4}, rng)));
  REQUIRE(dists.size() == 2);
  CHECK(dists[0].cols() == 2);
  CHECK(dists[1].cols() == 3);
  for (const Var& d : dists) {
    for (std::size_t r = 0; r < d.rows(); ++r) {
      Real s = 0;
      for (std::size_t c = 0; c < d.cols(); ++c) s += d.value().at(r, c);
      CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("absent attributes are left out of the pos loss") {
  std::mt19937_64 rng(10);
  ParameterSet params;
  PosHead head(two_attributes(), 4, params);
  randomize(params, rng, 1.0);
  const Tensor branch = random_tensor({3, 4}, rng);
  // Case present only on word 1; UPOS on words 0 and 2.
  const std::vector<std::vector<int>> targets{{-1, 1, -1}, {2, -1, 1}};
  Tape tape;
  const Real loss = head.loss(tape, tape.constant(branch), targets).value().item();
  const auto logits = head.logits(tape, tape.constant(branch));
  auto nll = [&](const Tensor& l, std::size_t row, int target) {
    Real z = 0;
    for (std::size_t c = 0; c < l.cols(); ++c) z += std::exp(l.at(row, c));
    return std::log(z) - l.at(row, static_cast<std::size_t>(target));
  };
  const Real expected =
      (nll(logits[0].value(), 1, 1) + nll(logits[1].value(), 0, 2) + nll(logits[1].value(), 2, 1)) / 3.0;
  CHECK(loss == doctest::Approx(expected).epsilon(1e-12));

  const std::vector<std::vector<int>> none{{-1, -1, -1}, {-1, -1, -1}};
  CHECK(head.loss(tape, tape.constant(branch), none).value().item() == 0.0);
  const std::vector<std::vector<int>> wrong{{-1, -1, -1}};
  CHECK_THROWS_AS(head.loss(tape, tape.constant(branch), wrong), std::invalid_argument);
}

TEST_CASE("pos loss does not reach layers above the branch") {
  std::mt19937_64 rng(11);
  TaggerConfig c;
  c.layers = 2;
  c.hidden = 4;
  ParameterSet params;
  Tagger tagger(c, 3, params);
  PosHead head(two_attributes(), tagger.branch_dim(), params);
  tagger.initialize(rng, 0.5);
  head.initialize(rng, 0.5);
  Tape tape;
  const Tagger::Output out = tagger.forward(tape, tape.constant(random_tensor({3, 3}, rng)), 0.0);
  const std::vector<std::vector<int>> targets{{1, -1, 1}, {1, 2, 1}};
  tape.backward(head.loss(tape, out.branch, targets));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Parameter& p = params[i];
    CAPTURE(p.name);
    Real norm = 0;
    for (Real g : p.grad.data()) norm += std::abs(g);
    if (p.name.starts_with("tagger.layer1.")) CHECK(norm == 0.0);
    if (p.name == "tagger.layer0.fwd.w" || p.name.starts_with("pos.")) CHECK(norm > 0.0);
  }
}

TEST_CASE("pos head gradients match finite differences") {
  std::mt19937_64 rng(12);
  ParameterSet params;
  PosHead head(two_attributes(), 3, params);
  randomize(params, rng, 1.0);
  Parameter& branch = params.add("branch", {4, 3});
  branch.value = random_tensor({4, 3}, rng);
  const std::vector<std::vector<int>> targets{{1, -1, 0, 1}, {2, 1, -1, 0}};
  const GradCheckResult r = finite_diff_check(params, [&](Tape& t) { return head.loss(t, t.param(branch), targets); });
  CHECK(r.max_rel_error < 1e-6);
}
