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
#include "podep/lexicon.hpp"
#include "podep/ops.hpp"
#include "podep/reader.hpp"
#include "test_support.hpp"

using namespace podep;

namespace {

ReaderConfig small_reader() {
  ReaderConfig c;
  c.char_embed_dim = 3;
  c.filters = {{1, 2}, {2, 2}, {3, 1}};
  c.projection_dim = 4;
  c.highway_layers = 2;
  return c;
}

void zero_highways(ParameterSet& params, Real gate_bias) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    Parameter& p = params[i];
    if (p.name.find(".highway") == std::string::npos) continue;
    const bool gate_b = p.name.ends_with(".bt");
    p.value.fill(gate_b ? gate_bias : 0.0);
  }
}

}  // namespace

TEST_CASE("default reader dimensions") {
  const ReaderConfig c;
  CHECK(c.char_embed_dim == 16);
  CHECK(c.filter_count() == 1050);
  CHECK(c.max_width() == 6);
  CHECK(c.projection_dim == 512);
  CHECK(c.highway_layers == 3);
}

TEST_CASE("character matrix has one row per fenced character") {
  ParameterSet params;
  Reader reader(small_reader(), 10, params);
  std::mt19937_64 rng(1);
  reader.initialize(rng);
  Tape tape;
  const std::vector<int> kot{Lexicon::kBow, 4, 5, 6, Lexicon::kEow};
  CHECK(reader.embed_chars(tape, kot).shape() == Shape{5, 3});
  const std::vector<int> empty{Lexicon::kBow, Lexicon::kEow};
  CHECK(reader.embed_chars(tape, empty).shape() == Shape{2, 3});
  const std::vector<int> pad{Lexicon::kPad};
  const Tensor& row = reader.embed_chars(tape, pad).value();
  const Tensor& table = params.at("reader.char_embed").value;
  for (std::size_t j = 0; j < 3; ++j) CHECK(row.at(0, j) == table.at(Lexicon::kPad, j));
}

TEST_CASE("zero filters give zero responses") {
  ParameterSet params;
  Reader reader(small_reader(), 10, params);
  std::mt19937_64 rng(1);
  reader.initialize(rng);
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].name.find(".filter") != std::string::npos) params[i].value.fill(0.0);
  }
  Tape tape;
  const std::vector<int> ids{2, 4, 5, 3};
  const Tensor& r = reader.filter_responses(tape, reader.embed_chars(tape, ids)).value();
  CHECK(r.shape() == Shape{1, 5});
  for (Real v : r.data()) CHECK(v == 0.0);
}

TEST_CASE("a width-1 filter peaks at the matching character") {
  ReaderConfig c = small_reader();
  c.filters = {{1, 1}};
  ParameterSet params;
  Reader reader(c, 8, params);
  // One-hot embeddings along three axes, filter aligned with axis 1.
  Tensor& table = params.at("reader.char_embed").value;
  table.fill(0.0);
  for (std::size_t id = 0; id < 8; ++id) table.at(id, id % 3) = 1.0 + static_cast<Real>(id) / 100.0;
  params.at("reader.filter1.w").value = Tensor({3, 1}, {0.0, 1.0, 0.0});
  params.at("reader.filter1.b").value.fill(0.0);
  Tape tape;
  const std::vector<int> ids{2, 6, 4, 3};  // only id 4 lies on axis 1
  Var chars = reader.embed_chars(tape, ids);
  Var conv = ops::conv_over_time(chars, tape.param(params.at("reader.filter1.w")), 1);
  std::size_t arg = 0;
  for (std::size_t t = 1; t < conv.rows(); ++t) {
    if (conv.value().at(t, 0) > conv.value().at(arg, 0)) arg = t;
  }
  CHECK(arg == 2);
  CHECK(reader.filter_responses(tape, chars).value().item() == doctest::Approx(std::tanh(1.04)));
}

TEST_CASE("short words are padded to the widest filter") {
  ReaderConfig c = small_reader();
  c.filters = {{1, 2}, {6, 2}};
  ParameterSet params;
  Reader reader(c, 10, params);
  std::mt19937_64 rng(2);
  reader.initialize(rng, 0.3);
  Tape tape;
  const std::vector<int> empty{Lexicon::kBow, Lexicon::kEow};
  Var y = reader.forward(tape, empty);
  CHECK(y.shape() == Shape{1, 4});
  CHECK(y.value().all_finite());
  const std::vector<int> padded{Lexicon::kBow, Lexicon::kEow, 0, 0, 0, 0};
  CHECK(reader.forward(tape, padded).value() == y.value());
}

TEST_CASE("output shape does not depend on word length") {
  ParameterSet params;
  Reader reader(small_reader(), 10, params);
  std::mt19937_64 rng(3);
  reader.initialize(rng);
  for (std::size_t len = 0; len <= 12; ++len) {
    std::vector<int> ids{Lexicon::kBow};
    for (std::size_t i = 0; i < len; ++i) ids.push_back(4 + static_cast<int>(i % 6));
    ids.push_back(Lexicon::kEow);
    Tape tape;
    CHECK(reader.forward(tape, ids).shape() == Shape{1, 4});
  }
}

TEST_CASE("zero highway weights halve the input") {
  ParameterSet params;
  ReaderConfig c = small_reader();
  c.highway_layers = 1;
  Reader reader(c, 10, params);
  std::mt19937_64 rng(4);
  reader.initialize(rng, 0.5);
  zero_highways(params, 0.0);
  Tape tape;
  Var r = tape.constant(podep::testing::random_tensor({1, 5}, rng));
  Var x = ops::add(ops::matmul(r, tape.param(params.at("reader.proj.w"))), tape.param(params.at("reader.proj.b")));
  const Tensor& y = reader.transform(tape, r).value();
  for (std::size_t j = 0; j < 4; ++j) CHECK(y.at(0, j) == doctest::Approx(0.5 * x.value().at(0, j)).epsilon(1e-14));
}

TEST_CASE("a strongly negative gate bias makes highways the identity") {
  ParameterSet params;
  Reader reader(small_reader(), 10, params);
  std::mt19937_64 rng(5);
  reader.initialize(rng, 0.5);
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].name.ends_with(".bt")) params[i].value.fill(-10.0);
  }
  Tape tape;
  Var r = tape.constant(podep::testing::random_tensor({1, 5}, rng));
  Var x = ops::add(ops::matmul(r, tape.param(params.at("reader.proj.w"))), tape.param(params.at("reader.proj.b")));
  const Tensor& y = reader.transform(tape, r).value();
  for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(y.at(0, j) - x.value().at(0, j)) < 1e-3);
}

TEST_CASE("gate bias is initialised from the config") {
  ParameterSet params;
  Reader reader(small_reader(), 10, params);
  std::mt19937_64 rng(6);
  reader.initialize(rng);
  for (Real v : params.at("reader.highway1.bt").value.data()) CHECK(v == -2.0);
}

TEST_CASE("batched words match single words") {
  ParameterSet params;
  Reader reader(small_reader(), 10, params);
  std::mt19937_64 rng(7);
  reader.initialize(rng, 0.3);
  const std::vector<std::vector<int>> words{{2, 4, 3}, {2, 5, 6, 7, 8, 9, 3}, {2, 3}};
  Tape tape;
  const Tensor& all = reader.forward_words(tape, words).value();
  REQUIRE(all.shape() == Shape{3, 4});
  for (std::size_t w = 0; w < words.size(); ++w) {
    const Tensor& one = reader.forward(tape, words[w]).value();
    for (std::size_t j = 0; j < 4; ++j) CHECK(all.at(w, j) == doctest::Approx(one.at(0, j)).epsilon(1e-14));
  }
}

TEST_CASE("reader gradients match finite differences") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    ParameterSet params;
    Reader reader(small_reader(), 8, params);
    std::mt19937_64 rng(seed);
    reader.initialize(rng, 0.5);
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (params[i].name.ends_with(".b") || params[i].name.ends_with(".bh")) {
        params[i].value = podep::testing::random_tensor(params[i].value.shape(), rng, 0.5);
      }
    }
    const std::vector<int> word{Lexicon::kBow, 4, 5, 6, Lexicon::kEow};
    const Tensor weights = podep::testing::random_tensor({1, 4}, rng);
    const GradCheckResult r = finite_diff_check(params, [&](Tape& t) {
      return ops::sum(ops::mul(reader.forward(t, word), t.constant(weights)));
    });
    CAPTURE(r.worst_parameter);
    CHECK(r.max_rel_error < 1e-6);
  }
}
