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


#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "podep/decoder.hpp"
#include "podep/model.hpp"
#include "podep/ops.hpp"
#include "podep/training.hpp"

using namespace podep;

namespace {

// Random right-branching sentences over a small syllable alphabet.
std::vector<Sentence> synthetic_corpus(std::size_t sentences, std::size_t length) {
  static const char* syllables[] = {"ka", "to", "mi", "ra", "ze", "lu", "pro", "st", "w", "ny"};
  std::mt19937_64 rng(17);
  std::vector<Sentence> out(sentences);
  for (Sentence& s : out) {
    for (std::size_t i = 0; i < length; ++i) {
      Token t;
      t.id = static_cast<int>(i) + 1;
      for (std::size_t k = 0, n = 1 + rng() % 4; k < n; ++k) t.form += syllables[rng() % 10];
      t.upos = rng() % 2 ? "NOUN" : "VERB";
      t.feats.set("Number", rng() % 2 ? "Sing" : "Plur");
      t.head = static_cast<int>(i);
      t.deprel = i == 0 ? "root" : (rng() % 2 ? "nmod" : "obj");
      s.tokens.push_back(std::move(t));
    }
  }
  return out;
}

ModelConfig small_config() {
  ModelConfig c;
  c.reader.filters = {{1, 16}, {2, 16}, {3, 16}, {4, 16}};
  c.reader.projection_dim = 128;
  c.reader.highway_layers = 1;
  c.tagger.layers = 1;
  c.tagger.hidden = 64;
  c.scorer.hidden = 128;
  c.scorer.label_hidden = 32;
  return c;
}

void BM_ReaderForward(benchmark::State& state) {
  const auto corpus = synthetic_corpus(1, 4);
  ModelConfig c = state.range(0) ? ModelConfig{} : small_config();
  Model model(c, Lexicon::build(corpus));
  model.initialize(1);
  const std::vector<int> word = model.lexicon().encode_word("protokami");
  for (auto _ : state) {
    Tape tape;
    benchmark::DoNotOptimize(model.reader().forward(tape, word).value().data().data());
  }
}
BENCHMARK(BM_ReaderForward)->Arg(0)->Arg(1)->ArgNames({"full_size"});

void BM_TrainingStep(benchmark::State& state) {
  const auto corpus = synthetic_corpus(4, static_cast<std::size_t>(state.range(0)));
  Model model(small_config(), Lexicon::build(corpus));
  model.initialize(1);
  Trainer trainer(model, TrainConfig{});
  const EncodedSentence e = model.encode(corpus.front(), true);
  for (auto _ : state) benchmark::DoNotOptimize(trainer.step(e).loss);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrainingStep)->Arg(10)->Arg(25)->Arg(50)->ArgNames({"words"});

void BM_ChuLiuEdmonds(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::normal_distribution<Real> normal;
  Tensor s = Tensor::matrix(n, n + 1);
  for (Real& v : s.data()) v = normal(rng);
  for (auto _ : state) benchmark::DoNotOptimize(cle_decode(s).data());
}
BENCHMARK(BM_ChuLiuEdmonds)->Arg(10)->Arg(40)->Arg(100)->ArgNames({"words"});

}  // namespace

BENCHMARK_MAIN();
