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

#include "podep/model.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "podep/ops.hpp"

namespace podep {
namespace {

std::vector<int> argmax_rows(const Tensor& m) {
  std::vector<int> out(m.rows(), 0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < m.cols(); ++c) {
      if (m.at(r, c) > m.at(r, best)) best = c;
    }
    out[r] = static_cast<int>(best);
  }
  return out;
}

}  // namespace

Model::Model(ModelConfig config, Lexicon lexicon)
    : config_((config.validate(), std::move(config))),
      lexicon_(std::move(lexicon)),
      reader_(config_.reader, lexicon_.char_count(), params_),
      tagger_(config_.tagger, config_.reader.projection_dim, params_),
      pos_head_(config_.tagger.pos_head_enabled
                    ? std::optional<PosHead>(std::in_place, lexicon_.attributes(), tagger_.branch_dim(), params_)
                    : std::nullopt),
      head_(config_.scorer, config_.tagger.hidden, lexicon_.label_count(), params_) {
  if (lexicon_.label_count() == 0) throw std::invalid_argument("model: lexicon has no dependency labels");
}

void Model::initialize(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  reader_.initialize(rng);
  tagger_.initialize(rng);
  if (pos_head_) pos_head_->initialize(rng);
  head_.initialize(rng);
}

EncodedSentence Model::encode(const Sentence& sentence, bool strict) const {
  EncodedSentence enc;
  const std::size_t n = sentence.size();
  enc.chars.reserve(n);
  bool annotated = n > 0;
  for (const Token& t : sentence.tokens) {
    enc.chars.push_back(lexicon_.encode_word(t.form));
    annotated = annotated && t.head != kNoHead;
    const auto label = lexicon_.label_id(t.deprel);
    if (strict && !label) throw std::invalid_argument("encode: label '" + t.deprel + "' missing from lexicon");
    enc.labels.push_back(label ? *label : -1);
  }
  if (annotated) {
    for (const Token& t : sentence.tokens) enc.heads.push_back(t.head);
  }
  const auto& attrs = lexicon_.attributes();
  enc.pos.assign(attrs.size(), std::vector<int>(n, -1));
  for (std::size_t w = 0; w < n; ++w) {
    const Token& t = sentence.tokens[w];
    if (strict) {
      for (const auto& [attr, value] : t.feats) {
        const bool known = std::any_of(attrs.begin(), attrs.end(), [&](const AttributeVocab& a) { return a.name() == attr; });
        if (!known) throw std::invalid_argument("encode: POS attribute '" + attr + "' missing from lexicon");
      }
    }
    const std::vector<int> targets = lexicon_.attribute_targets(t);
    for (std::size_t a = 0; a < attrs.size(); ++a) enc.pos[a][w] = targets[a];
  }
  return enc;
}

Model::Forward Model::forward(Tape& tape, const EncodedSentence& sentence) const {
  if (sentence.size() == 0) throw std::invalid_argument("model: empty sentence");
  Forward f;
  Var embeddings = ops::dropout(reader_.forward_words(tape, sentence.chars), config_.dropout.reader);
  Tagger::Output tagged = tagger_.forward(tape, embeddings, config_.dropout.birnn);
  f.annotations = tagged.annotations;
  f.branch = tagged.branch;
  f.located = head_.with_root(tape, f.annotations);
  f.scores = head_.score_matrix(tape, f.annotations, f.located);
  f.probs = head_.head_distribution(tape, f.scores);
  return f;
}

Model::Losses Model::losses(Tape& tape, const EncodedSentence& sentence) const {
  return losses(tape, sentence, forward(tape, sentence));
}

Model::Losses Model::losses(Tape& tape, const EncodedSentence& sentence, const Forward& f) const {
  if (sentence.heads.size() != sentence.size()) throw std::invalid_argument("model: sentence has no gold heads");
  Losses out;
  out.heads = ops::cross_entropy(f.scores, sentence.heads);
  Var label_logits = config_.scorer.attention == AttentionMode::Soft
                         ? head_.label_soft(tape, f.located, f.probs, f.annotations, config_.dropout.labeler)
                         : head_.label_hard(tape, f.located, sentence.heads, f.annotations, config_.dropout.labeler);
  out.labels = ops::cross_entropy(label_logits, sentence.labels);
  if (pos_head_) out.pos = pos_head_->loss(tape, f.branch, sentence.pos);
  return out;
}

Tensor Model::head_probabilities(const Sentence& sentence) const {
  Tape tape;
  return forward(tape, encode(sentence)).probs.value();
}

ParseResult Model::parse(const Sentence& sentence, DecodeMode mode, bool single_root) const {
  if (sentence.size() == 0) return {};
  Tape tape;
  const EncodedSentence enc = encode(sentence);
  const Forward f = forward(tape, enc);
  ParseResult result = decode(f.probs.value(), mode, single_root);
  Var logits = config_.scorer.attention == AttentionMode::Soft
                   ? head_.label_soft(tape, f.located, f.probs, f.annotations, 0.0)
                   : head_.label_hard(tape, f.located, result.heads, f.annotations, 0.0);
  result.labels = argmax_rows(logits.value());
  return result;
}

Sentence Model::annotate(const Sentence& sentence, const ParseResult& result) const {
  Sentence out = sentence;
  for (std::size_t i = 0; i < out.tokens.size(); ++i) {
    out.tokens[i].head = result.heads.at(i);
    out.tokens[i].deprel = lexicon_.label(result.labels.at(i));
  }
  return out;
}

std::size_t worker_count(std::size_t requested) {
  std::size_t n = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PODEP_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) n = std::min(n, static_cast<std::size_t>(cap));
  }
  if (requested > 0) n = std::min(n, requested);
  return n;
}

std::vector<ParseResult> parse_all(const Model& model, std::span<const Sentence> sentences, DecodeMode mode,
                                   std::size_t threads, bool single_root) {
  std::vector<ParseResult> out(sentences.size());
  threads = std::max<std::size_t>(1, std::min(threads, sentences.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < sentences.size(); ++i) out[i] = model.parse(sentences[i], mode, single_root);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < sentences.size(); i += threads) out[i] = model.parse(sentences[i], mode, single_root);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace podep
