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

#include "podep/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "podep/errors.hpp"
#include "podep/ops.hpp"

namespace podep {

Real total_loss(Real label_loss, Real head_loss, std::optional<Real> pos_loss, const LossWeights& w) {
  Real total = w.labels * label_loss + w.heads * head_loss;
  if (pos_loss) total += w.pos * *pos_loss;
  return total;
}

Var total_loss(Var label_loss, Var head_loss, std::optional<Var> pos_loss, const LossWeights& w) {
  Var total = ops::add(ops::scale(label_loss, w.labels), ops::scale(head_loss, w.heads));
  if (pos_loss) total = ops::add(total, ops::scale(*pos_loss, w.pos));
  return total;
}

void AdaDelta::step(ParameterSet& params) {
  if (sq_grad_.size() != params.size()) {
    sq_grad_.clear();
    sq_delta_.clear();
    for (std::size_t i = 0; i < params.size(); ++i) {
      sq_grad_.emplace_back(params[i].value.shape());
      sq_delta_.emplace_back(params[i].value.shape());
    }
  }
  const Real rho = config_.rho, eps = config_.epsilon;
  for (std::size_t p = 0; p < params.size(); ++p) {
    Parameter& param = params[p];
    if (!param.grad.all_finite()) throw NumericError("adadelta: non-finite gradient in '" + param.name + "'");
    auto g = param.grad.data();
    auto x = param.value.data();
    auto eg = sq_grad_[p].data();
    auto ed = sq_delta_[p].data();
    for (std::size_t i = 0; i < g.size(); ++i) {
      eg[i] = rho * eg[i] + (1.0 - rho) * g[i] * g[i];
      const Real dx = -std::sqrt(ed[i] + eps) / std::sqrt(eg[i] + eps) * g[i];
      ed[i] = rho * ed[i] + (1.0 - rho) * dx * dx;
      x[i] += dx;
    }
  }
}

Real global_grad_norm(const ParameterSet& params) {
  Real sq = 0.0;
  for (std::size_t p = 0; p < params.size(); ++p) {
    for (Real g : params[p].grad.data()) sq += g * g;
  }
  return std::sqrt(sq);
}

Real GradientClipper::clip(ParameterSet& params) {
  const Real norm = global_grad_norm(params);
  clipped_last_ = false;
  if (!std::isfinite(norm)) throw NumericError("clip: non-finite gradient norm");
  if (!initialized_) {
    mean_ = norm;
    initialized_ = true;
    return norm;
  }
  Real kept = norm;
  const Real limit = config_.factor * mean_;
  if (norm > limit && norm > 0.0) {
    const Real s = limit / norm;
    for (std::size_t p = 0; p < params.size(); ++p) {
      for (Real& g : params[p].grad.data()) g *= s;
    }
    kept = limit;
    clipped_last_ = true;
  }
  mean_ = config_.decay * mean_ + (1.0 - config_.decay) * kept;
  return norm;
}

std::string to_json(const TrainConfig& c) {
  nlohmann::ordered_json j;
  j["max_epochs"] = c.max_epochs;
  j["patience"] = c.patience;
  j["alpha_l"] = c.weights.labels;
  j["alpha_s"] = c.weights.heads;
  j["alpha_t"] = c.weights.pos;
  j["rho"] = c.adadelta.rho;
  j["epsilon"] = c.adadelta.epsilon;
  j["clip_factor"] = c.clip.factor;
  j["clip_decay"] = c.clip.decay;
  j["seed"] = c.seed;
  j["dev_decode"] = std::string(to_string(c.dev_decode));
  j["shuffle"] = c.shuffle;
  j["threads"] = c.threads;
  return j.dump();
}

TrainConfig train_config_from_json(std::string_view text, TrainConfig c) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    const nlohmann::json& t = j.contains("training") ? j.at("training") : j;
    auto get = [&](const char* key, auto& out) {
      if (t.contains(key)) out = t.at(key).get<std::remove_reference_t<decltype(out)>>();
    };
    get("max_epochs", c.max_epochs);
    get("patience", c.patience);
    get("alpha_l", c.weights.labels);
    get("alpha_s", c.weights.heads);
    get("alpha_t", c.weights.pos);
    get("rho", c.adadelta.rho);
    get("epsilon", c.adadelta.epsilon);
    get("clip_factor", c.clip.factor);
    get("clip_decay", c.clip.decay);
    get("seed", c.seed);
    get("shuffle", c.shuffle);
    get("threads", c.threads);
    if (t.contains("dev_decode")) c.dev_decode = decode_mode_from_string(t.at("dev_decode").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("training config: ") + e.what());
  }
  return c;
}

std::string EpochRecord::to_json() const {
  nlohmann::ordered_json j;
  j["epoch"] = epoch;
  j["loss"] = loss;
  j["loss_heads"] = loss_heads;
  j["loss_labels"] = loss_labels;
  if (loss_pos) j["loss_pos"] = *loss_pos;
  j["dev_la"] = dev.la;
  j["dev_uas"] = dev.uas;
  j["dev_las"] = dev.las;
  j["dev_tokens"] = dev.token_count;
  j["grad_norm_mean"] = grad_norm_mean;
  j["grad_norm_max"] = grad_norm_max;
  j["clipped_steps"] = clipped_steps;
  j["steps"] = steps;
  j["improved"] = improved;
  return j.dump();
}

Trainer::Trainer(Model& model, TrainConfig config)
    : model_(model), config_(config), rng_(config.seed), optimizer_(config.adadelta), clipper_(config.clip) {}

Trainer::StepStats Trainer::step(const EncodedSentence& sentence) {
  StepStats stats;
  ParameterSet& params = model_.params();
  params.zero_grad();
  TapeOptions options;
  options.train = true;
  options.rng = &rng_;
  Tape tape(options);
  const Model::Losses losses = model_.losses(tape, sentence);
  Var total = total_loss(losses.labels, losses.heads, losses.pos, config_.weights);
  tape.backward(total);
  stats.loss = total.value().item();
  stats.loss_heads = losses.heads.value().item();
  stats.loss_labels = losses.labels.value().item();
  if (losses.pos) stats.loss_pos = losses.pos->value().item();
  stats.grad_norm = clipper_.clip(params);
  stats.clipped = clipper_.clipped_last();
  optimizer_.step(params);
  return stats;
}

TrainResult Trainer::train(std::span<const Sentence> train, std::span<const Sentence> dev,
                           const EpochCallback& on_epoch) {
  TrainResult result;
  std::vector<EncodedSentence> encoded;
  std::vector<Sentence> kept;
  for (const Sentence& s : train) {
    if (s.size() == 0 || tree_violation(s)) {
      ++result.dropped_sentences;
      continue;
    }
    encoded.push_back(model_.encode(s, true));
    kept.push_back(s);
  }
  if (encoded.empty()) throw std::invalid_argument("train: no usable training sentences");
  const std::span<const Sentence> eval_set = dev.empty() ? std::span<const Sentence>(kept) : dev;

  std::vector<std::size_t> order(encoded.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<Tensor> best_params = model_.params().snapshot();
  std::size_t stale = 0;

  for (std::size_t epoch = 1; epoch <= config_.max_epochs; ++epoch) {
    if (config_.shuffle) std::shuffle(order.begin(), order.end(), rng_);
    EpochRecord rec;
    rec.epoch = epoch;
    Real pos_sum = 0.0;
    for (std::size_t idx : order) {
      const StepStats s = step(encoded[idx]);
      rec.loss += s.loss;
      rec.loss_heads += s.loss_heads;
      rec.loss_labels += s.loss_labels;
      if (s.loss_pos) pos_sum += *s.loss_pos;
      rec.grad_norm_mean += s.grad_norm;
      rec.grad_norm_max = std::max(rec.grad_norm_max, s.grad_norm);
      rec.clipped_steps += s.clipped;
      ++rec.steps;
    }
    const Real steps = static_cast<Real>(rec.steps);
    rec.loss /= steps;
    rec.loss_heads /= steps;
    rec.loss_labels /= steps;
    rec.grad_norm_mean /= steps;
    if (model_.pos_head()) rec.loss_pos = pos_sum / steps;

    const std::vector<ParseResult> parses = parse_all(model_, eval_set, config_.dev_decode, config_.threads);
    rec.dev = attachment_scores(eval_set, parses, model_.lexicon());
    rec.improved = rec.dev.uas > result.best_uas;
    // ties refresh the snapshot but do not reset patience
    if (rec.dev.uas >= result.best_uas) {
      result.best_uas = rec.dev.uas;
      result.best_epoch = epoch;
      best_params = model_.params().snapshot();
    }
    stale = rec.improved ? 0 : stale + 1;
    result.log.push_back(rec);
    if (on_epoch) on_epoch(rec);
    if (stale > config_.patience) break;
  }
  model_.params().restore(best_params);
  return result;
}

}  // namespace podep
