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
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "podep/decoder.hpp"
#include "podep/metrics.hpp"
#include "podep/model.hpp"

namespace podep {

struct LossWeights {
  Real labels = 0.4;  // alpha_l
  Real heads = 0.6;   // alpha_s
  Real pos = 1.0;     // alpha_t
};

// alpha_l * L_l + alpha_s * L_s (+ alpha_t * L_t when present).
Real total_loss(Real label_loss, Real head_loss, std::optional<Real> pos_loss, const LossWeights& weights);
Var total_loss(Var label_loss, Var head_loss, std::optional<Var> pos_loss, const LossWeights& weights);

struct AdaDeltaConfig {
  Real rho = 0.95;
  Real epsilon = 1e-8;
};

// Per-element AdaDelta on the gradients accumulated in a ParameterSet:
//   E[g^2] <- rho E[g^2] + (1 - rho) g^2
//   dx = -sqrt(E[dx^2] + eps) / sqrt(E[g^2] + eps) * g
//   E[dx^2] <- rho E[dx^2] + (1 - rho) dx^2
class AdaDelta {
 public:
  explicit AdaDelta(AdaDeltaConfig config = {}) : config_(config) {}

  // Throws NumericError naming the parameter on a non-finite gradient.
  void step(ParameterSet& params);

  const std::vector<Tensor>& mean_sq_grad() const { return sq_grad_; }
  const std::vector<Tensor>& mean_sq_delta() const { return sq_delta_; }

 private:
  AdaDeltaConfig config_;
  std::vector<Tensor> sq_grad_;
  std::vector<Tensor> sq_delta_;
};

struct ClipConfig {
  Real factor = 2.0;  // clip when the norm exceeds factor * running mean
  Real decay = 0.99;  // running-mean decay
};

// Rescales the global gradient norm down to factor * m when it exceeds that
// threshold, where m is an exponential moving average of past (clipped)
// norms. The first call only seeds m.
class GradientClipper {
 public:
  explicit GradientClipper(ClipConfig config = {}) : config_(config) {}

  // Returns the norm before clipping.
  Real clip(ParameterSet& params);
  Real threshold() const { return initialized_ ? config_.factor * mean_ : 0.0; }
  Real mean_norm() const { return mean_; }
  bool clipped_last() const { return clipped_last_; }

 private:
  ClipConfig config_;
  Real mean_ = 0.0;
  bool initialized_ = false;
  bool clipped_last_ = false;
};

Real global_grad_norm(const ParameterSet& params);

struct TrainConfig {
  std::size_t max_epochs = 100;
  // Training stops once more than `patience` consecutive evaluations fail to
  // improve the best development UAS.
  std::size_t patience = 10;
  LossWeights weights;
  AdaDeltaConfig adadelta;
  ClipConfig clip;
  std::uint64_t seed = 1;
  DecodeMode dev_decode = DecodeMode::GreedyThenCle;
  bool shuffle = true;
  std::size_t threads = 1;
};

std::string to_json(const TrainConfig& config);
TrainConfig train_config_from_json(std::string_view json, TrainConfig base = {});

struct EpochRecord {
  std::size_t epoch = 0;
  Real loss = 0.0;
  Real loss_heads = 0.0;
  Real loss_labels = 0.0;
  std::optional<Real> loss_pos;
  EvalReport dev;
  Real grad_norm_mean = 0.0;
  Real grad_norm_max = 0.0;
  std::size_t clipped_steps = 0;
  std::size_t steps = 0;
  bool improved = false;

  // One JSON line, no wall-clock fields.
  std::string to_json() const;
};

struct TrainResult {
  std::vector<EpochRecord> log;
  std::size_t best_epoch = 0;
  double best_uas = -1.0;
  std::size_t dropped_sentences = 0;
};

class Trainer {
 public:
  using EpochCallback = std::function<void(const EpochRecord&)>;

  struct StepStats {
    Real loss = 0.0;
    Real loss_heads = 0.0;
    Real loss_labels = 0.0;
    std::optional<Real> loss_pos;
    Real grad_norm = 0.0;
    bool clipped = false;
  };

  Trainer(Model& model, TrainConfig config);

  // Sentences whose gold heads are not a tree are skipped and counted.
  // Development UAS decides early stopping; the training set stands in when
  // dev is empty. The best parameters are restored before returning.
  TrainResult train(std::span<const Sentence> train, std::span<const Sentence> dev,
                    const EpochCallback& on_epoch = {});

  // One forward/backward/update on a single sentence.
  StepStats step(const EncodedSentence& sentence);

  const TrainConfig& config() const { return config_; }

 private:
  Model& model_;
  TrainConfig config_;
  std::mt19937_64 rng_;
  AdaDelta optimizer_;
  GradientClipper clipper_;
};

}  // namespace podep
