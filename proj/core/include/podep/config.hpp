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
#include <string>
#include <string_view>
#include <vector>

#include "podep/tensor.hpp"

namespace podep {

struct FilterSpec {
  std::size_t width = 1;
  std::size_t count = 1;
  friend bool operator==(const FilterSpec&, const FilterSpec&) = default;
};

// 50 * k filters of width k for k = 1..6, 1050 in total.
std::vector<FilterSpec> default_filter_spec();

struct ReaderConfig {
  std::size_t char_embed_dim = 16;
  std::vector<FilterSpec> filters = default_filter_spec();
  std::size_t projection_dim = 512;
  std::size_t highway_layers = 3;
  Real highway_gate_bias = -2.0;

  std::size_t filter_count() const;
  std::size_t max_width() const;
  friend bool operator==(const ReaderConfig&, const ReaderConfig&) = default;
};

// Branch index b feeds the POS head with the output of the b-th BiGRU layer;
// 0 means the reader output. kPenultimate resolves to layers - 1.
inline constexpr int kPenultimate = -1;

struct TaggerConfig {
  std::size_t layers = 2;
  std::size_t hidden = 548;
  bool pos_head_enabled = true;
  int pos_branch_layer = kPenultimate;

  std::size_t branch_layer() const;
  friend bool operator==(const TaggerConfig&, const TaggerConfig&) = default;
};

enum class AttentionMode { Soft, Hard };
std::string_view to_string(AttentionMode mode);
AttentionMode attention_mode_from_string(std::string_view text);

struct ScorerConfig {
  std::size_t hidden = 384;
  std::size_t label_hidden = 256;
  std::size_t maxout_pieces = 2;
  AttentionMode attention = AttentionMode::Hard;
  friend bool operator==(const ScorerConfig&, const ScorerConfig&) = default;
};

struct DropoutConfig {
  Real reader = 0.2;
  Real birnn = 0.7;
  Real labeler = 0.5;
  friend bool operator==(const DropoutConfig&, const DropoutConfig&) = default;
};

struct ModelConfig {
  ReaderConfig reader;
  TaggerConfig tagger;
  ScorerConfig scorer;
  DropoutConfig dropout;

  // Throws std::invalid_argument describing the first bad field.
  void validate() const;
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

std::string to_json(const ModelConfig& config);
// Keys missing from json keep the values of base.
ModelConfig model_config_from_json(std::string_view json, ModelConfig base = {});

}  // namespace podep
