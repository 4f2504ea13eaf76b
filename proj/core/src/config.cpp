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

#include "podep/config.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "podep/errors.hpp"

namespace podep {

std::vector<FilterSpec> default_filter_spec() {
  std::vector<FilterSpec> spec;
  for (std::size_t k = 1; k <= 6; ++k) spec.push_back({k, 50 * k});
  return spec;
}

std::size_t ReaderConfig::filter_count() const {
  std::size_t n = 0;
  for (const FilterSpec& f : filters) n += f.count;
  return n;
}

std::size_t ReaderConfig::max_width() const {
  std::size_t w = 0;
  for (const FilterSpec& f : filters) w = std::max(w, f.width);
  return w;
}

std::size_t TaggerConfig::branch_layer() const {
  if (pos_branch_layer == kPenultimate) return layers - 1;
  return static_cast<std::size_t>(pos_branch_layer);
}

std::string_view to_string(AttentionMode mode) { return mode == AttentionMode::Soft ? "soft" : "hard"; }

AttentionMode attention_mode_from_string(std::string_view text) {
  if (text == "soft") return AttentionMode::Soft;
  if (text == "hard") return AttentionMode::Hard;
  throw std::invalid_argument("unknown attention mode '" + std::string(text) + "'");
}

void ModelConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("model config: " + what); };
  if (reader.char_embed_dim == 0) fail("char_embed_dim must be positive");
  if (reader.filters.empty()) fail("at least one filter width required");
  std::set<std::size_t> widths;
  for (const FilterSpec& f : reader.filters) {
    if (f.width == 0 || f.count == 0) fail("filter widths and counts must be positive");
    if (!widths.insert(f.width).second) fail("filter width " + std::to_string(f.width) + " listed twice");
  }
  if (reader.projection_dim == 0) fail("projection_dim must be positive");
  if (tagger.layers == 0) fail("tagger needs at least one layer");
  if (tagger.hidden == 0) fail("tagger hidden size must be positive");
  if (tagger.pos_branch_layer != kPenultimate &&
      (tagger.pos_branch_layer < 0 || static_cast<std::size_t>(tagger.pos_branch_layer) > tagger.layers)) {
    fail("pos_branch_layer outside [0, layers]");
  }
  if (scorer.hidden == 0 || scorer.label_hidden == 0 || scorer.maxout_pieces == 0) {
    fail("scorer sizes must be positive");
  }
  for (Real r : {dropout.reader, dropout.birnn, dropout.labeler}) {
    if (r < 0.0 || r >= 1.0) fail("dropout rates must lie in [0, 1)");
  }
}

std::string to_json(const ModelConfig& c) {
  nlohmann::ordered_json filters = nlohmann::ordered_json::array();
  for (const FilterSpec& f : c.reader.filters) filters.push_back({{"width", f.width}, {"count", f.count}});
  nlohmann::ordered_json j;
  j["reader"] = {{"char_embed_dim", c.reader.char_embed_dim},
                 {"filters", filters},
                 {"projection_dim", c.reader.projection_dim},
                 {"highway_layers", c.reader.highway_layers},
                 {"highway_gate_bias", c.reader.highway_gate_bias}};
  j["tagger"] = {{"layers", c.tagger.layers},
                 {"hidden", c.tagger.hidden},
                 {"pos_head", c.tagger.pos_head_enabled},
                 {"pos_branch_layer", c.tagger.pos_branch_layer}};
  j["scorer"] = {{"hidden", c.scorer.hidden},
                 {"label_hidden", c.scorer.label_hidden},
                 {"maxout_pieces", c.scorer.maxout_pieces},
                 {"attention", std::string(to_string(c.scorer.attention))}};
  j["dropout"] = {{"reader", c.dropout.reader}, {"birnn", c.dropout.birnn}, {"labeler", c.dropout.labeler}};
  return j.dump();
}

ModelConfig model_config_from_json(std::string_view text, ModelConfig c) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    auto get = [](const nlohmann::json& obj, const char* key, auto& out) {
      if (obj.contains(key)) out = obj.at(key).get<std::remove_reference_t<decltype(out)>>();
    };
    if (j.contains("reader")) {
      const auto& r = j.at("reader");
      get(r, "char_embed_dim", c.reader.char_embed_dim);
      get(r, "projection_dim", c.reader.projection_dim);
      get(r, "highway_layers", c.reader.highway_layers);
      get(r, "highway_gate_bias", c.reader.highway_gate_bias);
      if (r.contains("filters")) {
        c.reader.filters.clear();
        for (const auto& f : r.at("filters")) {
          c.reader.filters.push_back({f.at("width").get<std::size_t>(), f.at("count").get<std::size_t>()});
        }
      }
    }
    if (j.contains("tagger")) {
      const auto& t = j.at("tagger");
      get(t, "layers", c.tagger.layers);
      get(t, "hidden", c.tagger.hidden);
      get(t, "pos_head", c.tagger.pos_head_enabled);
      get(t, "pos_branch_layer", c.tagger.pos_branch_layer);
    }
    if (j.contains("scorer")) {
      const auto& s = j.at("scorer");
      get(s, "hidden", c.scorer.hidden);
      get(s, "label_hidden", c.scorer.label_hidden);
      get(s, "maxout_pieces", c.scorer.maxout_pieces);
      if (s.contains("attention")) c.scorer.attention = attention_mode_from_string(s.at("attention").get<std::string>());
    }
    if (j.contains("dropout")) {
      const auto& d = j.at("dropout");
      get(d, "reader", c.dropout.reader);
      get(d, "birnn", c.dropout.birnn);
      get(d, "labeler", c.dropout.labeler);
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("model config: ") + e.what());
  }
  return c;
}

}  // namespace podep
