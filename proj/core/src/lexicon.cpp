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

#include "podep/lexicon.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"
#include "podep/errors.hpp"
#include "podep/utf8.hpp"

namespace podep {

AttributeVocab::AttributeVocab(std::string name) : name_(std::move(name)) { values_.emplace_back("<unk>"); }

int AttributeVocab::add(const std::string& value) {
  if (auto it = index_.find(value); it != index_.end()) return it->second;
  const int id = static_cast<int>(values_.size());
  values_.push_back(value);
  index_.emplace(value, id);
  return id;
}

int AttributeVocab::encode(std::string_view value) const {
  auto it = index_.find(std::string(value));
  return it == index_.end() ? kUnk : it->second;
}

int Lexicon::add_char(char32_t c) {
  if (auto it = char_index_.find(c); it != char_index_.end()) return it->second;
  const int id = static_cast<int>(chars_.size()) + kReservedChars;
  chars_.push_back(c);
  char_index_.emplace(c, id);
  return id;
}

int Lexicon::add_label(const std::string& label) {
  if (auto it = label_index_.find(label); it != label_index_.end()) return it->second;
  const int id = static_cast<int>(labels_.size());
  labels_.push_back(label);
  label_index_.emplace(label, id);
  return id;
}

AttributeVocab& Lexicon::attribute(const std::string& name) {
  for (auto& a : attributes_) {
    if (a.name() == name) return a;
  }
  return attributes_.emplace_back(name);
}

Lexicon Lexicon::build(std::span<const Sentence> train) {
  std::size_t tokens = 0;
  for (const Sentence& s : train) tokens += s.size();
  if (tokens == 0) throw std::invalid_argument("build_lexicon: empty training corpus");

  Lexicon lex;
  for (const Sentence& s : train) {
    for (const Token& t : s.tokens) {
      for (char32_t c : decode_utf8(t.form)) lex.add_char(c);
      if (!t.deprel.empty()) lex.add_label(t.deprel);
      if (!t.upos.empty()) lex.attribute(std::string(kUposAttribute)).add(t.upos);
      for (const auto& [attr, value] : t.feats) lex.attribute(attr).add(value);
    }
  }
  std::stable_sort(lex.attributes_.begin(), lex.attributes_.end(),
                   [](const AttributeVocab& a, const AttributeVocab& b) { return a.name() < b.name(); });
  return lex;
}

int Lexicon::char_id(char32_t c) const {
  auto it = char_index_.find(c);
  return it == char_index_.end() ? kUnk : it->second;
}

char32_t Lexicon::decode_char(int id) const {
  if (id < kReservedChars) throw std::out_of_range("decode_char: reserved id " + std::to_string(id));
  return chars_.at(static_cast<std::size_t>(id - kReservedChars));
}

std::vector<int> Lexicon::encode_word(std::string_view form) const {
  const std::u32string chars = decode_utf8(form);
  std::vector<int> ids;
  ids.reserve(chars.size() + 2);
  ids.push_back(kBow);
  for (char32_t c : chars) ids.push_back(char_id(c));
  ids.push_back(kEow);
  return ids;
}

std::optional<int> Lexicon::label_id(std::string_view label) const {
  auto it = label_index_.find(std::string(label));
  if (it == label_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<int> Lexicon::attribute_targets(const Token& token) const {
  std::vector<int> targets;
  targets.reserve(attributes_.size());
  for (const AttributeVocab& a : attributes_) {
    const std::string* value = a.name() == kUposAttribute ? (token.upos.empty() ? nullptr : &token.upos)
                                                          : token.feats.get(a.name());
    targets.push_back(value ? a.encode(*value) : -1);
  }
  return targets;
}

std::string Lexicon::to_json() const {
  nlohmann::json j;
  j["chars"] = nlohmann::json::array();
  for (char32_t c : chars_) j["chars"].push_back(static_cast<std::uint32_t>(c));
  j["labels"] = labels_;
  j["attributes"] = nlohmann::json::array();
  for (const AttributeVocab& a : attributes_) {
    nlohmann::json values = nlohmann::json::array();
    for (std::size_t i = 1; i < a.size(); ++i) values.push_back(a.decode(static_cast<int>(i)));
    j["attributes"].push_back({{"name", a.name()}, {"values", values}});
  }
  return j.dump();
}

Lexicon Lexicon::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("lexicon: ") + e.what());
  }
  Lexicon lex;
  try {
    for (const auto& c : j.at("chars")) lex.add_char(static_cast<char32_t>(c.get<std::uint32_t>()));
    for (const auto& l : j.at("labels")) lex.add_label(l.get<std::string>());
    for (const auto& a : j.at("attributes")) {
      AttributeVocab& vocab = lex.attributes_.emplace_back(a.at("name").get<std::string>());
      for (const auto& v : a.at("values")) vocab.add(v.get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("lexicon: ") + e.what());
  }
  return lex;
}

}  // namespace podep
