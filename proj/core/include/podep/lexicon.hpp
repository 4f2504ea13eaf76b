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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "podep/conllu.hpp"

namespace podep {

// Value inventory of one POS attribute. Id 0 is the attribute's UNK value.
class AttributeVocab {
 public:
  static constexpr int kUnk = 0;

  explicit AttributeVocab(std::string name);

  const std::string& name() const { return name_; }
  std::size_t size() const { return values_.size(); }
  int add(const std::string& value);
  int encode(std::string_view value) const;
  const std::string& decode(int id) const { return values_.at(static_cast<std::size_t>(id)); }

 private:
  std::string name_;
  std::vector<std::string> values_;
  std::unordered_map<std::string, int> index_;
};

// Character, dependency-label and POS-attribute vocabularies built from the
// training split. Characters are Unicode scalar values.
class Lexicon {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kBow = 2;
  static constexpr int kEow = 3;
  static constexpr int kReservedChars = 4;
  // The coarse tag column joins the FEATS attributes under this name.
  static constexpr std::string_view kUposAttribute = "UPOS";

  // Throws std::invalid_argument for an empty corpus.
  static Lexicon build(std::span<const Sentence> train);

  std::size_t char_count() const { return chars_.size() + kReservedChars; }
  int char_id(char32_t c) const;
  char32_t decode_char(int id) const;  // only for non-reserved ids
  // [BOW] + ids + [EOW]
  std::vector<int> encode_word(std::string_view form) const;

  std::size_t label_count() const { return labels_.size(); }
  std::optional<int> label_id(std::string_view label) const;
  const std::string& label(int id) const { return labels_.at(static_cast<std::size_t>(id)); }

  const std::vector<AttributeVocab>& attributes() const { return attributes_; }
  // Target id per attribute for a token; ignore marker where the attribute is absent.
  std::vector<int> attribute_targets(const Token& token) const;

  std::string to_json() const;
  static Lexicon from_json(std::string_view json);

  friend bool operator==(const Lexicon& a, const Lexicon& b) { return a.to_json() == b.to_json(); }

 private:
  int add_char(char32_t c);
  int add_label(const std::string& label);
  AttributeVocab& attribute(const std::string& name);

  std::vector<char32_t> chars_;
  std::unordered_map<char32_t, int> char_index_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> label_index_;
  std::vector<AttributeVocab> attributes_;
};

}  // namespace podep
