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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace podep {

// Ordered attribute=value list of a FEATS column. Order is kept so that
// writing reproduces the input.
class Features {
 public:
  using Item = std::pair<std::string, std::string>;

  // Returns true when an existing attribute was overwritten.
  bool set(std::string attribute, std::string value);
  const std::string* get(std::string_view attribute) const;

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  friend bool operator==(const Features&, const Features&) = default;

 private:
  std::vector<Item> items_;
};

// Head value of a token whose HEAD column was "_" (only with
// ParseOptions::require_heads off).
inline constexpr int kNoHead = -1;

struct Token {
  int id = 0;
  std::string form;
  std::string lemma;
  std::string upos;
  std::string xpos;
  Features feats;
  int head = kNoHead;  // 0 is the artificial root
  std::string deprel;
  std::string deps;
  std::string misc;

  friend bool operator==(const Token&, const Token&) = default;
};

struct Sentence {
  std::vector<Token> tokens;
  std::vector<std::string> comments;  // full lines, leading '#' included

  std::size_t size() const { return tokens.size(); }
  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct ParseOptions {
  // When off, a "_" HEAD parses as kNoHead instead of failing.
  bool require_heads = true;
};

struct ParseReport {
  std::size_t skipped_multiword = 0;
  std::size_t skipped_empty_nodes = 0;
  std::vector<std::string> warnings;
};

// Reads CoNLL-U. Multiword ranges ("1-2") and empty nodes ("1.1") are
// skipped and counted. Throws FormatError (with line number) for malformed
// lines and ValidationError (with 0-based sentence index) for bad ids or
// out-of-range heads.
std::vector<Sentence> parse_conllu(std::istream& in, const ParseOptions& options = {}, ParseReport* report = nullptr);
std::vector<Sentence> parse_conllu(std::string_view text, const ParseOptions& options = {},
                                   ParseReport* report = nullptr);
std::vector<Sentence> read_conllu_file(const std::filesystem::path& path, const ParseOptions& options = {},
                                       ParseReport* report = nullptr);

void write_conllu(std::ostream& out, std::span<const Sentence> sentences);
std::string write_conllu(std::span<const Sentence> sentences);

struct DatasetStats {
  std::size_t token_count = 0;
  std::size_t sentence_count = 0;

  DatasetStats& operator+=(const DatasetStats& other) {
    token_count += other.token_count;
    sentence_count += other.sentence_count;
    return *this;
  }
  friend bool operator==(const DatasetStats&, const DatasetStats&) = default;
};

DatasetStats dataset_stats(std::span<const Sentence> sentences);

// "A=x|B=y" -> {A: x, B: y}; "_" -> {}. A repeated attribute keeps its last
// value and adds a warning. A pair without '=' throws FormatError.
Features split_feats(std::string_view field, std::vector<std::string>* warnings = nullptr);
std::string join_feats(const Features& feats);

// Describes why the gold heads are not a tree rooted at 0 with exactly one
// root child, or nullopt when they are.
std::optional<std::string> tree_violation(const Sentence& sentence);

}  // namespace podep
