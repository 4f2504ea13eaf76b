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

#include "podep/conllu.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "podep/errors.hpp"

namespace podep {
namespace {

constexpr std::size_t kColumns = 10;

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::optional<int> to_int(std::string_view s) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::string field(std::string_view s) { return s == "_" ? std::string() : std::string(s); }
std::string_view column(const std::string& s) { return s.empty() ? std::string_view("_") : std::string_view(s); }

class SentenceBuilder {
 public:
  SentenceBuilder(const ParseOptions& options, ParseReport& report, std::vector<Sentence>& out)
      : options_(options), report_(report), out_(out) {}

  void comment(std::string_view line) { current_.comments.emplace_back(line); }

  void token_line(std::string_view line, std::size_t line_no) {
    const auto cols = split_tabs(line);
    if (cols.size() != kColumns) {
      throw FormatError("expected " + std::to_string(kColumns) + " tab-separated columns, found " +
                            std::to_string(cols.size()),
                        line_no);
    }
    const std::string_view id_field = cols[0];
    if (id_field.find('-') != std::string_view::npos) {
      ++report_.skipped_multiword;
      return;
    }
    if (id_field.find('.') != std::string_view::npos) {
      ++report_.skipped_empty_nodes;
      return;
    }
    const auto id = to_int(id_field);
    if (!id) throw FormatError("non-integer token id '" + std::string(id_field) + "'", line_no);

    Token tok;
    tok.id = *id;
    tok.form = field(cols[1]);
    tok.lemma = field(cols[2]);
    tok.upos = field(cols[3]);
    tok.xpos = field(cols[4]);
    std::vector<std::string> warnings;
    try {
      tok.feats = split_feats(cols[5], &warnings);
    } catch (const FormatError& e) {
      throw FormatError(e.what(), line_no);
    }
    for (auto& w : warnings) report_.warnings.push_back("line " + std::to_string(line_no) + ": " + w);
    if (cols[6] == "_" && !options_.require_heads) {
      tok.head = kNoHead;
    } else {
      const auto head = to_int(cols[6]);
      if (!head) throw FormatError("non-integer head '" + std::string(cols[6]) + "'", line_no);
      tok.head = *head;
    }
    tok.deprel = field(cols[7]);
    tok.deps = field(cols[8]);
    tok.misc = field(cols[9]);
    current_.tokens.push_back(std::move(tok));
  }

  void finish() {
    if (current_.tokens.empty()) {
      if (!current_.comments.empty()) {
        report_.warnings.push_back("comment block without tokens dropped");
      }
      current_ = Sentence();
      return;
    }
    const std::size_t index = out_.size();
    const int n = static_cast<int>(current_.tokens.size());
    for (int i = 0; i < n; ++i) {
      const Token& t = current_.tokens[static_cast<std::size_t>(i)];
      if (t.id != i + 1) {
        throw ValidationError("token ids must run 1..n; position " + std::to_string(i + 1) + " has id " +
                                  std::to_string(t.id),
                              index);
      }
      if (t.head != kNoHead && (t.head < 0 || t.head > n)) {
        throw ValidationError("token " + std::to_string(t.id) + " has head " + std::to_string(t.head) +
                                  " outside [0, " + std::to_string(n) + "]",
                              index);
      }
    }
    out_.push_back(std::move(current_));
    current_ = Sentence();
  }

 private:
  const ParseOptions& options_;
  ParseReport& report_;
  std::vector<Sentence>& out_;
  Sentence current_;
};

}  // namespace

bool Features::set(std::string attribute, std::string value) {
  for (auto& [attr, val] : items_) {
    if (attr == attribute) {
      val = std::move(value);
      return true;
    }
  }
  items_.emplace_back(std::move(attribute), std::move(value));
  return false;
}

const std::string* Features::get(std::string_view attribute) const {
  for (const auto& [attr, val] : items_) {
    if (attr == attribute) return &val;
  }
  return nullptr;
}

Features split_feats(std::string_view text, std::vector<std::string>* warnings) {
  Features feats;
  if (text.empty() || text == "_") return feats;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t bar = text.find('|', start);
    if (bar == std::string_view::npos) bar = text.size();
    const std::string_view pair = text.substr(start, bar - start);
    const std::size_t eq = pair.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw FormatError("malformed feature '" + std::string(pair) + "' (expected Attribute=Value)");
    }
    if (feats.set(std::string(pair.substr(0, eq)), std::string(pair.substr(eq + 1))) && warnings) {
      warnings->push_back("duplicate feature attribute '" + std::string(pair.substr(0, eq)) +
                          "'; last value kept");
    }
    start = bar + 1;
  }
  return feats;
}

std::string join_feats(const Features& feats) {
  std::string out;
  for (const auto& [attr, val] : feats) {
    if (!out.empty()) out += '|';
    out += attr;
    out += '=';
    out += val;
  }
  return out;
}

std::vector<Sentence> parse_conllu(std::istream& in, const ParseOptions& options, ParseReport* report) {
  ParseReport local;
  ParseReport& rep = report ? *report : local;
  std::vector<Sentence> out;
  SentenceBuilder builder(options, rep, out);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      builder.finish();
    } else if (line.front() == '#') {
      builder.comment(line);
    } else {
      builder.token_line(line, line_no);
    }
  }
  builder.finish();
  return out;
}

std::vector<Sentence> parse_conllu(std::string_view text, const ParseOptions& options, ParseReport* report) {
  std::istringstream in{std::string(text)};
  return parse_conllu(in, options, report);
}

std::vector<Sentence> read_conllu_file(const std::filesystem::path& path, const ParseOptions& options,
                                       ParseReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return parse_conllu(in, options, report);
}

void write_conllu(std::ostream& out, std::span<const Sentence> sentences) {
  for (const Sentence& s : sentences) {
    for (const std::string& c : s.comments) {
      if (c.empty() || c.front() != '#') out << "# ";
      out << c << '\n';
    }
    for (const Token& t : s.tokens) {
      const std::string feats = join_feats(t.feats);
      out << t.id << '\t' << column(t.form) << '\t' << column(t.lemma) << '\t' << column(t.upos) << '\t'
          << column(t.xpos) << '\t' << column(feats) << '\t';
      if (t.head == kNoHead) out << '_';
      else out << t.head;
      out << '\t' << column(t.deprel) << '\t' << column(t.deps) << '\t' << column(t.misc) << '\n';
    }
    out << '\n';
  }
}

std::string write_conllu(std::span<const Sentence> sentences) {
  std::ostringstream out;
  write_conllu(out, sentences);
  return out.str();
}

DatasetStats dataset_stats(std::span<const Sentence> sentences) {
  DatasetStats stats;
  stats.sentence_count = sentences.size();
  for (const Sentence& s : sentences) stats.token_count += s.size();
  return stats;
}

std::optional<std::string> tree_violation(const Sentence& sentence) {
  const int n = static_cast<int>(sentence.size());
  int root_children = 0;
  for (const Token& t : sentence.tokens) {
    if (t.head < 0 || t.head > n) return "token " + std::to_string(t.id) + " has no valid head";
    if (t.head == t.id) return "token " + std::to_string(t.id) + " is its own head";
    if (t.head == 0) ++root_children;
  }
  if (root_children != 1) return std::to_string(root_children) + " tokens attached to the root";
  // 0 = unvisited, 1 = on the current walk, 2 = known to reach the root.
  std::vector<int> state(static_cast<std::size_t>(n) + 1, 0);
  state[0] = 2;
  for (int start = 1; start <= n; ++start) {
    int v = start;
    while (state[static_cast<std::size_t>(v)] == 0) {
      state[static_cast<std::size_t>(v)] = 1;
      v = sentence.tokens[static_cast<std::size_t>(v - 1)].head;
    }
    if (state[static_cast<std::size_t>(v)] == 1) return "cycle through token " + std::to_string(v);
    for (v = start; state[static_cast<std::size_t>(v)] == 1; v = sentence.tokens[static_cast<std::size_t>(v - 1)].head) {
      state[static_cast<std::size_t>(v)] = 2;
    }
  }
  return std::nullopt;
}

}  // namespace podep
