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

#include "podep/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "podep/errors.hpp"

namespace podep {
namespace {

double percent(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

template <typename HeadAt, typename LabelAt>
EvalCounts score_sentence(const Sentence& gold, HeadAt head_at, LabelAt label_at, const EvalOptions& options) {
  EvalCounts c;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const Token& g = gold.tokens[i];
    if (options.exclude_punct && is_punctuation(g)) continue;
    const bool head_ok = head_at(i) == g.head;
    const bool label_ok = label_at(i) == g.deprel;
    ++c.tokens;
    c.heads += head_ok;
    c.labels += label_ok;
    c.both += head_ok && label_ok;
  }
  return c;
}

}  // namespace

EvalReport EvalReport::from_counts(const EvalCounts& counts) {
  EvalReport r;
  r.counts = counts;
  r.token_count = counts.tokens;
  r.la = percent(counts.labels, counts.tokens);
  r.uas = percent(counts.heads, counts.tokens);
  r.las = percent(counts.both, counts.tokens);
  return r;
}

bool is_punctuation(const Token& gold) { return gold.upos == "PUNCT" || gold.deprel == "punct"; }

EvalReport attachment_scores(std::span<const Sentence> gold, std::span<const Sentence> pred,
                             const EvalOptions& options) {
  if (gold.size() != pred.size()) {
    throw AlignmentError("gold has " + std::to_string(gold.size()) + " sentences, prediction has " +
                             std::to_string(pred.size()),
                         std::min(gold.size(), pred.size()));
  }
  EvalCounts total;
  std::vector<EvalCounts> per;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    const Sentence& p = pred[s];
    if (p.size() != gold[s].size()) {
      throw AlignmentError("gold has " + std::to_string(gold[s].size()) + " tokens, prediction has " +
                               std::to_string(p.size()),
                           s);
    }
    const EvalCounts c = score_sentence(
        gold[s], [&](std::size_t i) { return p.tokens[i].head; },
        [&](std::size_t i) -> const std::string& { return p.tokens[i].deprel; }, options);
    total += c;
    if (options.per_sentence) per.push_back(c);
  }
  EvalReport r = EvalReport::from_counts(total);
  r.per_sentence = std::move(per);
  return r;
}

EvalReport attachment_scores(std::span<const Sentence> gold, std::span<const ParseResult> pred,
                             const Lexicon& lexicon, const EvalOptions& options) {
  if (gold.size() != pred.size()) {
    throw AlignmentError("gold has " + std::to_string(gold.size()) + " sentences, prediction has " +
                             std::to_string(pred.size()),
                         std::min(gold.size(), pred.size()));
  }
  static const std::string kNone;
  EvalCounts total;
  std::vector<EvalCounts> per;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    const ParseResult& p = pred[s];
    if (p.heads.size() != gold[s].size() || p.labels.size() != gold[s].size()) {
      throw AlignmentError("gold has " + std::to_string(gold[s].size()) + " tokens, prediction has " +
                               std::to_string(p.heads.size()),
                           s);
    }
    const EvalCounts c = score_sentence(
        gold[s], [&](std::size_t i) { return p.heads[i]; },
        [&](std::size_t i) -> const std::string& {
          return p.labels[i] >= 0 ? lexicon.label(p.labels[i]) : kNone;
        },
        options);
    total += c;
    if (options.per_sentence) per.push_back(c);
  }
  EvalReport r = EvalReport::from_counts(total);
  r.per_sentence = std::move(per);
  return r;
}

std::string format_report_table(const EvalReport& report) {
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof buf, "%-8s %10s %10s\n", "metric", "score", "correct");
  out += buf;
  std::snprintf(buf, sizeof buf, "%-8s %10.2f %10zu\n", "LA", report.la, report.counts.labels);
  out += buf;
  std::snprintf(buf, sizeof buf, "%-8s %10.2f %10zu\n", "UAS", report.uas, report.counts.heads);
  out += buf;
  std::snprintf(buf, sizeof buf, "%-8s %10.2f %10zu\n", "LAS", report.las, report.counts.both);
  out += buf;
  std::snprintf(buf, sizeof buf, "%-8s %10zu\n", "tokens", report.token_count);
  out += buf;
  return out;
}

std::string format_report_json(const EvalReport& report) {
  auto round2 = [](double v) { return std::round(v * 100.0) / 100.0; };
  nlohmann::ordered_json j;
  j["la"] = round2(report.la);
  j["uas"] = round2(report.uas);
  j["las"] = round2(report.las);
  j["tokens"] = report.token_count;
  j["correct_heads"] = report.counts.heads;
  j["correct_labels"] = report.counts.labels;
  j["correct_both"] = report.counts.both;
  return j.dump();
}

}  // namespace podep
