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


#include <algorithm>
#include <random>

#include "doctest.h"
#include "json.hpp"
#include "podep/errors.hpp"
#include "podep/metrics.hpp"
#include "test_support.hpp"

using namespace podep;
using podep::testing::fixture;

namespace {

Sentence make(std::vector<int> heads, std::vector<std::string> labels) {
  Sentence s;
  for (std::size_t i = 0; i < heads.size(); ++i) {
    Token t;
    t.id = static_cast<int>(i + 1);
    t.form = "w";
    t.head = heads[i];
    t.deprel = labels[i];
    s.tokens.push_back(t);
  }
  return s;
}

}  // namespace

TEST_CASE("identical parses score 100") {
  const auto gold = read_conllu_file(fixture("metrics_gold.conllu"));
  const EvalReport r = attachment_scores(gold, gold);
  CHECK(r.la == 100.0);
  CHECK(r.uas == 100.0);
  CHECK(r.las == 100.0);
  CHECK(r.token_count == 20);
}

TEST_CASE("one wrong head out of three") {
  const std::vector<Sentence> gold{make({2, 0, 2}, {"a", "root", "b"})};
  const std::vector<Sentence> pred{make({2, 0, 1}, {"a", "root", "b"})};
  const EvalReport r = attachment_scores(gold, pred);
  CHECK(r.uas == doctest::Approx(66.67).epsilon(1e-4));
  CHECK(r.la == 100.0);
  CHECK(r.las == doctest::Approx(66.67).epsilon(1e-4));
}

TEST_CASE("five sentence fixture") {
  const auto gold = read_conllu_file(fixture("metrics_gold.conllu"));
  const auto pred = read_conllu_file(fixture("metrics_pred.conllu"));
  SUBCASE("all tokens") {
    const EvalReport r = attachment_scores(gold, pred);
    CHECK(r.counts == EvalCounts{20, 17, 18, 15});
    CHECK(r.uas == doctest::Approx(85.00));
    CHECK(r.la == doctest::Approx(90.00));
    CHECK(r.las == doctest::Approx(75.00));
  }
  SUBCASE("punctuation excluded") {
    EvalOptions options;
    options.exclude_punct = true;
    const EvalReport r = attachment_scores(gold, pred, options);
    CHECK(r.counts == EvalCounts{15, 14, 13, 12});
    CHECK(r.uas == doctest::Approx(93.33).epsilon(1e-4));
    CHECK(r.la == doctest::Approx(86.67).epsilon(1e-4));
    CHECK(r.las == doctest::Approx(80.00));
  }
  SUBCASE("per sentence") {
    EvalOptions options;
    options.per_sentence = true;
    const EvalReport r = attachment_scores(gold, pred, options);
    REQUIRE(r.per_sentence.size() == 5);
    CHECK(r.per_sentence[0] == EvalCounts{3, 3, 3, 3});
    CHECK(r.per_sentence[1] == EvalCounts{4, 3, 4, 3});
    CHECK(r.per_sentence[2] == EvalCounts{5, 5, 4, 4});
    CHECK(r.per_sentence[3] == EvalCounts{2, 2, 2, 2});
    CHECK(r.per_sentence[4] == EvalCounts{6, 4, 5, 3});
  }
}

TEST_CASE("parse results are scored through the lexicon") {
  const auto gold = read_conllu_file(fixture("metrics_gold.conllu"));
  const auto pred = read_conllu_file(fixture("metrics_pred.conllu"));
  const Lexicon lex = Lexicon::build(pred);
  std::vector<ParseResult> results;
  for (const Sentence& s : pred) {
    ParseResult r;
    for (const Token& t : s.tokens) {
      r.heads.push_back(t.head);
      r.labels.push_back(*lex.label_id(t.deprel));
    }
    results.push_back(r);
  }
  const EvalReport r = attachment_scores(gold, results, lex);
  CHECK(r.counts == EvalCounts{20, 17, 18, 15});
}

TEST_CASE("misaligned inputs are rejected") {
  const auto gold = read_conllu_file(fixture("metrics_gold.conllu"));
  auto pred = read_conllu_file(fixture("metrics_pred.conllu"));
  pred[3].tokens.pop_back();
  try {
    attachment_scores(gold, pred);
    FAIL("expected AlignmentError");
  } catch (const AlignmentError& e) {
    CHECK(e.sentence_index() == 3);
  }
  pred.pop_back();
  CHECK_THROWS_AS(attachment_scores(gold, pred), AlignmentError);
}

TEST_CASE("punctuation convention") {
  Token t;
  t.upos = "PUNCT";
  CHECK(is_punctuation(t));
  t.upos = "SYM";
  CHECK_FALSE(is_punctuation(t));
  t.deprel = "punct";
  CHECK(is_punctuation(t));
}

TEST_CASE("random predictions respect the score ordering") {
  std::mt19937_64 rng(1);
  const std::vector<std::string> labels{"nsubj", "obj", "root", "det", "punct"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Sentence> gold, pred;
    const int count = 1 + trial % 5;
    for (int s = 0; s < count; ++s) {
      const std::size_t n = 1 + static_cast<std::size_t>(rng() % 12);
      gold.push_back(podep::testing::random_tree_sentence(n, rng, labels));
      Sentence p = podep::testing::random_tree_sentence(n, rng, labels);
      // Keep some gold attachments so scores are spread over the whole range.
      for (std::size_t i = 0; i < n; ++i) {
        if (rng() % 2) p.tokens[i].head = gold.back().tokens[i].head;
        if (rng() % 2) p.tokens[i].deprel = gold.back().tokens[i].deprel;
      }
      pred.push_back(p);
    }
    const EvalReport r = attachment_scores(gold, pred);
    CHECK(r.las <= std::min(r.la, r.uas) + 1e-12);
    CHECK(r.las >= 0.0);
    CHECK(std::max(r.la, r.uas) <= 100.0);

    // Sentence order does not matter.
    std::vector<std::size_t> order(gold.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Sentence> g2, p2;
    for (std::size_t i : order) {
      g2.push_back(gold[i]);
      p2.push_back(pred[i]);
    }
    CHECK(attachment_scores(g2, p2).counts == r.counts);

    // Concatenation is the token-weighted average of the parts.
    const std::size_t cut = gold.size() / 2;
    const std::span<const Sentence> gs(gold), ps(pred);
    const EvalReport a = attachment_scores(gs.first(cut), ps.first(cut));
    const EvalReport b = attachment_scores(gs.subspan(cut), ps.subspan(cut));
    const double weighted = (a.uas * static_cast<double>(a.token_count) + b.uas * static_cast<double>(b.token_count)) /
                            static_cast<double>(a.token_count + b.token_count);
    CHECK(r.uas == doctest::Approx(weighted).epsilon(1e-12));
  }
}

TEST_CASE("report formats") {
  const auto gold = read_conllu_file(fixture("metrics_gold.conllu"));
  const auto pred = read_conllu_file(fixture("metrics_pred.conllu"));
  EvalOptions options;
  options.exclude_punct = true;
  const EvalReport r = attachment_scores(gold, pred, options);
  const std::string table = format_report_table(r);
  CHECK(table.find("UAS           93.33") != std::string::npos);
  CHECK(table.find("LA            86.67") != std::string::npos);
  const auto j = nlohmann::json::parse(format_report_json(r));
  CHECK(j["uas"].get<double>() == 93.33);
  CHECK(j["las"].get<double>() == 80.0);
  CHECK(j["tokens"].get<int>() == 15);
}

TEST_CASE("empty corpora score zero without dividing by zero") {
  const EvalReport r = attachment_scores(std::vector<Sentence>{}, std::vector<Sentence>{});
  CHECK(r.token_count == 0);
  CHECK(r.uas == 0.0);
}
