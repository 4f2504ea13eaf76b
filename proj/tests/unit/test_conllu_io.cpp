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


#include <sstream>

#include "doctest.h"
#include "podep/conllu.hpp"
#include "podep/errors.hpp"
#include "podep/utf8.hpp"
#include "test_support.hpp"

using namespace podep;
using podep::testing::fixture;
using podep::testing::read_file;

namespace {

std::string line(std::initializer_list<const char*> cols) {
  std::string out;
  for (const char* c : cols) {
    if (!out.empty()) out += '\t';
    out += c;
  }
  return out + '\n';
}

}  // namespace

TEST_CASE("fixture files round-trip byte for byte") {
  for (const char* name : {"toy_train.conllu", "polish_sample.conllu", "metrics_gold.conllu", "metrics_pred.conllu"}) {
    CAPTURE(name);
    const std::string text = read_file(fixture(name));
    CHECK(write_conllu(parse_conllu(text)) == text);
  }
}

TEST_CASE("fields are parsed into tokens") {
  const auto sentences = read_conllu_file(fixture("polish_sample.conllu"));
  REQUIRE(sentences.size() == 2);
  const Sentence& s = sentences[0];
  CHECK(s.comments.size() == 3);
  CHECK(s.comments[0] == "# newdoc id = pl-sample");
  REQUIRE(s.size() == 4);
  const Token& ma = s.tokens[1];
  CHECK(ma.id == 2);
  CHECK(ma.form == "ma");
  CHECK(ma.lemma == "mieć");
  CHECK(ma.upos == "VERB");
  CHECK(ma.xpos == "fin:sg:ter:imperf");
  CHECK(ma.feats.size() == 6);
  CHECK(*ma.feats.get("Tense") == "Pres");
  CHECK(ma.feats.get("Case") == nullptr);
  CHECK(ma.head == 0);
  CHECK(ma.deprel == "root");
  CHECK(ma.deps.empty());
  CHECK(s.tokens[2].misc == "SpaceAfter=No");
  CHECK(s.tokens[3].feats.empty());
  CHECK(sentences[1].tokens[0].form == "Żółw");
}

TEST_CASE("multiword ranges and empty nodes are skipped") {
  ParseReport report;
  const auto sentences = read_conllu_file(fixture("multiword.conllu"), {}, &report);
  REQUIRE(sentences.size() == 1);
  CHECK(sentences[0].size() == 4);
  CHECK(report.skipped_multiword == 1);
  CHECK(report.skipped_empty_nodes == 1);
  CHECK(sentences[0].tokens[0].form == "Poszedł");
  CHECK(sentences[0].tokens[3].head == 1);
  CHECK(dataset_stats(sentences) == DatasetStats{4, 1});
}

TEST_CASE("format errors carry the line number") {
  const std::string text = "# c\n" + line({"1", "a", "_", "X", "_", "_", "0", "root", "_", "_"}) +
                           "2\tb\t_\tX\t_\t_\t1\tdep\t_\n";
  try {
    parse_conllu(text);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_conllu(line({"x", "a", "_", "X", "_", "_", "0", "root", "_", "_"})), FormatError);
  CHECK_THROWS_AS(parse_conllu(line({"1", "a", "_", "X", "_", "_", "h", "root", "_", "_"})), FormatError);
  CHECK_THROWS_AS(parse_conllu(line({"1", "a", "_", "X", "_", "Case", "0", "root", "_", "_"})), FormatError);
}

TEST_CASE("validation errors carry the sentence index") {
  const std::string good = line({"1", "a", "_", "X", "_", "_", "0", "root", "_", "_"}) + "\n";
  const std::string bad_head = line({"1", "a", "_", "X", "_", "_", "0", "root", "_", "_"}) +
                               line({"2", "b", "_", "X", "_", "_", "5", "dep", "_", "_"}) + "\n";
  try {
    parse_conllu(good + bad_head);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.sentence_index() == 1);
  }
  const std::string bad_ids = line({"1", "a", "_", "X", "_", "_", "0", "root", "_", "_"}) +
                              line({"3", "b", "_", "X", "_", "_", "1", "dep", "_", "_"});
  CHECK_THROWS_AS(parse_conllu(bad_ids), ValidationError);
}

TEST_CASE("missing heads are allowed only when requested") {
  const std::string text = line({"1", "a", "_", "X", "_", "_", "_", "_", "_", "_"});
  CHECK_THROWS_AS(parse_conllu(text), FormatError);
  ParseOptions options;
  options.require_heads = false;
  const auto s = parse_conllu(text, options);
  REQUIRE(s.size() == 1);
  CHECK(s[0].tokens[0].head == kNoHead);
  CHECK(write_conllu(s) == text + "\n");
}

TEST_CASE("duplicate feature attributes keep the last value and warn") {
  std::vector<std::string> warnings;
  const Features f = split_feats("Case=Nom|Number=Sing|Case=Acc", &warnings);
  CHECK(f.size() == 2);
  CHECK(*f.get("Case") == "Acc");
  CHECK(warnings.size() == 1);
  CHECK(join_feats(f) == "Case=Acc|Number=Sing");
  CHECK(split_feats("_").empty());

  ParseReport report;
  parse_conllu(line({"1", "a", "_", "X", "_", "A=1|A=2", "0", "root", "_", "_"}), {}, &report);
  CHECK(report.warnings.size() == 1);
}

TEST_CASE("CRLF line endings and trailing blank lines are tolerated") {
  const std::string text = "1\ta\t_\tX\t_\t_\t0\troot\t_\t_\r\n\r\n\r\n";
  const auto s = parse_conllu(text);
  REQUIRE(s.size() == 1);
  CHECK(s[0].tokens[0].deprel == "root");
}

TEST_CASE("dataset statistics") {
  const auto toy = read_conllu_file(fixture("toy_train.conllu"));
  CHECK(dataset_stats(toy) == DatasetStats{200, 32});
  DatasetStats total;
  total += dataset_stats(toy);
  total += dataset_stats(toy);
  CHECK(total == DatasetStats{400, 64});
}

TEST_CASE("tree violations") {
  auto sentence = [](std::vector<int> heads) {
    Sentence s;
    for (std::size_t i = 0; i < heads.size(); ++i) {
      Token t;
      t.id = static_cast<int>(i + 1);
      t.head = heads[i];
      s.tokens.push_back(t);
    }
    return s;
  };
  CHECK_FALSE(tree_violation(sentence({2, 0, 2})));
  CHECK(tree_violation(sentence({2, 1})));
  CHECK(tree_violation(sentence({0, 3, 2})));
  CHECK(tree_violation(sentence({0, 0})));
  CHECK(tree_violation(sentence({1})));
  CHECK(tree_violation(sentence({kNoHead})));
}

TEST_CASE("utf-8 decoding") {
  CHECK(decode_utf8("kot") == U"kot");
  CHECK(decode_utf8("żółw") == U"żółw");
  CHECK(decode_utf8("\xff" "a") == U"�a");
  CHECK(encode_utf8(U"żółw") == "żółw");
  CHECK(encode_utf8(U'\U0001F600') == "\xF0\x9F\x98\x80");
}
