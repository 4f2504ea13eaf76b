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


#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "commands.hpp"
#include "podep/checkpoint.hpp"
#include "podep/conllu.hpp"
#include "podep/decoder.hpp"
#include "podep/model.hpp"
#include "test_support.hpp"

using namespace podep;
using podep::testing::fixture;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run podep_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("podep_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path(const std::string& name) { return (scratch() / name).string(); }

void write(const std::string& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

const std::vector<std::string> kSmall{"--filters", "1:8,2:8",       "--projection",    "32", "--highway", "1",
                                      "--layers",  "1",             "--hidden",        "16", "--scorer-hidden",
                                      "32",        "--label-hidden", "16"};

std::vector<std::string> train_args(const std::string& model, std::vector<std::string> extra) {
  std::vector<std::string> a{"train", "--train", fixture("toy_train.conllu").string(), "--model", path(model)};
  a.insert(a.end(), kSmall.begin(), kSmall.end());
  a.insert(a.end(), extra.begin(), extra.end());
  return a;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

// Three-epoch model shared by several cases.
const std::string& weak_model() {
  static const std::string p = [] {
    const Run r = podep_cli(train_args("weak.ckpt", {"--epochs", "3", "--log", path("weak.jsonl")}));
    REQUIRE(r.code == 0);
    return path("weak.ckpt");
  }();
  return p;
}

std::vector<std::vector<int>> heads_of(const std::vector<Sentence>& corpus) {
  std::vector<std::vector<int>> out;
  for (const Sentence& s : corpus) {
    std::vector<int> h;
    for (const Token& t : s.tokens) h.push_back(t.head);
    out.push_back(h);
  }
  return out;
}

}  // namespace

TEST_CASE("train writes a checkpoint and one log line per epoch") {
  const Run r = podep_cli(train_args("smoke.ckpt", {"--epochs", "2"}));
  REQUIRE(r.code == 0);
  const auto log = lines(r.out);
  REQUIRE(log.size() == 3);
  CHECK(log[0].starts_with("{\"epoch\":1"));
  CHECK(log[1].find("\"dev_uas\"") != std::string::npos);
  CHECK(log[2].starts_with("best epoch"));
  CHECK(fs::exists(path("smoke.ckpt")));
  CHECK_NOTHROW(load_checkpoint(path("smoke.ckpt")));
}

TEST_CASE("pos head flag controls the pos loss term in the log") {
  const Run on = podep_cli(train_args("pos_on.ckpt", {"--epochs", "1", "--pos-head", "on"}));
  const Run off = podep_cli(train_args("pos_off.ckpt", {"--epochs", "1", "--pos-head", "off"}));
  REQUIRE(on.code == 0);
  REQUIRE(off.code == 0);
  CHECK(lines(on.out)[0].find("\"loss_pos\"") != std::string::npos);
  CHECK(lines(off.out)[0].find("\"loss_pos\"") == std::string::npos);
}

TEST_CASE("same seed gives the same first log line") {
  const Run a = podep_cli(train_args("seed_a.ckpt", {"--epochs", "1", "--seed", "11"}));
  const Run b = podep_cli(train_args("seed_b.ckpt", {"--epochs", "1", "--seed", "11"}));
  const Run c = podep_cli(train_args("seed_c.ckpt", {"--epochs", "1", "--seed", "12"}));
  REQUIRE(a.code == 0);
  CHECK(lines(a.out)[0] == lines(b.out)[0]);
  CHECK(lines(a.out)[0] != lines(c.out)[0]);
}

TEST_CASE("config file overrides defaults and flags override the file") {
  write(path("config.json"), R"({"tagger": {"hidden": 12}, "scorer": {"attention": "soft"},
                                 "training": {"max_epochs": 3, "seed": 5}})");
  const Run r = podep_cli({"train", "--train", fixture("toy_train.conllu").string(), "--model", path("cfg.ckpt"),
                           "--config", path("config.json"), "--epochs", "1", "--projection", "16", "--filters",
                           "1:4", "--highway", "0", "--layers", "1"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out).size() == 2);  // flag beat max_epochs 3
  CheckpointInfo info;
  const Model m = load_checkpoint(path("cfg.ckpt"), &info);
  CHECK(m.config().tagger.hidden == 12);
  CHECK(m.config().scorer.attention == AttentionMode::Soft);
  CHECK(m.config().reader.projection_dim == 16);
  CHECK(m.config().scorer.hidden == ModelConfig{}.scorer.hidden);
  CHECK(info.seed == 5);
}

TEST_CASE("train rejects bad input") {
  CHECK(podep_cli({"train", "--model", path("x.ckpt")}).code != 0);
  CHECK(podep_cli({"train", "--train", path("missing.conllu"), "--model", path("x.ckpt")}).code != 0);
  CHECK(podep_cli(train_args("x.ckpt", {"--attention", "sideways"})).code != 0);
  CHECK(podep_cli(train_args("x.ckpt", {"--filters", "3"})).code != 0);
  write(path("bad.json"), "{not json");
  CHECK(podep_cli(train_args("x.ckpt", {"--config", path("bad.json")})).code != 0);
  CHECK(podep_cli({}).code != 0);
}

TEST_CASE("parse output is valid CoNLL-U with every head filled") {
  const Run r = podep_cli({"parse", "--model", weak_model(), "--input", fixture("polish_sample.conllu").string()});
  REQUIRE(r.code == 0);
  const auto parsed = parse_conllu(r.out);
  const auto input = read_conllu_file(fixture("polish_sample.conllu"));
  REQUIRE(parsed.size() == input.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    CHECK(parsed[i].comments == input[i].comments);
    for (std::size_t w = 0; w < parsed[i].size(); ++w) {
      CHECK(parsed[i].tokens[w].form == input[i].tokens[w].form);
      CHECK(parsed[i].tokens[w].feats == input[i].tokens[w].feats);
      CHECK(parsed[i].tokens[w].misc == input[i].tokens[w].misc);
      CHECK(parsed[i].tokens[w].head >= 0);
      CHECK(!parsed[i].tokens[w].deprel.empty());
    }
  }
  CHECK(r.err.find("cycles") != std::string::npos);
  CHECK(r.err.find("multiple root children") != std::string::npos);
}

TEST_CASE("parse accepts pre-tokenized text") {
  write(path("raw.txt"), "the dog barks\n\n  Big cats   sleep .\n");
  const Run r = podep_cli({"parse", "--model", weak_model(), "--input", path("raw.txt"), "--output", path("raw.out")});
  REQUIRE(r.code == 0);
  const auto parsed = read_conllu_file(path("raw.out"));
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[1].size() == 4);
  CHECK(parsed[1].tokens[2].form == "sleep");
}

TEST_CASE("parse of empty input prints nothing and succeeds") {
  write(path("empty.txt"), "");
  const Run r = podep_cli({"parse", "--model", weak_model(), "--input", path("empty.txt")});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
}

TEST_CASE("parse rejects a file that is not a checkpoint") {
  const Run r = podep_cli({"parse", "--model", fixture("toy_train.conllu").string(), "--input", path("empty.txt")});
  CHECK(r.code != 0);
  CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("greedy and spanning-tree decoding differ only on cyclic greedy output") {
  const std::string input = fixture("toy_train.conllu").string();
  REQUIRE(podep_cli(train_args("ten.ckpt", {"--epochs", "10", "--log", path("ten.jsonl")})).code == 0);
  REQUIRE(podep_cli({"train", "--train", input, "--model", path("twenty.ckpt"), "--log", path("twenty.jsonl"),
                     "--filters", "1:16,2:16,3:16,4:16", "--projection", "128", "--highway", "1", "--layers", "1",
                     "--hidden", "64", "--scorer-hidden", "128", "--label-hidden", "32", "--dropout-birnn", "0.5",
                     "--epochs", "20"})
              .code == 0);
  std::size_t cyclic = 0, acyclic = 0;
  for (const std::string& model : {weak_model(), path("ten.ckpt"), path("twenty.ckpt")}) {
    const Run g = podep_cli({"parse", "--model", model, "--input", input, "--decode", "greedy"});
    const Run c = podep_cli({"parse", "--model", model, "--input", input, "--decode", "cle"});
    REQUIRE(g.code == 0);
    REQUIRE(c.code == 0);
    const auto greedy = heads_of(parse_conllu(g.out));
    const auto cle = heads_of(parse_conllu(c.out));
    REQUIRE(greedy.size() == cle.size());
    for (std::size_t i = 0; i < greedy.size(); ++i) {
      CHECK(is_arborescence(cle[i]));
      if (find_cycles(greedy[i]).empty()) {
        CHECK(greedy[i] == cle[i]);
        ++acyclic;
      } else {
        CHECK(greedy[i] != cle[i]);
        ++cyclic;
      }
    }
  }
  CHECK(cyclic > 0);
  CHECK(acyclic > 0);
}

TEST_CASE("parse is independent of the thread count") {
  const std::string input = fixture("toy_train.conllu").string();
  const Run one = podep_cli({"parse", "--model", weak_model(), "--input", input, "--threads", "1"});
  const Run many = podep_cli({"parse", "--model", weak_model(), "--input", input, "--threads", "8"});
  CHECK(one.out == many.out);
  CHECK(worker_count(8) <= 2);  // PODEP_THREADS=2 under ctest
}

TEST_CASE("eval prints the attachment table") {
  const std::string gold = fixture("metrics_gold.conllu").string(), pred = fixture("metrics_pred.conllu").string();
  SUBCASE("identical files") {
    const Run r = podep_cli({"eval", "--gold", gold, "--pred", gold});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("UAS          100.00") != std::string::npos);
    CHECK(r.out.find("LAS          100.00") != std::string::npos);
  }
  SUBCASE("fixture values") {
    const Run r = podep_cli({"eval", "--gold", gold, "--pred", pred});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("LA            90.00") != std::string::npos);
    CHECK(r.out.find("UAS           85.00") != std::string::npos);
    CHECK(r.out.find("LAS           75.00") != std::string::npos);
    CHECK(r.out.find("tokens           20") != std::string::npos);
  }
  SUBCASE("punctuation excluded") {
    const Run r = podep_cli({"eval", "--gold", gold, "--pred", pred, "--exclude-punct", "--json"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\"uas\":93.33") != std::string::npos);
    CHECK(r.out.find("\"tokens\":15") != std::string::npos);
  }
  SUBCASE("misaligned files") {
    const Run r = podep_cli({"eval", "--gold", gold, "--pred", fixture("toy_train.conllu").string()});
    CHECK(r.code != 0);
  }
}

TEST_CASE("inspect prints an n by n+1 probability table") {
  const Run r = podep_cli({"inspect", "--model", weak_model(), "--sentence", "the old dog barks"});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "word\tROOT\tthe\told\tdog\tbarks");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::istringstream in(rows[i]);
    std::string form;
    std::getline(in, form, '\t');
    double sum = 0;
    std::size_t cols = 0;
    for (std::string cell; std::getline(in, cell, '\t'); ++cols) sum += std::stod(cell);
    CHECK(cols == 5);
    CHECK(std::abs(sum - 1.0) < 1e-6);
  }
  CHECK(podep_cli({"inspect", "--model", weak_model()}).code != 0);
  CHECK(podep_cli({"inspect", "--model", weak_model(), "--input", fixture("toy_train.conllu").string(), "--index",
                   "99"})
            .code != 0);
}

TEST_CASE("an overfit model reproduces the training trees and has peaked rows") {
  const std::string train = fixture("toy_train.conllu").string();
  const Run t = podep_cli({"train", "--train", train, "--model", path("overfit.ckpt"), "--log", path("overfit.jsonl"),
                           "--filters", "1:16,2:16,3:16,4:16", "--projection", "128", "--highway", "1", "--layers",
                           "1", "--hidden", "64", "--scorer-hidden", "128", "--label-hidden", "32", "--dropout-birnn",
                           "0.5", "--epochs", "200", "--patience", "200"});
  REQUIRE(t.code == 0);
  const Run p = podep_cli({"parse", "--model", path("overfit.ckpt"), "--input", train});
  REQUIRE(p.code == 0);
  CHECK(heads_of(parse_conllu(p.out)) == heads_of(read_conllu_file(train)));

  const Run i = podep_cli({"inspect", "--model", path("overfit.ckpt"), "--input", train, "--index", "3"});
  REQUIRE(i.code == 0);
  const auto rows = lines(i.out);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    std::istringstream in(rows[r]);
    std::string cell;
    std::getline(in, cell, '\t');
    double top = 0;
    while (std::getline(in, cell, '\t')) top = std::max(top, std::stod(cell));
    CHECK(top > 0.9);
  }
}
