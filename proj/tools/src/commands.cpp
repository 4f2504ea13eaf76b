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


#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "podep/checkpoint.hpp"
#include "podep/config.hpp"
#include "podep/decoder.hpp"
#include "podep/metrics.hpp"
#include "podep/model.hpp"
#include "podep/training.hpp"

namespace podep::cli {

namespace {

std::string slurp(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Writes to path, or to the fallback stream for "-".
void emit(const std::string& path, std::ostream& fallback, const std::string& text) {
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string percent(std::size_t part, std::size_t whole) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", whole ? 100.0 * static_cast<double>(part) / static_cast<double>(whole) : 0.0);
  return buf;
}

std::vector<FilterSpec> parse_filters(const std::string& text) {
  std::vector<FilterSpec> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    FilterSpec f;
    const char* end = item.data() + item.size();
    if (colon == std::string::npos ||
        std::from_chars(item.data(), item.data() + colon, f.width).ptr != item.data() + colon ||
        std::from_chars(item.data() + colon + 1, end, f.count).ptr != end) {
      throw std::invalid_argument("--filters expects WIDTH:COUNT pairs separated by commas, got '" + item + "'");
    }
    out.push_back(f);
  }
  return out;
}

bool on_off(const std::string& v) { return v == "on"; }

// Flags shared by train and by the architecture part of a config.
struct Overrides {
  CLI::Option* config = nullptr;
  std::string config_path;

  std::optional<std::size_t> char_dim, projection, highway, layers, hidden, scorer_hidden, label_hidden, maxout;
  std::optional<int> pos_branch;
  std::optional<std::string> filters, pos_head, attention, decode;
  std::optional<double> dropout_reader, dropout_birnn, dropout_labeler;
  std::optional<double> alpha_labels, alpha_heads, alpha_pos, clip_factor;
  std::optional<std::size_t> epochs, patience, threads;
  std::optional<std::uint64_t> seed;
  bool no_shuffle = false;

  void attach(CLI::App& app) {
    config = app.add_option("--config", config_path, "JSON file with model and training settings");
    app.add_option("--seed", seed, "Random seed (default 1)");
    app.add_option("--pos-head", pos_head, "Auxiliary POS attribute prediction")->check(CLI::IsMember({"on", "off"}));
    app.add_option("--attention", attention, "Labeler attention")->check(CLI::IsMember({"soft", "hard"}));
    app.add_option("--decode", decode, "Decoder used for development evaluation")
        ->check(CLI::IsMember({"greedy", "greedy_then_cle", "cle"}));
    app.add_option("--char-dim", char_dim, "Character embedding size");
    app.add_option("--filters", filters, "Reader filters as WIDTH:COUNT,...");
    app.add_option("--projection", projection, "Reader projection size");
    app.add_option("--highway", highway, "Number of highway layers");
    app.add_option("--layers", layers, "Number of BiGRU layers");
    app.add_option("--hidden", hidden, "BiGRU hidden size");
    app.add_option("--pos-branch", pos_branch, "Layer feeding the POS head (-1 for the penultimate)");
    app.add_option("--scorer-hidden", scorer_hidden, "Head scorer hidden size");
    app.add_option("--label-hidden", label_hidden, "Labeler hidden size");
    app.add_option("--maxout", maxout, "Maxout pieces in the labeler");
    app.add_option("--dropout-reader", dropout_reader, "Dropout after reader layers");
    app.add_option("--dropout-birnn", dropout_birnn, "Dropout after BiGRU layers");
    app.add_option("--dropout-labeler", dropout_labeler, "Dropout inside the labeler");
    app.add_option("--alpha-labels", alpha_labels, "Weight of the label loss");
    app.add_option("--alpha-heads", alpha_heads, "Weight of the head loss");
    app.add_option("--alpha-pos", alpha_pos, "Weight of the POS loss");
    app.add_option("--clip-factor", clip_factor, "Clip when the gradient norm exceeds this multiple of its running mean");
    app.add_option("--epochs", epochs, "Maximum number of epochs");
    app.add_option("--patience", patience, "Epochs without improvement before stopping");
    app.add_option("--threads", threads, "Worker threads (capped by PODEP_THREADS)");
    app.add_flag("--no-shuffle", no_shuffle, "Keep the training order fixed");
  }

  void apply(ModelConfig& m, TrainConfig& t) const {
    if (config->count() > 0) {
      const std::string text = slurp(config_path);
      m = model_config_from_json(text, m);
      t = train_config_from_json(text, t);
    }
    if (seed) t.seed = *seed;
    if (pos_head) m.tagger.pos_head_enabled = on_off(*pos_head);
    if (attention) m.scorer.attention = attention_mode_from_string(*attention);
    if (decode) t.dev_decode = decode_mode_from_string(*decode);
    if (char_dim) m.reader.char_embed_dim = *char_dim;
    if (filters) m.reader.filters = parse_filters(*filters);
    if (projection) m.reader.projection_dim = *projection;
    if (highway) m.reader.highway_layers = *highway;
    if (layers) m.tagger.layers = *layers;
    if (hidden) m.tagger.hidden = *hidden;
    if (pos_branch) m.tagger.pos_branch_layer = *pos_branch;
    if (scorer_hidden) m.scorer.hidden = *scorer_hidden;
    if (label_hidden) m.scorer.label_hidden = *label_hidden;
    if (maxout) m.scorer.maxout_pieces = *maxout;
    if (dropout_reader) m.dropout.reader = *dropout_reader;
    if (dropout_birnn) m.dropout.birnn = *dropout_birnn;
    if (dropout_labeler) m.dropout.labeler = *dropout_labeler;
    if (alpha_labels) t.weights.labels = *alpha_labels;
    if (alpha_heads) t.weights.heads = *alpha_heads;
    if (alpha_pos) t.weights.pos = *alpha_pos;
    if (clip_factor) t.clip.factor = *clip_factor;
    if (epochs) t.max_epochs = *epochs;
    if (patience) t.patience = *patience;
    if (threads) t.threads = *threads;
    if (no_shuffle) t.shuffle = false;
    m.validate();
  }
};

struct TrainArgs {
  std::string train, dev, model, log = "-";
  Overrides overrides;
};

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  ModelConfig mc;
  TrainConfig tc;
  a.overrides.apply(mc, tc);
  tc.threads = worker_count(tc.threads);

  const auto train = read_conllu_file(a.train);
  if (train.empty()) throw std::runtime_error(a.train + " contains no sentences");
  const auto dev = a.dev.empty() ? std::vector<Sentence>{} : read_conllu_file(a.dev);

  Model model(mc, Lexicon::build(train));
  model.initialize(tc.seed);
  Trainer trainer(model, tc);

  std::ofstream log_file;
  std::ostream* log = &out;
  if (!a.log.empty() && a.log != "-") {
    log_file.open(a.log);
    if (!log_file) throw std::runtime_error("cannot write " + a.log);
    log = &log_file;
  }
  const TrainResult result = trainer.train(train, dev, [&](const EpochRecord& rec) {
    *log << rec.to_json() << '\n';
    log->flush();
  });
  if (result.dropped_sentences > 0) {
    err << "warning: skipped " << result.dropped_sentences << " training sentences whose gold heads are not a tree\n";
  }

  nlohmann::json summary;
  summary["config"] = nlohmann::json::parse(to_json(tc));
  summary["best_epoch"] = result.best_epoch;
  summary["best_dev_uas"] = result.best_uas;
  summary["epochs_run"] = result.log.size();
  save_checkpoint(a.model, model, CheckpointInfo{tc.seed, summary.dump()});

  char buf[160];
  std::snprintf(buf, sizeof buf, "best epoch %zu of %zu, dev UAS %.2f, checkpoint %s\n", result.best_epoch,
                result.log.size(), result.best_uas, a.model.c_str());
  out << buf;
  return 0;
}

struct ParseArgs {
  std::string model, input = "-", output = "-", format = "auto", decode = "greedy_then_cle";
  bool single_root = false;
  std::size_t threads = 0;
};

bool looks_like_conllu(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    return line.find('\t') != std::string::npos;
  }
  return false;
}

int cmd_parse(const ParseArgs& a, std::ostream& out, std::ostream& err) {
  const Model model = load_checkpoint(a.model);
  const std::string text = slurp(a.input);
  const bool conllu = a.format == "conllu" || (a.format == "auto" && looks_like_conllu(text));
  std::vector<Sentence> sentences;
  if (conllu) {
    ParseOptions options;
    options.require_heads = false;
    sentences = parse_conllu(text, options);
  } else {
    std::istringstream in(text);
    sentences = read_raw_text(in);
  }

  const auto results = parse_all(model, sentences, decode_mode_from_string(a.decode), worker_count(a.threads),
                                 a.single_root);
  std::vector<Sentence> annotated;
  annotated.reserve(sentences.size());
  std::size_t cyclic = 0, multi_root = 0, fallback = 0;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    annotated.push_back(model.annotate(sentences[i], results[i]));
    cyclic += !find_cycles(results[i].heads).empty();
    multi_root += root_children(results[i].heads) > 1;
    fallback += results[i].used_fallback;
  }
  emit(a.output, out, write_conllu(annotated));
  if (!sentences.empty()) {
    err << "parsed " << sentences.size() << " sentences (" << a.decode << "): cycles " << cyclic << " ("
        << percent(cyclic, sentences.size()) << "), multiple root children " << multi_root << " ("
        << percent(multi_root, sentences.size()) << "), spanning-tree fallback " << fallback << " ("
        << percent(fallback, sentences.size()) << ")\n";
  }
  return 0;
}

struct EvalArgs {
  std::string gold, pred, output = "-";
  bool exclude_punct = false, json = false, per_sentence = false;
};

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream&) {
  const auto gold = read_conllu_file(a.gold);
  const auto pred = read_conllu_file(a.pred);
  EvalOptions options;
  options.exclude_punct = a.exclude_punct;
  options.per_sentence = a.per_sentence;
  const EvalReport report = attachment_scores(gold, pred, options);
  std::string text = a.json ? format_report_json(report) + "\n" : format_report_table(report);
  if (a.per_sentence && !a.json) {
    for (std::size_t i = 0; i < report.per_sentence.size(); ++i) {
      const EvalReport r = EvalReport::from_counts(report.per_sentence[i]);
      char buf[128];
      std::snprintf(buf, sizeof buf, "sentence %zu\tLA %.2f\tUAS %.2f\tLAS %.2f\ttokens %zu\n", i + 1, r.la, r.uas,
                    r.las, r.token_count);
      text += buf;
    }
  }
  emit(a.output, out, text);
  return 0;
}

struct InspectArgs {
  std::string model, sentence, input, output = "-";
  std::size_t index = 1;
};

int cmd_inspect(const InspectArgs& a, std::ostream& out, std::ostream&) {
  const Model model = load_checkpoint(a.model);
  Sentence s;
  if (!a.sentence.empty()) {
    std::istringstream in(a.sentence);
    auto raw = read_raw_text(in);
    if (raw.empty()) throw std::invalid_argument("--sentence is blank");
    s = std::move(raw.front());
  } else {
    const std::string text = slurp(a.input);
    ParseOptions options;
    options.require_heads = false;
    std::vector<Sentence> all;
    if (looks_like_conllu(text)) {
      all = parse_conllu(text, options);
    } else {
      std::istringstream in(text);
      all = read_raw_text(in);
    }
    if (a.index == 0 || a.index > all.size()) {
      throw std::out_of_range("--index " + std::to_string(a.index) + " out of range (1.." + std::to_string(all.size()) +
                              ")");
    }
    s = all[a.index - 1];
  }

  const Tensor p = model.head_probabilities(s);
  std::ostringstream tsv;
  tsv.precision(9);
  tsv << "word\tROOT";
  for (const Token& t : s.tokens) tsv << '\t' << t.form;
  tsv << '\n';
  for (std::size_t r = 0; r < p.rows(); ++r) {
    tsv << s.tokens[r].form;
    for (std::size_t c = 0; c < p.cols(); ++c) tsv << '\t' << p.at(r, c);
    tsv << '\n';
  }
  emit(a.output, out, tsv.str());
  return 0;
}

}  // namespace

std::vector<Sentence> read_raw_text(std::istream& in) {
  std::vector<Sentence> out;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream words(line);
    Sentence s;
    std::string w;
    while (words >> w) {
      Token t;
      t.id = static_cast<int>(s.tokens.size()) + 1;
      t.form = w;
      s.tokens.push_back(std::move(t));
    }
    if (!s.tokens.empty()) out.push_back(std::move(s));
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Character-level graph-based dependency parser"};
  app.name("podep");
  app.require_subcommand(1);

  TrainArgs ta;
  auto* train = app.add_subcommand("train", "Train a model and write the best checkpoint");
  train->add_option("--train", ta.train, "Training treebank (CoNLL-U)")->required()->check(CLI::ExistingFile);
  train->add_option("--dev", ta.dev, "Development treebank used for early stopping (defaults to the training set)")
      ->check(CLI::ExistingFile);
  train->add_option("--model,--output", ta.model, "Checkpoint to write")->required();
  train->add_option("--log", ta.log, "Per-epoch JSON lines (default stdout)");
  ta.overrides.attach(*train);

  ParseArgs pa;
  auto* parse = app.add_subcommand("parse", "Predict heads and labels");
  parse->add_option("--model", pa.model, "Checkpoint")->required()->check(CLI::ExistingFile);
  parse->add_option("--input,--test", pa.input, "CoNLL-U or pre-tokenized text, '-' for stdin");
  parse->add_option("--output", pa.output, "Destination, '-' for stdout");
  parse->add_option("--format", pa.format, "Input format")->check(CLI::IsMember({"auto", "conllu", "raw"}));
  parse->add_option("--decode", pa.decode, "Decoder")->check(CLI::IsMember({"greedy", "greedy_then_cle", "cle"}));
  parse->add_flag("--single-root", pa.single_root, "Allow only one word to attach to the root");
  parse->add_option("--threads", pa.threads, "Worker threads (capped by PODEP_THREADS)");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Score predicted trees against gold trees");
  eval->add_option("--gold,--test", ea.gold, "Gold CoNLL-U")->required()->check(CLI::ExistingFile);
  eval->add_option("--pred,--input", ea.pred, "Predicted CoNLL-U")->required()->check(CLI::ExistingFile);
  eval->add_option("--output", ea.output, "Destination, '-' for stdout");
  eval->add_flag("--exclude-punct", ea.exclude_punct, "Skip punctuation tokens");
  eval->add_flag("--json", ea.json, "Print one JSON object");
  eval->add_flag("--per-sentence", ea.per_sentence, "Add one line per sentence");

  InspectArgs ia;
  auto* inspect = app.add_subcommand("inspect", "Print the head probability matrix of one sentence as TSV");
  inspect->add_option("--model", ia.model, "Checkpoint")->required()->check(CLI::ExistingFile);
  auto* sentence = inspect->add_option("--sentence", ia.sentence, "Space-separated words");
  auto* input = inspect->add_option("--input", ia.input, "CoNLL-U or pre-tokenized text");
  inspect->add_option("--index", ia.index, "1-based sentence number within --input");
  inspect->add_option("--output", ia.output, "Destination, '-' for stdout");
  sentence->excludes(input);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*train) return cmd_train(ta, out, err);
    if (*parse) return cmd_parse(pa, out, err);
    if (*eval) return cmd_eval(ea, out, err);
    if (ia.sentence.empty() && ia.input.empty()) throw std::invalid_argument("inspect needs --sentence or --input");
    return cmd_inspect(ia, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace podep::cli
