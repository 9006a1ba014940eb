//
// Copyright 2026 The Causal Span Tagger Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "cli.h"

#include <filesystem>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "causal/augment.h"
#include "causal/classifier.h"
#include "causal/corpus.h"
#include "causal/dense_store.h"
#include "causal/errors.h"
#include "causal/eval.h"
#include "causal/model_io.h"
#include "causal/tagger.h"
#include "causal/text.h"
#include "json.hpp"

namespace causal::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

// Options shared by all subcommands.
struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool lenient = false;
};

Json LoadConfig(const std::string& path) {
  if (path.empty()) return Json::object();
  std::string content;
  try {
    content = ReadFile(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  try {
    Json j = Json::parse(content);
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
}

template <typename T>
T Get(const Json& config, const char* key, T fallback) {
  if (!config.contains(key)) return fallback;
  try {
    return config.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("bad value for '") + key + "'");
  }
}

std::string RequirePath(const Json& config, const char* key) {
  std::string path = Get<std::string>(config, key, "");
  if (path.empty()) throw ConfigError(std::string("missing '") + key + "'");
  if (!fs::exists(path)) {
    throw ConfigError(std::string("'") + key + "' file '" + path +
                      "' does not exist");
  }
  return path;
}

CorpusFormat FormatFor(const std::string& path, const std::string& explicit_fmt) {
  std::string name = explicit_fmt;
  if (name.empty()) {
    name = fs::path(path).extension() == ".csv" ? "csv" : "jsonl";
  }
  auto fmt = CorpusFormatFromString(name);
  if (!fmt) throw ConfigError("unknown format '" + name + "'");
  return *fmt;
}

void WriteJson(const fs::path& path, const Json& j) {
  WriteFile(path.string(), j.dump(2) + "\n");
}

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
}

// Loads a corpus, reporting rejected rows. Throws FormatError when rows were
// rejected and `lenient` is off.
Corpus LoadChecked(const std::string& path, CorpusFormat format, bool lenient,
                   std::ostream& err) {
  LoadResult r = LoadCorpus(path, format);
  for (const RowError& e : r.rejected) {
    err << path << ": row " << e.row << ": " << e.kind << ": " << e.message
        << '\n';
  }
  if (!r.rejected.empty() && !lenient) {
    throw FormatError(std::to_string(r.rejected.size()) + " rejected row(s) in '" +
                      path + "'");
  }
  return std::move(r.corpus);
}

Json ApplyGlobals(Json config, const GlobalOptions& g) {
  if (g.seed) config["seed"] = *g.seed;
  if (g.threads) config["threads"] = *g.threads;
  return config;
}

TrainConfig CrfConfigFrom(const Json& c) {
  TrainConfig t;
  t.l2_lambda = Get(c, "l2_lambda", t.l2_lambda);
  t.learning_rate = Get(c, "learning_rate", t.learning_rate);
  t.batch_size = Get(c, "batch_size", t.batch_size);
  t.max_epochs = Get(c, "max_epochs", t.max_epochs);
  t.patience = Get(c, "patience", t.patience);
  t.seed = Get(c, "seed", t.seed);
  t.hard_constraints = Get(c, "hard_constraints", t.hard_constraints);
  t.threads = Get(c, "threads", t.threads);
  t.Validate();
  return t;
}

Json ResolvedCrf(Json c, const TrainConfig& t) {
  c["l2_lambda"] = t.l2_lambda;
  c["learning_rate"] = t.learning_rate;
  c["batch_size"] = t.batch_size;
  c["max_epochs"] = t.max_epochs;
  c["patience"] = t.patience;
  c["seed"] = t.seed;
  c["hard_constraints"] = t.hard_constraints;
  c["threads"] = t.threads;
  return c;
}

int TrainSt2(Json config, const GlobalOptions& g, std::ostream& out,
             std::ostream& err) {
  config = ApplyGlobals(std::move(config), g);
  std::string train_path = RequirePath(config, "train");
  std::string dev_path = RequirePath(config, "dev");
  std::string fmt = Get<std::string>(config, "format", "");
  fs::path out_dir = Get<std::string>(config, "output_dir", "");
  if (out_dir.empty()) throw ConfigError("missing 'output_dir'");
  TrainConfig tc = CrfConfigFrom(config);
  std::optional<DenseStore> store;
  std::string emb = Get<std::string>(config, "embeddings", "");
  if (!emb.empty()) store = LoadDenseStore(emb);

  Corpus train = LoadChecked(train_path, FormatFor(train_path, fmt), g.lenient, err);
  Corpus dev = LoadChecked(dev_path, FormatFor(dev_path, fmt), g.lenient, err);
  EnsureDir(out_dir);
  WriteJson(out_dir / "resolved_config.json", ResolvedCrf(config, tc));

  TrainResult result = TrainCrf(train, dev, tc, store ? &*store : nullptr);
  for (const std::string& w : result.warnings) err << "warning: " << w << '\n';
  SaveCrfModel(result.model, (out_dir / "model.json").string());

  Corpus predicted =
      PredictCorpus(result.model, dev, store ? &*store : nullptr, tc.threads);
  Json metrics;
  metrics["best_epoch"] = result.best_epoch;
  metrics["labels"] = result.model.vocabulary.size();
  metrics["features"] = result.model.features.size();
  Json epochs = Json::array();
  for (const EpochStats& e : result.history) {
    epochs.push_back({{"epoch", e.epoch},
                      {"train_loss", e.train_loss},
                      {"dev_fair_macro_f1", e.dev_f1}});
  }
  metrics["epochs"] = epochs;
  metrics["dev_fair"] = ReportToJson(Evaluate(dev, predicted, EvalMode::kFair));
  metrics["dev_strict"] =
      ReportToJson(Evaluate(dev, predicted, EvalMode::kStrict));
  WriteJson(out_dir / "metrics.json", metrics);
  out << "trained " << result.history.size() << " epoch(s), best epoch "
      << result.best_epoch << ", dev fair macro F1 "
      << metrics["dev_fair"]["overall"]["macro"]["f1"].get<double>() << '\n';
  return kOk;
}

int TrainSt1(Json config, const GlobalOptions& g, std::ostream& out,
             std::ostream& err) {
  config = ApplyGlobals(std::move(config), g);
  std::string train_path = RequirePath(config, "train");
  std::string dev_path = RequirePath(config, "dev");
  std::string fmt = Get<std::string>(config, "format", "");
  fs::path out_dir = Get<std::string>(config, "output_dir", "");
  if (out_dir.empty()) throw ConfigError("missing 'output_dir'");
  BinaryTrainConfig bc;
  bc.l2_lambda = Get(config, "l2_lambda", bc.l2_lambda);
  bc.learning_rate = Get(config, "learning_rate", bc.learning_rate);
  bc.batch_size = Get(config, "batch_size", bc.batch_size);
  bc.max_epochs = Get(config, "max_epochs", bc.max_epochs);
  bc.patience = Get(config, "patience", bc.patience);
  bc.seed = Get(config, "seed", bc.seed);
  bc.feature_scale = Get(config, "feature_scale", bc.feature_scale);
  bc.Validate();
  ClassWeights w;
  w.positive = Get(config, "positive_weight", w.positive);
  w.negative = Get(config, "negative_weight", w.negative);
  w.Validate();

  Corpus train = LoadChecked(train_path, FormatFor(train_path, fmt), g.lenient, err);
  Corpus dev = LoadChecked(dev_path, FormatFor(dev_path, fmt), g.lenient, err);
  EnsureDir(out_dir);
  Json resolved = config;
  resolved["l2_lambda"] = bc.l2_lambda;
  resolved["learning_rate"] = bc.learning_rate;
  resolved["batch_size"] = bc.batch_size;
  resolved["max_epochs"] = bc.max_epochs;
  resolved["patience"] = bc.patience;
  resolved["seed"] = bc.seed;
  resolved["feature_scale"] = bc.feature_scale;
  resolved["positive_weight"] = w.positive;
  resolved["negative_weight"] = w.negative;
  WriteJson(out_dir / "resolved_config.json", resolved);

  BinaryTrainResult result = TrainBinary(train, dev, w, bc);
  SaveBinaryModel(result.model, (out_dir / "model.json").string());
  std::vector<bool> gold;
  std::vector<bool> pred;
  for (const Sentence& s : dev.sentences) {
    gold.push_back(s.is_causal);
    pred.push_back(PredictBinary(result.model, s).label);
  }
  BinaryMetrics m = ComputeBinaryMetrics(gold, pred);
  Json metrics;
  metrics["best_epoch"] = result.best_epoch;
  Json epochs = Json::array();
  for (const BinaryEpochStats& e : result.history) {
    epochs.push_back({{"epoch", e.epoch},
                      {"train_loss", e.train_loss},
                      {"dev_f1", e.dev_f1}});
  }
  metrics["epochs"] = epochs;
  metrics["dev"] = {{"precision", m.precision},
                    {"recall", m.recall},
                    {"f1", m.f1},
                    {"accuracy", m.accuracy}};
  WriteJson(out_dir / "metrics.json", metrics);
  out << "trained " << result.history.size() << " epoch(s), best epoch "
      << result.best_epoch << ", dev F1 " << m.f1 << '\n';
  return kOk;
}

struct PredictOptions {
  std::string model;
  std::string input;
  std::string output;
  std::string format;
  std::string embeddings;
};

int PredictSt2(const PredictOptions& o, const GlobalOptions& g,
               std::ostream& out, std::ostream& err) {
  CrfModel model = LoadCrfModel(o.model);
  std::optional<DenseStore> store;
  if (!o.embeddings.empty()) store = LoadDenseStore(o.embeddings);
  Corpus input = LoadChecked(o.input, FormatFor(o.input, o.format), g.lenient, err);
  Corpus predicted = PredictCorpus(model, input, store ? &*store : nullptr,
                                   g.threads.value_or(1));
  WriteCorpus(predicted, o.output, CorpusFormat::kJsonl);
  out << "wrote " << predicted.sentences.size() << " prediction(s)\n";
  return kOk;
}

int PredictSt1(const PredictOptions& o, const GlobalOptions& g,
               std::ostream& out, std::ostream& err) {
  BinaryModel model = LoadBinaryModel(o.model);
  Corpus input = LoadChecked(o.input, FormatFor(o.input, o.format), g.lenient, err);
  std::string lines;
  for (const Sentence& s : input.sentences) {
    BinaryPrediction p = PredictBinary(model, s);
    Json j;
    j["id"] = s.id;
    j["causal"] = p.label;
    j["score"] = p.score;
    j["text"] = s.text;
    lines += j.dump() + "\n";
  }
  WriteFile(o.output, lines);
  out << "wrote " << input.sentences.size() << " prediction(s)\n";
  return kOk;
}

struct EvalOptions {
  std::string gold;
  std::string pred;
  std::string mode = "fair";
  std::string json_out;
  std::string format;
};

int RunEval(const EvalOptions& o, const GlobalOptions& g, std::ostream& out,
            std::ostream& err) {
  EvalMode mode;
  if (o.mode == "fair") {
    mode = EvalMode::kFair;
  } else if (o.mode == "strict") {
    mode = EvalMode::kStrict;
  } else {
    throw ConfigError("unknown mode '" + o.mode + "'");
  }
  Corpus gold = LoadChecked(o.gold, FormatFor(o.gold, o.format), g.lenient, err);
  Corpus pred = LoadChecked(o.pred, FormatFor(o.pred, o.format), g.lenient, err);
  EvalReport report = Evaluate(gold, pred, mode);
  out << FormatReport(report);
  for (const std::string& id : report.missing_predictions) {
    err << "missing prediction for '" << id << "', spans counted as FN\n";
  }
  if (!o.json_out.empty()) WriteJson(o.json_out, ReportToJson(report));
  return kOk;
}

struct AugmentOptions {
  std::string input;
  std::string output;
  std::string mode;
  std::string format;
};

int RunAugment(const AugmentOptions& o, Json config, const GlobalOptions& g,
               std::ostream& out, std::ostream& err) {
  config = ApplyGlobals(std::move(config), g);
  const std::uint64_t seed = Get<std::uint64_t>(config, "seed", 13);
  config["seed"] = seed;
  config["mode"] = o.mode;
  Corpus result;
  auto lexicon = [&] {
    std::string path = Get<std::string>(config, "lexicon", "");
    if (path.empty()) throw ConfigError("EDA needs a 'lexicon' TSV");
    return SynonymLexicon::LoadTsv(path);
  };
  auto stopwords = [&] {
    std::string path = Get<std::string>(config, "stopwords", "");
    return path.empty() ? DefaultStopwords() : LoadStopwords(path);
  };
  auto eda = [&](EdaConfig c) {
    c.alpha_sr = Get(config, "alpha_sr", c.alpha_sr);
    c.alpha_ri = Get(config, "alpha_ri", c.alpha_ri);
    c.alpha_rs = Get(config, "alpha_rs", c.alpha_rs);
    c.p_rd = Get(config, "p_rd", c.p_rd);
    c.n_aug = Get(config, "n_aug", c.n_aug);
    c.seed = seed;
    c.Validate();
    config["alpha_sr"] = c.alpha_sr;
    config["alpha_ri"] = c.alpha_ri;
    config["alpha_rs"] = c.alpha_rs;
    config["n_aug"] = c.n_aug;
    return c;
  };

  if (o.mode == "synth") {
    std::string slots_path = Get<std::string>(config, "slots", "");
    if (slots_path.empty()) throw ConfigError("synth needs a 'slots' JSON");
    std::size_t n = Get<std::size_t>(config, "n", 100);
    config["n"] = n;
    Rng rng(seed);
    result = SynthTemplates(n, SlotLexicons::LoadJson(slots_path), rng);
  } else {
    if (o.input.empty()) throw ConfigError("--in is required for " + o.mode);
    Corpus input = LoadChecked(o.input, FormatFor(o.input, o.format), g.lenient, err);
    if (o.mode == "st1-eda") {
      result = AugmentSt1(input, eda(St1EdaDefaults()), lexicon(), stopwords());
    } else if (o.mode == "st2-eda") {
      St2AugmentResult r =
          AugmentSt2(input, eda(St2EdaDefaults()), lexicon(), stopwords());
      err << "st2-eda: added " << r.added << ", discarded " << r.discarded
          << '\n';
      result = std::move(r.corpus);
    } else if (o.mode == "oversample") {
      std::size_t n = Get<std::size_t>(config, "n", 400);
      config["n"] = n;
      Rng rng(seed);
      result = OversampleMultiRelation(input, n, rng);
    } else {
      throw ConfigError("unknown augment mode '" + o.mode + "'");
    }
  }
  WriteCorpus(result, o.output, FormatFor(o.output, o.format));
  WriteJson(o.output + ".config.json", config);
  out << "wrote " << result.sentences.size() << " record(s)\n";
  return kOk;
}

int ToExitCode(const std::exception& e, std::ostream& err) {
  err << "error: " << e.what() << '\n';
  if (dynamic_cast<const IoError*>(&e)) return kIoFailure;
  if (dynamic_cast<const ConfigError*>(&e)) return kConfigError;
  if (dynamic_cast<const DivergenceError*>(&e)) return kDivergence;
  if (dynamic_cast<const VersionError*>(&e)) return kVersionError;
  return kDataError;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Causal span tagging toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  std::uint64_t seed = 0;
  int threads = 1;
  auto* seed_opt = app.add_option("--seed", seed, "Random seed");
  auto* threads_opt = app.add_option("--threads", threads, "Worker threads")
                          ->check(CLI::PositiveNumber);
  app.add_option("--config", g.config_path, "JSON run configuration");
  app.add_flag("--lenient", g.lenient, "Skip rejected input rows");

  std::string convert_in, convert_out, convert_in_fmt, convert_out_fmt;
  auto* convert = app.add_subcommand("convert", "Convert between CSV and JSONL");
  convert->add_option("--in", convert_in)->required();
  convert->add_option("--out", convert_out)->required();
  convert->add_option("--in-format", convert_in_fmt);
  convert->add_option("--out-format", convert_out_fmt);

  auto* train1 = app.add_subcommand("train-st1", "Train the causality classifier");
  auto* train2 = app.add_subcommand("train-st2", "Train the span tagger");
  std::string train_in, dev_in, out_dir;
  for (auto* sub : {train1, train2}) {
    sub->add_option("--train", train_in, "Overrides config 'train'");
    sub->add_option("--dev", dev_in, "Overrides config 'dev'");
    sub->add_option("--output-dir", out_dir, "Overrides config 'output_dir'");
  }

  PredictOptions predict;
  auto* predict1 = app.add_subcommand("predict-st1", "Classify sentences");
  auto* predict2 = app.add_subcommand("predict-st2", "Tag causal spans");
  for (auto* sub : {predict1, predict2}) {
    sub->add_option("--model", predict.model)->required();
    sub->add_option("--in", predict.input)->required();
    sub->add_option("--out", predict.output)->required();
    sub->add_option("--format", predict.format, "Input format (csv|jsonl)");
  }
  predict2->add_option("--embeddings", predict.embeddings, "CNCE file");

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score span predictions");
  eval_cmd->add_option("--gold", eval.gold)->required();
  eval_cmd->add_option("--pred", eval.pred)->required();
  eval_cmd->add_option("--mode", eval.mode)->check(CLI::IsMember({"fair", "strict"}));
  eval_cmd->add_option("--json", eval.json_out, "Write the report as JSON");

  AugmentOptions augment;
  auto* augment_cmd = app.add_subcommand("augment", "Generate training data");
  augment_cmd->add_option("--in", augment.input);
  augment_cmd->add_option("--out", augment.output)->required();
  augment_cmd->add_option("--mode", augment.mode)
      ->required()
      ->check(CLI::IsMember({"st1-eda", "st2-eda", "oversample", "synth"}));
  augment_cmd->add_option("--format", augment.format);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kConfigError;
  }
  if (seed_opt->count()) g.seed = seed;
  if (threads_opt->count()) g.threads = threads;

  try {
    Json config = LoadConfig(g.config_path);
    if (convert->parsed()) {
      LoadResult r = LoadCorpus(convert_in, FormatFor(convert_in, convert_in_fmt));
      for (const RowError& e : r.rejected) {
        err << convert_in << ": row " << e.row << ": " << e.kind << ": "
            << e.message << '\n';
      }
      if (!r.rejected.empty() && !g.lenient) return kDataError;
      WriteCorpus(r.corpus, convert_out, FormatFor(convert_out, convert_out_fmt));
      out << "converted " << r.corpus.sentences.size() << " sentence(s), "
          << r.rejected.size() << " rejected row(s)\n";
      return kOk;
    }
    if (train1->parsed() || train2->parsed()) {
      if (!train_in.empty()) config["train"] = train_in;
      if (!dev_in.empty()) config["dev"] = dev_in;
      if (!out_dir.empty()) config["output_dir"] = out_dir;
      return train2->parsed() ? TrainSt2(config, g, out, err)
                              : TrainSt1(config, g, out, err);
    }
    if (predict1->parsed()) return PredictSt1(predict, g, out, err);
    if (predict2->parsed()) return PredictSt2(predict, g, out, err);
    if (eval_cmd->parsed()) return RunEval(eval, g, out, err);
    if (augment_cmd->parsed()) return RunAugment(augment, config, g, out, err);
  } catch (const Error& e) {
    return ToExitCode(e, err);
  }
  return kConfigError;
}

}  // namespace causal::cli
