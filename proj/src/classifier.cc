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

#include "causal/classifier.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "causal/adam.h"
#include "causal/errors.h"
#include "causal/tagger.h"
#include "causal/text.h"

namespace causal {

const std::vector<std::string>& SignalLexicon() {
  static const std::vector<std::string> kLexicon = {
      "as a result",   "as a result of", "because",     "because of",
      "cause",         "caused",         "causes",      "causing",
      "consequently",  "due to",         "following",   "forced",
      "hence",         "lead to",        "leading to",  "leads to",
      "led to",        "owing to",       "prompted",    "prompting",
      "result in",     "resulted in",    "resulting in", "since",
      "so",            "spark",          "sparked",     "sparking",
      "therefore",     "thus",           "trigger",     "triggered",
      "triggering",    "was a result of"};
  return kLexicon;
}

void ClassWeights::Validate() const {
  if (!(positive > 0.0) || !(negative > 0.0)) {
    throw ConfigError("class weights must be positive");
  }
}

void BinaryTrainConfig::Validate() const {
  if (!(l2_lambda >= 0.0)) throw ConfigError("l2_lambda must be >= 0");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (batch_size < 1) throw ConfigError("batch_size must be positive");
  if (max_epochs < 1) throw ConfigError("max_epochs must be positive");
  if (patience < 1) throw ConfigError("patience must be positive");
  if (!(feature_scale > 0.0)) throw ConfigError("feature_scale must be > 0");
}

std::vector<std::pair<std::string, double>> SentenceFeatures(
    const Sentence& sentence) {
  std::vector<std::string> words;
  words.reserve(sentence.tokens.size());
  for (const Token& t : sentence.tokens) words.push_back(AsciiLower(t.text));
  std::map<std::string, double> counts;
  for (std::size_t i = 0; i < words.size(); ++i) {
    counts["u=" + words[i]] += 1.0;
    if (i + 1 < words.size()) counts["b=" + words[i] + "_" + words[i + 1]] += 1.0;
  }
  for (const std::string& entry : SignalLexicon()) {
    std::vector<std::string> parts;
    for (std::size_t pos = 0; pos <= entry.size();) {
      std::size_t sp = entry.find(' ', pos);
      if (sp == std::string::npos) sp = entry.size();
      parts.push_back(entry.substr(pos, sp - pos));
      pos = sp + 1;
    }
    for (std::size_t i = 0; i + parts.size() <= words.size(); ++i) {
      if (std::equal(parts.begin(), parts.end(), words.begin() + i)) {
        counts["sig=" + entry] += 1.0;
        counts["sig"] += 1.0;
      }
    }
  }
  return {counts.begin(), counts.end()};
}

namespace {

struct SparseRow {
  std::vector<int> ids;
  std::vector<double> values;
};

SparseRow Vectorize(FeatureMap& map, const Sentence& s, double scale) {
  SparseRow row;
  for (const auto& [name, count] : SentenceFeatures(s)) {
    int id = map.Lookup(name);
    if (id < 0) continue;
    row.ids.push_back(id);
    row.values.push_back(count * scale);
  }
  return row;
}

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

double Logit(const BinaryModel& model, const SparseRow& row) {
  double z = model.bias;
  for (std::size_t i = 0; i < row.ids.size(); ++i) {
    z += model.weights[row.ids[i]] * row.values[i];
  }
  return z;
}

double DevF1(const BinaryModel& model, const Corpus& dev) {
  std::vector<bool> gold;
  std::vector<bool> pred;
  for (const Sentence& s : dev.sentences) {
    gold.push_back(s.is_causal);
    pred.push_back(PredictBinary(model, s).label);
  }
  return ComputeBinaryMetrics(gold, pred).f1;
}

}  // namespace

BinaryPrediction PredictBinary(const BinaryModel& model,
                               const Sentence& sentence) {
  SparseRow row;
  for (const auto& [name, count] : SentenceFeatures(sentence)) {
    int id = model.features.Find(name);
    if (id < 0) continue;
    row.ids.push_back(id);
    row.values.push_back(count * model.feature_scale);
  }
  BinaryPrediction out;
  out.score = Sigmoid(Logit(model, row));
  out.label = out.score >= 0.5;
  return out;
}

BinaryMetrics ComputeBinaryMetrics(const std::vector<bool>& gold,
                                   const std::vector<bool>& pred) {
  if (gold.size() != pred.size()) {
    throw LengthMismatch(std::to_string(gold.size()) + " gold vs " +
                         std::to_string(pred.size()) + " predicted labels");
  }
  long tp = 0, fp = 0, fn = 0, correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] && pred[i]) ++tp;
    if (!gold[i] && pred[i]) ++fp;
    if (gold[i] && !pred[i]) ++fn;
    if (gold[i] == pred[i]) ++correct;
  }
  BinaryMetrics m;
  auto ratio = [&](double num, double den) {
    if (den == 0) {
      m.degenerate = true;
      return 0.0;
    }
    return num / den;
  };
  m.precision = ratio(tp, tp + fp);
  m.recall = ratio(tp, tp + fn);
  m.accuracy = ratio(correct, static_cast<double>(gold.size()));
  double sum = m.precision + m.recall;
  m.f1 = sum > 0 ? 2 * m.precision * m.recall / sum : 0.0;
  return m;
}

BinaryTrainResult TrainBinary(const Corpus& train, const Corpus& dev,
                              const ClassWeights& weights,
                              const BinaryTrainConfig& config) {
  weights.Validate();
  config.Validate();
  std::size_t positives = 0;
  for (const Sentence& s : train.sentences) positives += s.is_causal;
  if (positives == 0 || positives == train.sentences.size()) {
    throw SingleClassCorpus(std::to_string(positives) + " of " +
                            std::to_string(train.sentences.size()) +
                            " training sentences are causal");
  }

  BinaryTrainResult result;
  BinaryModel& model = result.model;
  model.feature_scale = config.feature_scale;
  struct Example {
    SparseRow row;
    bool label;
  };
  std::vector<Example> data;
  for (const Sentence& s : train.sentences) {
    data.push_back({Vectorize(model.features, s, config.feature_scale),
                    s.is_causal});
  }
  model.features.Freeze();
  const std::size_t dim = model.features.size();
  model.weights.assign(dim, 0.0);
  const Corpus& dev_set = dev.sentences.empty() ? train : dev;

  // Weights followed by the bias in one vector for the optimizer.
  std::vector<double> params(dim + 1, 0.0);
  std::vector<double> grad(dim + 1, 0.0);
  Adam adam(params.size(), config.learning_rate);
  std::mt19937_64 rng(config.seed);
  EarlyStopping stopping(config.patience);
  BinaryModel best = model;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::shuffle(data.begin(), data.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < data.size();
         start += config.batch_size) {
      std::size_t stop = std::min(data.size(), start + config.batch_size);
      std::fill(grad.begin(), grad.end(), 0.0);
      double loss = 0.0;
      for (std::size_t i = start; i < stop; ++i) {
        const Example& ex = data[i];
        double p = Sigmoid(Logit(model, ex.row));
        double w = ex.label ? weights.positive : weights.negative;
        double y = ex.label ? 1.0 : 0.0;
        double prob = ex.label ? p : 1.0 - p;
        loss -= w * std::log(std::max(prob, 1e-300));
        double delta = w * (p - y);
        for (std::size_t j = 0; j < ex.row.ids.size(); ++j) {
          grad[ex.row.ids[j]] += delta * ex.row.values[j];
        }
        grad[dim] += delta;
      }
      for (std::size_t j = 0; j < dim; ++j) {
        grad[j] += config.l2_lambda * params[j];
        loss += 0.5 * config.l2_lambda * params[j] * params[j];
      }
      if (!std::isfinite(loss)) {
        throw DivergenceError("non-finite loss in epoch " +
                              std::to_string(epoch));
      }
      epoch_loss += loss;
      adam.Step(params, grad);
      std::copy(params.begin(), params.begin() + dim, model.weights.begin());
      model.bias = params[dim];
    }
    double f1 = DevF1(model, dev_set);
    result.history.push_back({epoch, epoch_loss, f1});
    if (stopping.Update(epoch, f1)) best = model;
    if (stopping.ShouldStop()) break;
  }
  result.best_epoch = stopping.best_epoch();
  result.model = std::move(best);
  return result;
}

}  // namespace causal
