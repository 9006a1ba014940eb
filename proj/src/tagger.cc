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

#include "causal/tagger.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "causal/adam.h"
#include "causal/errors.h"
#include "causal/parallel.h"

namespace causal {

void TrainConfig::Validate() const {
  if (!(l2_lambda >= 0.0)) throw ConfigError("l2_lambda must be >= 0");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (batch_size < 1) throw ConfigError("batch_size must be positive");
  if (max_epochs < 1) throw ConfigError("max_epochs must be positive");
  if (patience < 1) throw ConfigError("patience must be positive");
  if (patience > max_epochs) throw ConfigError("patience exceeds max_epochs");
  if (threads < 1) throw ConfigError("threads must be positive");
}

void CrfModel::Finalize() { mask_ = BuildConstraintMask(vocabulary); }

FeatureSequence Featurize(const FeatureMap& map, const Sentence& sentence,
                          const DenseStore* store) {
  FeatureSequence out;
  out.reserve(sentence.tokens.size());
  for (std::size_t t = 0; t < sentence.tokens.size(); ++t) {
    out.push_back(map.Vectorize(ExtractFeatureStrings(sentence.tokens, t)));
  }
  if (store) store->Attach(sentence.id, out);
  return out;
}

bool EarlyStopping::Update(int epoch, double score) {
  if (best_epoch_ == 0 || score > best_score_) {
    best_score_ = score;
    best_epoch_ = epoch;
    stale_ = 0;
    return true;
  }
  ++stale_;
  return false;
}

namespace {

std::vector<int> GoldLabelIds(const LabelVocabulary& vocab,
                              const Sentence& sentence) {
  std::vector<int> ids;
  for (const StackedTag& tag : StackSentence(sentence)) {
    std::string label = tag.ToString();
    auto id = vocab.Find(label);
    if (!id) throw UnknownLabel("'" + label + "' not in vocabulary");
    ids.push_back(*id);
  }
  return ids;
}

}  // namespace

TrainResult TrainCrf(const Corpus& train, const Corpus& dev,
                     const TrainConfig& config, const DenseStore* store,
                     const TrainHooks& hooks) {
  config.Validate();
  TrainResult result;

  Corpus train_t;
  Corpus dev_t;
  for (const Sentence& s : train.sentences) {
    if (s.tokens.empty()) continue;
    TruncationResult tr = TruncateRelations(s);
    result.warnings.insert(result.warnings.end(), tr.warnings.begin(),
                           tr.warnings.end());
    train_t.sentences.push_back(std::move(tr.sentence));
  }
  if (train_t.sentences.empty()) throw EmptyCorpus("no training sentences");
  for (const Sentence& s : dev.sentences) {
    dev_t.sentences.push_back(TruncateRelations(s).sentence);
  }

  CrfModel model;
  model.hard_constraints = config.hard_constraints;
  model.vocabulary = BuildVocabulary({&train_t, &dev_t});
  model.Finalize();
  const int k = static_cast<int>(model.vocabulary.size());

  // Every feature seen in training scores every label.
  std::vector<LabeledSequence> data;
  data.reserve(train_t.sentences.size());
  for (const Sentence& s : train_t.sentences) {
    LabeledSequence seq;
    seq.labels = GoldLabelIds(model.vocabulary, s);
    for (std::size_t t = 0; t < s.tokens.size(); ++t) {
      seq.features.push_back(
          model.features.Vectorize(ExtractFeatureStrings(s.tokens, t)));
    }
    data.push_back(std::move(seq));
  }
  model.features.Freeze();
  const int dense_dim = store ? static_cast<int>(store->dimension()) : 0;
  model.params = CrfParams::Dense(
      static_cast<int>(model.features.size()), k, dense_dim);
  if (store) {
    for (std::size_t i = 0; i < data.size(); ++i) {
      store->Attach(train_t.sentences[i].id, data[i].features);
    }
  }

  Adam adam(model.params.size(), config.learning_rate);
  std::mt19937_64 rng(config.seed);
  EarlyStopping stopping(config.patience);
  std::vector<double> best_weights = model.params.values();

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::shuffle(data.begin(), data.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < data.size();
         start += config.batch_size) {
      std::size_t stop = std::min(data.size(), start + config.batch_size);
      std::span<const LabeledSequence> batch(data.data() + start, stop - start);
      LossAndGradient lg =
          NllAndGradient(model.params, batch, config.l2_lambda, model.mask(),
                         config.threads);
      if (!std::isfinite(lg.loss)) {
        throw DivergenceError("non-finite loss in epoch " +
                              std::to_string(epoch));
      }
      epoch_loss += lg.loss;
      adam.Step(model.params.values(), lg.gradient);
    }
    for (double w : model.params.values()) {
      if (!std::isfinite(w)) {
        throw DivergenceError("non-finite weight after epoch " +
                              std::to_string(epoch));
      }
    }

    double dev_f1;
    if (hooks.dev_score) {
      dev_f1 = hooks.dev_score(model, epoch);
    } else {
      Corpus predicted = PredictCorpus(model, dev, store, config.threads);
      dev_f1 = Evaluate(dev, predicted, EvalMode::kFair).overall.macro.f1;
    }
    result.history.push_back({epoch, epoch_loss, dev_f1});
    if (stopping.Update(epoch, dev_f1)) best_weights = model.params.values();
    if (stopping.ShouldStop()) break;
  }
  model.params.values() = std::move(best_weights);
  result.best_epoch = stopping.best_epoch();
  result.model = std::move(model);
  return result;
}

std::vector<CausalRelation> PredictRelations(const CrfModel& model,
                                             const Sentence& sentence,
                                             const DenseStore* store) {
  if (sentence.tokens.empty()) return {};
  FeatureSequence features = Featurize(model.features, sentence, store);
  ViterbiResult best = Viterbi(model.params, features, model.mask());
  StackedTagSequence tags;
  tags.reserve(best.labels.size());
  for (int y : best.labels) tags.push_back(model.vocabulary.Tag(y));
  for (std::size_t layer = 0; layer < kNumLayers; ++layer) {
    LayerSequence repaired = RepairLayer(ExtractLayer(tags, layer));
    for (std::size_t t = 0; t < tags.size(); ++t) {
      tags[t].layers[layer] = repaired[t];
    }
  }
  return DecodeStacked(tags);
}

Corpus PredictCorpus(const CrfModel& model, const Corpus& input,
                     const DenseStore* store, int threads) {
  Corpus out;
  out.split_name = input.split_name;
  out.sentences.resize(input.sentences.size());
  ParallelFor(input.sentences.size(), threads, [&](std::size_t i) {
    const Sentence& s = input.sentences[i];
    Sentence& p = out.sentences[i];
    p.id = s.id;
    p.text = s.text;
    p.tokens = s.tokens;
    p.relations = PredictRelations(model, s, store);
    p.is_causal = !p.relations.empty();
  });
  return out;
}

}  // namespace causal
