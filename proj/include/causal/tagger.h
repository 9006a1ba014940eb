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

#ifndef CAUSAL_TAGGER_H_
#define CAUSAL_TAGGER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "causal/corpus.h"
#include "causal/crf.h"
#include "causal/dense_store.h"
#include "causal/eval.h"
#include "causal/features.h"
#include "causal/labeling.h"

namespace causal {

struct TrainConfig {
  double l2_lambda = 1e-4;
  double learning_rate = 1e-2;
  int batch_size = 32;
  int max_epochs = 50;
  int patience = 3;
  std::uint64_t seed = 13;
  bool hard_constraints = true;
  int threads = 1;

  // Throws ConfigError on out-of-range values.
  void Validate() const;
};

// Stacked-label CRF tagger: vocabulary, frozen feature map and weights.
struct CrfModel {
  LabelVocabulary vocabulary;
  FeatureMap features;
  CrfParams params;
  bool hard_constraints = true;

  // Rebuilds the cached transition mask; call after changing the vocabulary.
  void Finalize();
  const TransitionMask* mask() const {
    return hard_constraints ? &mask_ : nullptr;
  }

 private:
  TransitionMask mask_;
};

// Feature vectors for every token of the sentence. Dense vectors come from
// `store` when given.
FeatureSequence Featurize(const FeatureMap& map, const Sentence& sentence,
                          const DenseStore* store = nullptr);

// Tracks the best dev score; stops after `patience` epochs without a strict
// improvement.
class EarlyStopping {
 public:
  explicit EarlyStopping(int patience) : patience_(patience) {}

  // Records the score of `epoch` (1-based); true if it is a new best.
  bool Update(int epoch, double score);
  bool ShouldStop() const { return stale_ >= patience_; }
  int best_epoch() const { return best_epoch_; }
  double best_score() const { return best_score_; }

 private:
  int patience_;
  int stale_ = 0;
  int best_epoch_ = 0;
  double best_score_ = 0.0;
};

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double dev_f1 = 0.0;
};

struct TrainResult {
  CrfModel model;
  std::vector<EpochStats> history;
  int best_epoch = 0;
  std::vector<std::string> warnings;
};

struct TrainHooks {
  // Replaces the dev-set fair macro F1 when set.
  std::function<double(const CrfModel&, int epoch)> dev_score;
};

// Mini-batch Adam on the regularized NLL with early stopping on dev fair
// macro span F1. Returns the weights of the best dev epoch. Throws
// EmptyCorpus and DivergenceError.
TrainResult TrainCrf(const Corpus& train, const Corpus& dev,
                     const TrainConfig& config,
                     const DenseStore* store = nullptr,
                     const TrainHooks& hooks = {});

// At most three relations: Viterbi, per-layer repair, then decoding.
std::vector<CausalRelation> PredictRelations(const CrfModel& model,
                                             const Sentence& sentence,
                                             const DenseStore* store = nullptr);

// Prediction corpus with the same ids, texts and tokens as `input`.
Corpus PredictCorpus(const CrfModel& model, const Corpus& input,
                     const DenseStore* store = nullptr, int threads = 1);

}  // namespace causal

#endif  // CAUSAL_TAGGER_H_
