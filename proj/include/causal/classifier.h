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

#ifndef CAUSAL_CLASSIFIER_H_
#define CAUSAL_CLASSIFIER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "causal/corpus.h"
#include "causal/features.h"

namespace causal {

// Causal connectives counted as sentence features, lowercased, space
// separated for multi-word entries.
const std::vector<std::string>& SignalLexicon();

struct ClassWeights {
  double positive = 1.5;
  double negative = 1.0;

  void Validate() const;
};

struct BinaryTrainConfig {
  double l2_lambda = 1e-4;
  double learning_rate = 1e-2;
  int batch_size = 32;
  int max_epochs = 50;
  int patience = 3;
  std::uint64_t seed = 13;
  // Multiplies every feature value; see the scaling property in the tests.
  double feature_scale = 1.0;

  void Validate() const;
};

// Logistic regression over unigram, bigram and signal-lexicon counts.
struct BinaryModel {
  FeatureMap features;
  std::vector<double> weights;
  double bias = 0.0;
  double feature_scale = 1.0;
};

// (feature template, count) pairs for a sentence.
std::vector<std::pair<std::string, double>> SentenceFeatures(
    const Sentence& sentence);

struct BinaryPrediction {
  bool label = false;
  double score = 0.0;  // probability of the causal class
};

BinaryPrediction PredictBinary(const BinaryModel& model,
                               const Sentence& sentence);

struct BinaryMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  // Set when some denominator was zero and the metric defaulted to 0.
  bool degenerate = false;
};

// Positive-class metrics. Throws LengthMismatch.
BinaryMetrics ComputeBinaryMetrics(const std::vector<bool>& gold,
                                   const std::vector<bool>& pred);

struct BinaryEpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double dev_f1 = 0.0;
};

struct BinaryTrainResult {
  BinaryModel model;
  std::vector<BinaryEpochStats> history;
  int best_epoch = 0;
};

// Minimizes sum_i w(y_i) * CE(p_i, y_i) + (l2/2)|w|^2 with Adam and early
// stopping on dev F1. An empty `dev` falls back to the training set.
// Throws SingleClassCorpus.
BinaryTrainResult TrainBinary(const Corpus& train, const Corpus& dev,
                              const ClassWeights& weights,
                              const BinaryTrainConfig& config);

}  // namespace causal

#endif  // CAUSAL_CLASSIFIER_H_
