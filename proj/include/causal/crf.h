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

#ifndef CAUSAL_CRF_H_
#define CAUSAL_CRF_H_

#include <cstddef>
#include <span>
#include <vector>

#include "causal/features.h"
#include "causal/labeling.h"

namespace causal {

// Row-major dense matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  std::span<double> row(std::size_t r) { return {&data_[r * cols_], cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {&data_[r * cols_], cols_};
  }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// All CRF weights in one flat vector:
//   [sparse emission | dense emission (dim x K) | transition (K x K) |
//    begin (K) | end (K)]
// Sparse emission connects feature f only to the labels listed for it.
class CrfParams {
 public:
  CrfParams() = default;

  // Every feature connects to every label.
  static CrfParams Dense(int num_features, int num_labels, int dense_dim = 0);
  // `labels_per_feature[f]` lists the labels feature f may score.
  static CrfParams Sparse(std::vector<std::vector<int>> labels_per_feature,
                          int num_labels, int dense_dim = 0);

  int num_labels() const { return num_labels_; }
  int num_features() const { return static_cast<int>(row_offsets_.size()) - 1; }
  int dense_dim() const { return dense_dim_; }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  // Labels of feature f's emission row; weight j lives at
  // EmissionOffset(f) + j.
  std::span<const int> EmissionLabels(int f) const {
    return {row_labels_.data() + row_offsets_[f],
            row_offsets_[f + 1] - row_offsets_[f]};
  }
  std::size_t EmissionOffset(int f) const { return row_offsets_[f]; }
  std::size_t DenseIndex(int d, int y) const {
    return dense_offset_ + static_cast<std::size_t>(d) * num_labels_ + y;
  }
  std::size_t TransitionIndex(int from, int to) const {
    return transition_offset_ + static_cast<std::size_t>(from) * num_labels_ + to;
  }
  std::size_t BeginIndex(int y) const { return begin_offset_ + y; }
  std::size_t EndIndex(int y) const { return end_offset_ + y; }

  double transition(int from, int to) const {
    return values_[TransitionIndex(from, to)];
  }
  double begin(int y) const { return values_[BeginIndex(y)]; }
  double end(int y) const { return values_[EndIndex(y)]; }

  const std::vector<std::size_t>& row_offsets() const { return row_offsets_; }
  const std::vector<int>& row_labels() const { return row_labels_; }

 private:
  void Layout(int num_labels, int dense_dim);

  int num_labels_ = 0;
  int dense_dim_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<int> row_labels_;
  std::size_t dense_offset_ = 0;
  std::size_t transition_offset_ = 0;
  std::size_t begin_offset_ = 0;
  std::size_t end_offset_ = 0;
  std::vector<double> values_;
};

// Admissible transitions; a forbidden move scores -infinity.
struct TransitionMask {
  int num_labels = 0;
  std::vector<char> transition;  // K x K, row = from
  std::vector<char> begin;
  std::vector<char> end;

  bool Allowed(int from, int to) const {
    return transition[static_cast<std::size_t>(from) * num_labels + to] != 0;
  }
  static TransitionMask AllowAll(int num_labels);
};

// Per-layer BILOU constraints over a stacked vocabulary.
TransitionMask BuildConstraintMask(const LabelVocabulary& vocabulary);

using FeatureSequence = std::vector<FeatureVector>;

// Emission score of every (position, label); L x K.
Matrix EmissionScores(const CrfParams& params,
                      std::span<const FeatureVector> features);

double ScoreSequence(const CrfParams& params,
                     std::span<const FeatureVector> features,
                     std::span<const int> labels);

double LogPartition(const CrfParams& params,
                    std::span<const FeatureVector> features,
                    const TransitionMask* mask = nullptr);

struct ViterbiResult {
  std::vector<int> labels;
  double score = 0.0;
};

// Highest-scoring admitted path. Among equal scores the path with the lowest
// label id at the latest differing position wins. Throws NoFeasiblePath.
ViterbiResult Viterbi(const CrfParams& params,
                      std::span<const FeatureVector> features,
                      const TransitionMask* mask = nullptr);

struct Marginals {
  Matrix unary;                 // L x K
  std::vector<Matrix> pairwise;  // L-1 matrices of K x K, row = from
  double log_partition = 0.0;
};

Marginals ComputeMarginals(const CrfParams& params,
                           std::span<const FeatureVector> features,
                           const TransitionMask* mask = nullptr);

struct LabeledSequence {
  FeatureSequence features;
  std::vector<int> labels;
};

struct LossAndGradient {
  double loss = 0.0;
  std::vector<double> gradient;  // same layout as CrfParams::values()
};

// Negative log-likelihood of the batch plus (l2/2)|w|^2 and its gradient.
// Per-sequence work runs on up to `threads` threads and is summed in batch
// order, so the result does not depend on the thread count.
LossAndGradient NllAndGradient(const CrfParams& params,
                               std::span<const LabeledSequence> batch,
                               double l2_lambda,
                               const TransitionMask* mask = nullptr,
                               int threads = 1);

}  // namespace causal

#endif  // CAUSAL_CRF_H_
