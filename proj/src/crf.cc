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

#include "causal/crf.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "causal/errors.h"
#include "causal/parallel.h"

namespace causal {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double LogSumExp(std::span<const double> values) {
  double max = kNegInf;
  for (double v : values) max = std::max(max, v);
  if (max == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - max);
  return max + std::log(sum);
}

// Transition, begin and end scores with forbidden moves at -infinity.
struct Potentials {
  int k = 0;
  Matrix transition;
  std::vector<double> begin;
  std::vector<double> end;
};

Potentials MakePotentials(const CrfParams& params, const TransitionMask* mask) {
  Potentials p;
  p.k = params.num_labels();
  p.transition = Matrix(p.k, p.k);
  p.begin.resize(p.k);
  p.end.resize(p.k);
  if (mask && mask->num_labels != p.k) {
    throw DimensionMismatch("mask over " + std::to_string(mask->num_labels) +
                            " labels, model has " + std::to_string(p.k));
  }
  for (int a = 0; a < p.k; ++a) {
    p.begin[a] = (mask && !mask->begin[a]) ? kNegInf : params.begin(a);
    p.end[a] = (mask && !mask->end[a]) ? kNegInf : params.end(a);
    for (int b = 0; b < p.k; ++b) {
      p.transition(a, b) =
          (mask && !mask->Allowed(a, b)) ? kNegInf : params.transition(a, b);
    }
  }
  return p;
}

void CheckLength(std::span<const FeatureVector> features) {
  if (features.empty()) {
    throw DimensionMismatch("sequence must contain at least one token");
  }
}

// alpha(t, y): log-sum of all prefixes ending in y at t (emission included).
Matrix Forward(const Potentials& p, const Matrix& unary) {
  const std::size_t len = unary.rows();
  Matrix alpha(len, p.k);
  std::vector<double> scratch(p.k);
  for (int y = 0; y < p.k; ++y) alpha(0, y) = p.begin[y] + unary(0, y);
  for (std::size_t t = 1; t < len; ++t) {
    for (int b = 0; b < p.k; ++b) {
      for (int a = 0; a < p.k; ++a) {
        scratch[a] = alpha(t - 1, a) + p.transition(a, b);
      }
      alpha(t, b) = LogSumExp(scratch) + unary(t, b);
    }
  }
  return alpha;
}

// beta(t, y): log-sum of all suffixes after y at t (end score included).
Matrix Backward(const Potentials& p, const Matrix& unary) {
  const std::size_t len = unary.rows();
  Matrix beta(len, p.k);
  std::vector<double> scratch(p.k);
  for (int y = 0; y < p.k; ++y) beta(len - 1, y) = p.end[y];
  for (std::size_t t = len - 1; t-- > 0;) {
    for (int a = 0; a < p.k; ++a) {
      for (int b = 0; b < p.k; ++b) {
        scratch[b] = p.transition(a, b) + unary(t + 1, b) + beta(t + 1, b);
      }
      beta(t, a) = LogSumExp(scratch);
    }
  }
  return beta;
}

double FinalLogSum(const Potentials& p, const Matrix& alpha) {
  std::vector<double> scratch(p.k);
  for (int y = 0; y < p.k; ++y) {
    scratch[y] = alpha(alpha.rows() - 1, y) + p.end[y];
  }
  return LogSumExp(scratch);
}

double SafeExp(double v) { return v == kNegInf ? 0.0 : std::exp(v); }

}  // namespace

void CrfParams::Layout(int num_labels, int dense_dim) {
  num_labels_ = num_labels;
  dense_dim_ = dense_dim;
  dense_offset_ = row_labels_.size();
  transition_offset_ =
      dense_offset_ + static_cast<std::size_t>(dense_dim) * num_labels;
  begin_offset_ =
      transition_offset_ + static_cast<std::size_t>(num_labels) * num_labels;
  end_offset_ = begin_offset_ + num_labels;
  values_.assign(end_offset_ + num_labels, 0.0);
}

CrfParams CrfParams::Dense(int num_features, int num_labels, int dense_dim) {
  std::vector<int> all(num_labels);
  for (int y = 0; y < num_labels; ++y) all[y] = y;
  return Sparse(std::vector<std::vector<int>>(num_features, all), num_labels,
                dense_dim);
}

CrfParams CrfParams::Sparse(std::vector<std::vector<int>> labels_per_feature,
                            int num_labels, int dense_dim) {
  if (num_labels < 1) throw DimensionMismatch("need at least one label");
  CrfParams p;
  p.row_offsets_.assign(1, 0);
  for (auto& labels : labels_per_feature) {
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    for (int y : labels) {
      if (y < 0 || y >= num_labels) {
        throw UnknownLabel("label id " + std::to_string(y));
      }
      p.row_labels_.push_back(y);
    }
    p.row_offsets_.push_back(p.row_labels_.size());
  }
  p.Layout(num_labels, dense_dim);
  return p;
}

TransitionMask TransitionMask::AllowAll(int num_labels) {
  TransitionMask m;
  m.num_labels = num_labels;
  m.transition.assign(static_cast<std::size_t>(num_labels) * num_labels, 1);
  m.begin.assign(num_labels, 1);
  m.end.assign(num_labels, 1);
  return m;
}

namespace {

bool LayerOpen(const LayerTag& t) {
  return t.prefix == Bilou::kB || t.prefix == Bilou::kI;
}

bool LayerStep(const LayerTag& from, const LayerTag& to) {
  if (LayerOpen(from)) {
    return (to.prefix == Bilou::kI || to.prefix == Bilou::kL) &&
           to.role == from.role;
  }
  return to.prefix == Bilou::kO || to.prefix == Bilou::kB ||
         to.prefix == Bilou::kU;
}

}  // namespace

TransitionMask BuildConstraintMask(const LabelVocabulary& vocabulary) {
  const int k = static_cast<int>(vocabulary.size());
  TransitionMask m = TransitionMask::AllowAll(k);
  for (int a = 0; a < k; ++a) {
    StackedTag from = vocabulary.Tag(a);
    bool can_begin = true;
    bool can_end = true;
    for (const LayerTag& t : from.layers) {
      can_begin &= t.prefix == Bilou::kO || t.prefix == Bilou::kB ||
                   t.prefix == Bilou::kU;
      can_end &= t.prefix == Bilou::kO || t.prefix == Bilou::kL ||
                 t.prefix == Bilou::kU;
    }
    m.begin[a] = can_begin;
    m.end[a] = can_end;
    for (int b = 0; b < k; ++b) {
      StackedTag to = vocabulary.Tag(b);
      bool ok = true;
      for (std::size_t layer = 0; layer < kNumLayers && ok; ++layer) {
        ok = LayerStep(from.layers[layer], to.layers[layer]);
      }
      m.transition[static_cast<std::size_t>(a) * k + b] = ok;
    }
  }
  return m;
}

Matrix EmissionScores(const CrfParams& params,
                      std::span<const FeatureVector> features) {
  const int k = params.num_labels();
  const auto& w = params.values();
  Matrix unary(features.size(), k);
  for (std::size_t t = 0; t < features.size(); ++t) {
    auto row = unary.row(t);
    for (int f : features[t].indices) {
      if (f < 0 || f >= params.num_features()) {
        throw DimensionMismatch("feature id " + std::to_string(f) +
                                " outside model with " +
                                std::to_string(params.num_features()) +
                                " features");
      }
      std::size_t offset = params.EmissionOffset(f);
      auto labels = params.EmissionLabels(f);
      for (std::size_t j = 0; j < labels.size(); ++j) {
        row[labels[j]] += w[offset + j];
      }
    }
    const auto& dense = features[t].dense;
    if (dense.empty()) continue;
    if (static_cast<int>(dense.size()) != params.dense_dim()) {
      throw DimensionMismatch("dense vector of length " +
                              std::to_string(dense.size()) + ", model expects " +
                              std::to_string(params.dense_dim()));
    }
    for (int d = 0; d < params.dense_dim(); ++d) {
      double x = dense[d];
      if (x == 0.0) continue;
      const double* wd = &w[params.DenseIndex(d, 0)];
      for (int y = 0; y < k; ++y) row[y] += x * wd[y];
    }
  }
  return unary;
}

double ScoreSequence(const CrfParams& params,
                     std::span<const FeatureVector> features,
                     std::span<const int> labels) {
  if (features.size() != labels.size()) {
    throw DimensionMismatch(std::to_string(features.size()) + " tokens, " +
                            std::to_string(labels.size()) + " labels");
  }
  if (labels.empty()) return 0.0;
  for (int y : labels) {
    if (y < 0 || y >= params.num_labels()) {
      throw DimensionMismatch("label id " + std::to_string(y));
    }
  }
  Matrix unary = EmissionScores(params, features);
  double score = params.begin(labels.front());
  for (std::size_t t = 0; t < labels.size(); ++t) {
    score += unary(t, labels[t]);
    if (t + 1 < labels.size()) score += params.transition(labels[t], labels[t + 1]);
  }
  return score + params.end(labels.back());
}

double LogPartition(const CrfParams& params,
                    std::span<const FeatureVector> features,
                    const TransitionMask* mask) {
  CheckLength(features);
  Potentials p = MakePotentials(params, mask);
  Matrix unary = EmissionScores(params, features);
  return FinalLogSum(p, Forward(p, unary));
}

ViterbiResult Viterbi(const CrfParams& params,
                      std::span<const FeatureVector> features,
                      const TransitionMask* mask) {
  CheckLength(features);
  Potentials p = MakePotentials(params, mask);
  Matrix unary = EmissionScores(params, features);
  const std::size_t len = features.size();
  Matrix delta(len, p.k);
  std::vector<int> back(len * p.k, 0);
  for (int y = 0; y < p.k; ++y) delta(0, y) = p.begin[y] + unary(0, y);
  for (std::size_t t = 1; t < len; ++t) {
    for (int b = 0; b < p.k; ++b) {
      double best = kNegInf;
      int arg = 0;
      for (int a = 0; a < p.k; ++a) {
        double v = delta(t - 1, a) + p.transition(a, b);
        if (v > best) {
          best = v;
          arg = a;
        }
      }
      delta(t, b) = best + unary(t, b);
      back[t * p.k + b] = arg;
    }
  }
  double best = kNegInf;
  int last = 0;
  for (int y = 0; y < p.k; ++y) {
    double v = delta(len - 1, y) + p.end[y];
    if (v > best) {
      best = v;
      last = y;
    }
  }
  if (best == kNegInf) {
    throw NoFeasiblePath("no admitted label sequence of length " +
                         std::to_string(len));
  }
  ViterbiResult result;
  result.labels.resize(len);
  result.labels[len - 1] = last;
  for (std::size_t t = len - 1; t > 0; --t) {
    result.labels[t - 1] = back[t * p.k + result.labels[t]];
  }
  result.score = ScoreSequence(params, features, result.labels);
  return result;
}

namespace {

// Each position sums to one; removes drift left by the log-space passes.
void Renormalize(std::span<double> values) {
  double total = 0.0;
  for (double v : values) total += v;
  if (total > 0.0) {
    for (double& v : values) v /= total;
  }
}

}  // namespace

Marginals ComputeMarginals(const CrfParams& params,
                           std::span<const FeatureVector> features,
                           const TransitionMask* mask) {
  CheckLength(features);
  Potentials p = MakePotentials(params, mask);
  Matrix unary = EmissionScores(params, features);
  Matrix alpha = Forward(p, unary);
  Matrix beta = Backward(p, unary);
  const std::size_t len = features.size();
  Marginals m;
  m.log_partition = FinalLogSum(p, alpha);
  if (m.log_partition == kNegInf) {
    throw NoFeasiblePath("no admitted label sequence of length " +
                         std::to_string(len));
  }
  m.unary = Matrix(len, p.k);
  for (std::size_t t = 0; t < len; ++t) {
    for (int y = 0; y < p.k; ++y) {
      m.unary(t, y) = SafeExp(alpha(t, y) + beta(t, y) - m.log_partition);
    }
    Renormalize(m.unary.row(t));
  }
  m.pairwise.reserve(len - 1);
  for (std::size_t t = 0; t + 1 < len; ++t) {
    Matrix edge(p.k, p.k);
    for (int a = 0; a < p.k; ++a) {
      if (alpha(t, a) == kNegInf) continue;
      for (int b = 0; b < p.k; ++b) {
        edge(a, b) = SafeExp(alpha(t, a) + p.transition(a, b) +
                             unary(t + 1, b) + beta(t + 1, b) -
                             m.log_partition);
      }
    }
    Renormalize(edge.data());
    m.pairwise.push_back(std::move(edge));
  }
  return m;
}

namespace {

// Model expectation of one sequence, summarized so that the reduction over
// the batch touches only what the sequence activated.
struct SequenceStats {
  double log_partition = 0.0;
  double gold_score = 0.0;
  Matrix unary;       // L x K
  Matrix edge_total;  // K x K, summed over positions
};

SequenceStats ComputeStats(const CrfParams& params, const LabeledSequence& seq,
                           const TransitionMask* mask) {
  const int k = params.num_labels();
  if (seq.labels.size() != seq.features.size()) {
    throw DimensionMismatch(std::to_string(seq.features.size()) + " tokens, " +
                            std::to_string(seq.labels.size()) + " labels");
  }
  for (int y : seq.labels) {
    if (y < 0 || y >= k) throw UnknownLabel("label id " + std::to_string(y));
  }
  Marginals m = ComputeMarginals(params, seq.features, mask);
  SequenceStats s;
  s.log_partition = m.log_partition;
  s.gold_score = ScoreSequence(params, seq.features, seq.labels);
  s.unary = std::move(m.unary);
  s.edge_total = Matrix(k, k);
  for (const Matrix& edge : m.pairwise) {
    for (std::size_t i = 0; i < edge.data().size(); ++i) {
      s.edge_total.data()[i] += edge.data()[i];
    }
  }
  return s;
}

}  // namespace

LossAndGradient NllAndGradient(const CrfParams& params,
                               std::span<const LabeledSequence> batch,
                               double l2_lambda, const TransitionMask* mask,
                               int threads) {
  const int k = params.num_labels();
  std::vector<SequenceStats> stats(batch.size());
  ParallelFor(batch.size(), threads, [&](std::size_t i) {
    if (batch[i].features.empty()) return;
    stats[i] = ComputeStats(params, batch[i], mask);
  });

  LossAndGradient out;
  out.gradient.assign(params.size(), 0.0);
  auto& g = out.gradient;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const LabeledSequence& seq = batch[i];
    if (seq.features.empty()) continue;
    const SequenceStats& s = stats[i];
    if (!std::isfinite(s.gold_score)) {
      throw DivergenceError("non-finite gold score");
    }
    out.loss += s.log_partition - s.gold_score;
    const std::size_t len = seq.features.size();
    for (std::size_t t = 0; t < len; ++t) {
      const int gold = seq.labels[t];
      auto marg = s.unary.row(t);
      for (int f : seq.features[t].indices) {
        std::size_t offset = params.EmissionOffset(f);
        auto labels = params.EmissionLabels(f);
        for (std::size_t j = 0; j < labels.size(); ++j) {
          g[offset + j] += marg[labels[j]];
          if (labels[j] == gold) g[offset + j] -= 1.0;
        }
      }
      const auto& dense = seq.features[t].dense;
      for (std::size_t d = 0; d < dense.size(); ++d) {
        double x = dense[d];
        if (x == 0.0) continue;
        double* gd = &g[params.DenseIndex(static_cast<int>(d), 0)];
        for (int y = 0; y < k; ++y) gd[y] += x * marg[y];
        gd[gold] -= x;
      }
      if (t + 1 < len) g[params.TransitionIndex(gold, seq.labels[t + 1])] -= 1.0;
    }
    for (int a = 0; a < k; ++a) {
      g[params.BeginIndex(a)] += s.unary(0, a);
      g[params.EndIndex(a)] += s.unary(len - 1, a);
      for (int b = 0; b < k; ++b) {
        g[params.TransitionIndex(a, b)] += s.edge_total(a, b);
      }
    }
    g[params.BeginIndex(seq.labels.front())] -= 1.0;
    g[params.EndIndex(seq.labels.back())] -= 1.0;
  }
  if (l2_lambda > 0.0) {
    const auto& w = params.values();
    double norm = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      norm += w[i] * w[i];
      g[i] += l2_lambda * w[i];
    }
    out.loss += 0.5 * l2_lambda * norm;
  }
  return out;
}

}  // namespace causal
