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

#ifndef CAUSAL_TESTS_CRF_ORACLE_H_
#define CAUSAL_TESTS_CRF_ORACLE_H_

// Exhaustive-enumeration reference for small CRF instances.

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "causal/crf.h"

namespace causal::testing {

struct CrfInstance {
  CrfParams params;
  FeatureSequence features;
  TransitionMask mask;
};

// Random sparse/dense parameters and features. Roughly a third of the
// transitions are forbidden in `mask`, with begin/end kept partly open.
inline CrfInstance RandomCrfInstance(std::mt19937_64& rng, int max_len,
                                     int max_labels) {
  std::uniform_int_distribution<int> len_d(1, max_len), k_d(1, max_labels);
  std::normal_distribution<double> w(0.0, 1.0);
  int L = len_d(rng), K = k_d(rng);
  int F = 1 + rng() % 6;
  int D = rng() % 3;
  std::vector<std::vector<int>> rows(F);
  for (auto& r : rows) {
    for (int y = 0; y < K; ++y) {
      if (rng() % 3 != 0) r.push_back(y);
    }
  }
  CrfInstance inst;
  inst.params = CrfParams::Sparse(rows, K, D);
  for (double& v : inst.params.values()) v = w(rng);
  for (int t = 0; t < L; ++t) {
    FeatureVector fv;
    for (int f = 0; f < F; ++f) {
      if (rng() % 2) fv.indices.push_back(f);
    }
    for (int d = 0; d < D; ++d) fv.dense.push_back(static_cast<float>(w(rng)));
    inst.features.push_back(fv);
  }
  inst.mask = TransitionMask::AllowAll(K);
  for (auto& c : inst.mask.transition) c = rng() % 3 != 0;
  for (auto& c : inst.mask.begin) c = rng() % 4 != 0;
  for (auto& c : inst.mask.end) c = rng() % 4 != 0;
  return inst;
}

// Term-by-term score straight from the flat parameter vector.
inline double OracleScore(const CrfParams& p, const FeatureSequence& x,
                          const std::vector<int>& y) {
  const auto& v = p.values();
  double s = v[p.BeginIndex(y.front())] + v[p.EndIndex(y.back())];
  for (std::size_t t = 0; t < y.size(); ++t) {
    for (int f : x[t].indices) {
      auto labels = p.EmissionLabels(f);
      for (std::size_t j = 0; j < labels.size(); ++j) {
        if (labels[j] == y[t]) s += v[p.EmissionOffset(f) + j];
      }
    }
    for (std::size_t d = 0; d < x[t].dense.size(); ++d) {
      s += v[p.DenseIndex(static_cast<int>(d), y[t])] * x[t].dense[d];
    }
    if (t > 0) s += v[p.TransitionIndex(y[t - 1], y[t])];
  }
  return s;
}

inline bool OracleAdmitted(const TransitionMask* mask,
                           const std::vector<int>& y) {
  if (!mask) return true;
  if (!mask->begin[y.front()] || !mask->end[y.back()]) return false;
  for (std::size_t t = 1; t < y.size(); ++t) {
    if (!mask->Allowed(y[t - 1], y[t])) return false;
  }
  return true;
}

// Calls fn(y) for every admitted label sequence of length L.
inline void ForEachPath(int L, int K, const TransitionMask* mask,
                        const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> y(L, 0);
  while (true) {
    if (OracleAdmitted(mask, y)) fn(y);
    int t = L - 1;
    while (t >= 0 && ++y[t] == K) y[t--] = 0;
    if (t < 0) break;
  }
}

struct OracleResult {
  double max_score = -std::numeric_limits<double>::infinity();
  std::vector<int> argmax;
  double log_z = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> unary;                 // L x K
  std::vector<std::vector<std::vector<double>>> pairwise;  // L-1 x K x K
  std::size_t paths = 0;
};

inline OracleResult Enumerate(const CrfParams& p, const FeatureSequence& x,
                              const TransitionMask* mask) {
  const int L = static_cast<int>(x.size());
  const int K = p.num_labels();
  OracleResult r;
  std::vector<std::pair<double, std::vector<int>>> all;
  ForEachPath(L, K, mask, [&](const std::vector<int>& y) {
    double s = OracleScore(p, x, y);
    all.emplace_back(s, y);
    if (s > r.max_score) {
      r.max_score = s;
      r.argmax = y;
    }
  });
  r.paths = all.size();
  r.unary.assign(L, std::vector<double>(K, 0.0));
  r.pairwise.assign(std::max(L - 1, 0),
                    std::vector<std::vector<double>>(K, std::vector<double>(K)));
  if (all.empty()) return r;
  double z = 0.0;
  for (const auto& [s, y] : all) z += std::exp(s - r.max_score);
  r.log_z = r.max_score + std::log(z);
  for (const auto& [s, y] : all) {
    double prob = std::exp(s - r.log_z);
    for (int t = 0; t < L; ++t) r.unary[t][y[t]] += prob;
    for (int t = 0; t + 1 < L; ++t) r.pairwise[t][y[t]][y[t + 1]] += prob;
  }
  return r;
}

// Batch NLL plus (l2/2)|w|^2 by enumeration.
inline double OracleNll(const CrfParams& p,
                        const std::vector<LabeledSequence>& batch, double l2,
                        const TransitionMask* mask) {
  double loss = 0.0;
  for (const auto& seq : batch) {
    loss += Enumerate(p, seq.features, mask).log_z -
            OracleScore(p, seq.features, seq.labels);
  }
  double sq = 0.0;
  for (double v : p.values()) sq += v * v;
  return loss + 0.5 * l2 * sq;
}

}  // namespace causal::testing

#endif  // CAUSAL_TESTS_CRF_ORACLE_H_
