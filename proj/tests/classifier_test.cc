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

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "causal/classifier.h"
#include "causal/errors.h"
#include "test_util.h"

namespace causal {
namespace {

using testing::SkewedBinaryCorpus;

std::vector<bool> Gold(const Corpus& c) {
  std::vector<bool> out;
  for (const Sentence& s : c.sentences) out.push_back(s.is_causal);
  return out;
}

std::vector<bool> Predict(const BinaryModel& m, const Corpus& c) {
  std::vector<bool> out;
  for (const Sentence& s : c.sentences) out.push_back(PredictBinary(m, s).label);
  return out;
}

TEST(BinaryMetricsTest, HandCounts) {
  // TP=3 FP=1 FN=2 TN=4
  std::vector<bool> gold = {1, 1, 1, 1, 1, 0, 0, 0, 0, 0};
  std::vector<bool> pred = {1, 1, 1, 0, 0, 1, 0, 0, 0, 0};
  auto m = ComputeBinaryMetrics(gold, pred);
  EXPECT_DOUBLE_EQ(m.precision, 0.75);
  EXPECT_DOUBLE_EQ(m.recall, 0.6);
  EXPECT_NEAR(m.f1, 2.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(m.accuracy, 0.7);
  EXPECT_FALSE(m.degenerate);
}

TEST(BinaryMetricsTest, PerfectAndAllNegative) {
  std::vector<bool> gold = {1, 0, 1, 0};
  auto p = ComputeBinaryMetrics(gold, gold);
  EXPECT_EQ(p.precision, 1.0);
  EXPECT_EQ(p.recall, 1.0);
  EXPECT_EQ(p.f1, 1.0);
  EXPECT_EQ(p.accuracy, 1.0);
  auto n = ComputeBinaryMetrics(gold, {0, 0, 0, 0});
  EXPECT_EQ(n.recall, 0.0);
  EXPECT_EQ(n.f1, 0.0);
  EXPECT_TRUE(n.degenerate);
  EXPECT_THROW(ComputeBinaryMetrics(gold, {1}), LengthMismatch);
}

TEST(BinaryMetricsTest, SymmetricUnderJointPermutation) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<bool> g(12), p(12);
    for (std::size_t i = 0; i < g.size(); ++i) {
      g[i] = rng() % 2;
      p[i] = rng() % 2;
    }
    std::vector<std::size_t> perm(12);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<bool> gp(12), pp(12);
    for (std::size_t i = 0; i < 12; ++i) {
      gp[i] = g[perm[i]];
      pp[i] = p[perm[i]];
    }
    EXPECT_EQ(ComputeBinaryMetrics(g, p).f1, ComputeBinaryMetrics(gp, pp).f1);
  }
}

TEST(SentenceFeaturesTest, CountsSignals) {
  Sentence s = MakeSentence("x", "Rain led to floods and floods led to panic.",
                            {});
  double sig = 0, unigram_floods = 0;
  for (const auto& [name, value] : SentenceFeatures(s)) {
    if (name == "sig=led to") sig = value;
    if (name == "u=floods") unigram_floods = value;
  }
  EXPECT_EQ(sig, 2.0);
  EXPECT_EQ(unigram_floods, 2.0);
}

TEST(TrainBinaryTest, SeparableToySet) {
  Corpus train = SkewedBinaryCorpus(20, 20, 1.0, 0.0, 1);
  auto r = TrainBinary(train, train, {1.0, 1.0}, BinaryTrainConfig());
  auto m = ComputeBinaryMetrics(Gold(train), Predict(r.model, train));
  EXPECT_EQ(m.accuracy, 1.0);
  Sentence unknown = MakeSentence("u", "zzqx yyqw", {});
  auto pred = PredictBinary(r.model, unknown);
  EXPECT_NEAR(pred.score, 1.0 / (1.0 + std::exp(-r.model.bias)), 1e-12);
  EXPECT_EQ(PredictBinary(r.model, unknown).score, pred.score);
}

TEST(TrainBinaryTest, FeatureScalingKeepsLabels) {
  Corpus train = SkewedBinaryCorpus(20, 20, 1.0, 0.0, 2);
  BinaryTrainConfig base;
  auto a = TrainBinary(train, train, {1.0, 1.0}, base);
  BinaryTrainConfig scaled = base;
  scaled.feature_scale = 4.0;
  scaled.learning_rate = base.learning_rate / 4.0;
  scaled.max_epochs = 200;
  auto b = TrainBinary(train, train, {1.0, 1.0}, scaled);
  EXPECT_EQ(Predict(a.model, train), Predict(b.model, train));
}

TEST(TrainBinaryTest, PositiveWeightRaisesRecall) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Corpus train = SkewedBinaryCorpus(100, 300, 0.6, 0.2, seed);
    Corpus dev = SkewedBinaryCorpus(30, 90, 0.6, 0.2, seed + 100);
    Corpus test = SkewedBinaryCorpus(100, 300, 0.6, 0.2, seed + 200);
    BinaryTrainConfig config;
    config.seed = seed;
    auto plain = TrainBinary(train, dev, {1.0, 1.0}, config);
    auto weighted = TrainBinary(train, dev, {1.5, 1.0}, config);
    double r_plain =
        ComputeBinaryMetrics(Gold(test), Predict(plain.model, test)).recall;
    double r_weighted =
        ComputeBinaryMetrics(Gold(test), Predict(weighted.model, test)).recall;
    EXPECT_GE(r_weighted, r_plain) << "seed " << seed;
  }
}

TEST(TrainBinaryTest, SingleClass) {
  Corpus neg = SkewedBinaryCorpus(0, 10, 0.5, 0.5, 3);
  EXPECT_THROW(TrainBinary(neg, neg, {}, BinaryTrainConfig()),
               SingleClassCorpus);
}

TEST(TrainBinaryTest, EmptyDevFallsBackToTrain) {
  Corpus train = SkewedBinaryCorpus(10, 10, 1.0, 0.0, 5);
  Corpus empty;
  auto r = TrainBinary(train, empty, {}, BinaryTrainConfig());
  EXPECT_FALSE(r.history.empty());
}

TEST(ClassWeightsTest, Validate) {
  ClassWeights w{0.0, 1.0};
  EXPECT_THROW(w.Validate(), ConfigError);
}

}  // namespace
}  // namespace causal
