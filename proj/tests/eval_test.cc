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

#include <array>
#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "causal/errors.h"
#include "causal/eval.h"
#include "test_util.h"

namespace causal {
namespace {

using testing::ClashSentence;
using testing::RandomSentence;
using testing::Rel;
using testing::S;

PooledSpan P(Role r, std::size_t b, std::size_t e) { return {r, b, e}; }

using CategoryCounts = std::array<int, 4>;  // TP, LE, BE, LBE

CategoryCounts Count(const SentenceMatch& m) {
  CategoryCounts c{};
  for (const auto& p : m.pairs) {
    if (p.category != MatchCategory::kNoMatch) ++c[static_cast<int>(p.category)];
  }
  return c;
}

// Best lexicographic category counts over every partial one-to-one matching.
CategoryCounts OracleBest(const std::vector<PooledSpan>& gold,
                          const std::vector<PooledSpan>& pred) {
  CategoryCounts best{};
  std::vector<bool> used(pred.size(), false);
  CategoryCounts cur{};
  std::function<void(std::size_t)> rec = [&](std::size_t g) {
    if (g == gold.size()) {
      best = std::max(best, cur);
      return;
    }
    rec(g + 1);
    for (std::size_t p = 0; p < pred.size(); ++p) {
      if (used[p]) continue;
      MatchCategory c = ClassifyMatch(gold[g], pred[p]);
      if (c == MatchCategory::kNoMatch) continue;
      used[p] = true;
      ++cur[static_cast<int>(c)];
      rec(g + 1);
      --cur[static_cast<int>(c)];
      used[p] = false;
    }
  };
  rec(0);
  return best;
}

std::vector<PooledSpan> RandomSpans(std::mt19937_64& rng, std::size_t n,
                                    std::size_t len) {
  std::vector<PooledSpan> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t b = rng() % len;
    std::size_t e = b + 1 + rng() % 3;
    out.push_back(P(static_cast<Role>(rng() % 3), b, e));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void CheckAccounting(const SentenceMatch& m, const std::vector<PooledSpan>& g,
                     const std::vector<PooledSpan>& p) {
  ErrorCounts counts;
  counts.Add(m, g, p);
  for (int r = 0; r < kNumRoles; ++r) {
    long gold_r = std::count_if(g.begin(), g.end(), [&](const PooledSpan& s) {
      return static_cast<int>(s.role) == r;
    });
    long pred_r = std::count_if(p.begin(), p.end(), [&](const PooledSpan& s) {
      return static_cast<int>(s.role) == r;
    });
    EXPECT_EQ(counts.roles[r].GoldTotal(), gold_r);
    EXPECT_EQ(counts.roles[r].PredTotal(), pred_r);
  }
}

TEST(PoolSpansTest, ClashSharedSpan) {
  auto pooled = PoolSpans(ClashSentence().relations);
  int clash = 0;
  for (const auto& s : pooled) clash += s.start == 0 && s.end == 2;
  EXPECT_EQ(clash, 2);
  EXPECT_EQ(pooled.size(), 5u);
  EXPECT_TRUE(PoolSpans({}).empty());
  auto r = Rel(S(0, 1, Role::kCause), S(2, 3, Role::kEffect));
  EXPECT_EQ(PoolSpans({r, r}).size(), 2u);
}

TEST(ClassifyMatchTest, Examples) {
  EXPECT_EQ(ClassifyMatch(P(Role::kCause, 2, 5), P(Role::kCause, 2, 5)),
            MatchCategory::kTP);
  EXPECT_EQ(ClassifyMatch(P(Role::kCause, 2, 5), P(Role::kCause, 3, 6)),
            MatchCategory::kBE);
  EXPECT_EQ(ClassifyMatch(P(Role::kCause, 2, 5), P(Role::kEffect, 2, 5)),
            MatchCategory::kLE);
  EXPECT_EQ(ClassifyMatch(P(Role::kCause, 2, 5), P(Role::kSignal, 4, 9)),
            MatchCategory::kLBE);
  EXPECT_EQ(ClassifyMatch(P(Role::kCause, 2, 5), P(Role::kCause, 5, 6)),
            MatchCategory::kNoMatch);
}

TEST(MatchSentenceTest, IdenticalAndEmpty) {
  std::vector<PooledSpan> g = {P(Role::kCause, 0, 2), P(Role::kEffect, 3, 4)};
  auto m = MatchSentence(g, g);
  EXPECT_EQ(Count(m), (CategoryCounts{2, 0, 0, 0}));
  EXPECT_TRUE(m.unmatched_gold.empty());
  EXPECT_TRUE(m.unmatched_pred.empty());
  auto e = MatchSentence(g, {});
  EXPECT_EQ(e.unmatched_gold.size(), 2u);
}

TEST(MatchSentenceTest, CrossingOverlapsPreferTp) {
  // Greedy left-to-right would pair gold0 with pred0 as BE and lose the TP.
  std::vector<PooledSpan> g = {P(Role::kCause, 0, 3), P(Role::kCause, 2, 5)};
  std::vector<PooledSpan> p = {P(Role::kCause, 1, 4), P(Role::kCause, 0, 3)};
  std::sort(p.begin(), p.end());
  auto m = MatchSentence(g, p);
  EXPECT_EQ(Count(m), (CategoryCounts{1, 0, 1, 0}));
}

TEST(MatchSentenceTest, EnumerationOracle) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    auto g = RandomSpans(rng, rng() % 6, 8);
    auto p = RandomSpans(rng, rng() % 6, 8);
    auto m = MatchSentence(g, p);
    EXPECT_EQ(Count(m), OracleBest(g, p)) << "trial " << trial;
    CheckAccounting(m, g, p);
  }
}

TEST(MatchSentenceTest, GreedyAboveLimitKeepsAccounting) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = RandomSpans(rng, 12, 30);
    auto p = RandomSpans(rng, 12, 30);
    ASSERT_GT(g.size() * p.size(), kExactMatchLimit);
    auto m = MatchSentence(g, p);
    CheckAccounting(m, g, p);
    EXPECT_EQ(Count(MatchSentence(g, g))[0], static_cast<int>(g.size()));
  }
}

TEST(FairScoresTest, Formula) {
  ErrorCounts c;
  c[Role::kCause].tp = 5;
  auto all_tp = FairScores(c)[0];
  EXPECT_EQ(all_tp.precision, 1.0);
  EXPECT_EQ(all_tp.f1, 1.0);

  ErrorCounts be;
  be[Role::kCause].be = 1;
  EXPECT_EQ(FairScores(be)[0].precision, 0.5);
  EXPECT_EQ(FairScores(be)[0].recall, 0.5);
  EXPECT_EQ(StrictScores(be)[0].precision, 0.0);
  EXPECT_EQ(StrictScores(be)[0].recall, 0.0);

  ErrorCounts mix;
  mix[Role::kEffect].tp = 2;
  mix[Role::kEffect].be = 1;
  mix[Role::kEffect].fp = 1;
  auto f = FairScores(mix)[1];
  EXPECT_DOUBLE_EQ(f.precision, 0.625);
  EXPECT_DOUBLE_EQ(f.recall, 2.5 / 3);
  EXPECT_DOUBLE_EQ(f.f1, 2 * 0.625 * (2.5 / 3) / (0.625 + 2.5 / 3));
  EXPECT_EQ(FairScores(ErrorCounts())[2].f1, 0.0);
}

Corpus Gold() {
  Corpus c;
  c.sentences.push_back(MakeSentence(
      "g1", "a b c d e f g h i j k l",
      {Rel(S(0, 2, Role::kCause), S(3, 5, Role::kEffect),
           S(2, 3, Role::kSignal))}));
  c.sentences.push_back(MakeSentence(
      "g2", "a b c d e f g h i j k l",
      {Rel(S(0, 2, Role::kCause), S(5, 7, Role::kEffect),
           S(3, 4, Role::kSignal))}));
  c.sentences.push_back(MakeSentence("g3", "nothing here", {}));
  return c;
}

TEST(EvaluateTest, GoldAgainstItself) {
  Corpus g = Gold();
  for (EvalMode mode : {EvalMode::kFair, EvalMode::kStrict}) {
    auto r = Evaluate(g, g, mode);
    for (const Prf& p : r.overall.roles) EXPECT_EQ(p.f1, 1.0);
    EXPECT_EQ(r.overall.macro.f1, 1.0);
    EXPECT_EQ(r.skipped, 1u);
    EXPECT_EQ(r.evaluated, 2u);
  }
}

TEST(EvaluateTest, SingleBoundaryError) {
  Corpus g;
  g.sentences.push_back(MakeSentence(
      "s", "a b c d", {Rel(S(0, 2, Role::kCause), S(3, 4, Role::kEffect))}));
  Corpus p;
  p.sentences.push_back(MakeSentence(
      "s", "a b c d", {Rel(S(0, 1, Role::kCause), S(3, 4, Role::kEffect))}));
  auto fair = Evaluate(g, p, EvalMode::kFair);
  auto strict = Evaluate(g, p, EvalMode::kStrict);
  EXPECT_EQ(fair.overall.roles[0].f1, 0.5);
  EXPECT_EQ(strict.overall.roles[0].f1, 0.0);
  EXPECT_EQ(fair.overall.roles[1].f1, 1.0);
}

TEST(EvaluateTest, HandBuiltMixedFixture) {
  Corpus g = Gold();
  Corpus p;
  // g1: exact relation plus a disjoint spurious one.
  p.sentences.push_back(MakeSentence(
      "g1", "a b c d e f g h i j k l",
      {Rel(S(0, 2, Role::kCause), S(3, 5, Role::kEffect),
           S(2, 3, Role::kSignal)),
       Rel(S(8, 9, Role::kCause), S(10, 11, Role::kEffect),
           S(9, 10, Role::kSignal))}));
  // g2: every span off by one token.
  p.sentences.push_back(MakeSentence(
      "g2", "a b c d e f g h i j k l",
      {Rel(S(0, 3, Role::kCause), S(5, 8, Role::kEffect),
           S(3, 5, Role::kSignal))}));
  // g3 is not causal in gold; its prediction is ignored.
  p.sentences.push_back(MakeSentence(
      "g3", "nothing here", {Rel(S(0, 1, Role::kCause), S(1, 2, Role::kEffect))}));

  auto fair = Evaluate(g, p, EvalMode::kFair);
  for (int r = 0; r < kNumRoles; ++r) {
    const RoleCounts& c = fair.overall.counts.roles[r];
    EXPECT_EQ(c.tp, 1);
    EXPECT_EQ(c.be, 1);
    EXPECT_EQ(c.fp, 1);
    EXPECT_EQ(c.fn, 0);
    EXPECT_EQ(c.le_gold + c.le_pred + c.lbe_gold + c.lbe_pred, 0);
    EXPECT_DOUBLE_EQ(fair.overall.roles[r].precision, 0.5);
    EXPECT_DOUBLE_EQ(fair.overall.roles[r].recall, 0.75);
    EXPECT_DOUBLE_EQ(fair.overall.roles[r].f1, 0.6);
  }
  EXPECT_DOUBLE_EQ(fair.overall.macro.f1, 0.6);
  auto strict = Evaluate(g, p, EvalMode::kStrict);
  EXPECT_DOUBLE_EQ(strict.overall.roles[0].precision, 1.0 / 3);
  EXPECT_DOUBLE_EQ(strict.overall.roles[0].recall, 0.5);
  EXPECT_DOUBLE_EQ(strict.overall.roles[0].f1, 0.4);
  ASSERT_EQ(fair.breakdown.count("1"), 1u);
  EXPECT_EQ(fair.breakdown.at("1").sentences, 2u);
  EXPECT_EQ(fair.skipped, 1u);
}

TEST(EvaluateTest, EmptyAndMissingPredictions) {
  Corpus g = Gold();
  Corpus p;
  p.sentences.push_back(MakeSentence("g1", "a b c d e f g h i j k l", {}));
  auto r = Evaluate(g, p, EvalMode::kFair);
  for (const Prf& x : r.overall.roles) EXPECT_EQ(x.recall, 0.0);
  EXPECT_EQ(r.missing_predictions, (std::vector<std::string>{"g2"}));
  Corpus bad;
  bad.sentences.push_back(MakeSentence("zz", "x", {}));
  EXPECT_THROW(Evaluate(g, bad, EvalMode::kFair), ConsistencyError);
}

TEST(EvaluateTest, BreakdownBuckets) {
  std::mt19937_64 rng(2);
  Corpus g;
  for (int n = 1; n <= 4; ++n) {
    g.sentences.push_back(RandomSentence(rng, 12, n, "b" + std::to_string(n)));
  }
  auto r = Evaluate(g, g, EvalMode::kFair);
  EXPECT_EQ(r.breakdown.at("1").sentences, 1u);
  EXPECT_EQ(r.breakdown.at("2").sentences, 1u);
  EXPECT_EQ(r.breakdown.at("3+").sentences, 2u);
  auto j = ReportToJson(r);
  EXPECT_EQ(j["mode"], "fair");
  EXPECT_FALSE(FormatReport(r).empty());
}

TEST(EvaluateTest, RandomCorporaProperties) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    Corpus g, p;
    for (int i = 0; i < 5; ++i) {
      std::string id = "r" + std::to_string(i);
      std::size_t len = 6 + rng() % 8;
      Sentence gs = RandomSentence(rng, len, 1 + rng() % 3, id);
      Sentence ps = RandomSentence(rng, len, rng() % 3, id);
      ps.text = gs.text;
      ps.tokens = gs.tokens;
      g.sentences.push_back(gs);
      p.sentences.push_back(ps);
    }
    auto fair = Evaluate(g, p, EvalMode::kFair);
    auto strict = Evaluate(g, p, EvalMode::kStrict);
    for (int r = 0; r < kNumRoles; ++r) {
      EXPECT_GE(fair.overall.roles[r].f1, strict.overall.roles[r].f1);
    }
    // A spurious span in a fresh sentence region cannot raise precision.
    Corpus more = p;
    Sentence& s = more.sentences[0];
    std::size_t n = s.tokens.size();
    s.text += " x y";
    s.tokens = Tokenize(s.text);
    s.relations.push_back(
        Rel(S(n, n + 1, Role::kCause), S(n + 1, n + 2, Role::kEffect)));
    Corpus g_ext = g;
    g_ext.sentences[0].text = s.text;
    g_ext.sentences[0].tokens = s.tokens;
    auto after = Evaluate(g_ext, more, EvalMode::kFair);
    for (int r = 0; r < kNumRoles; ++r) {
      EXPECT_LE(after.overall.roles[r].precision,
                fair.overall.roles[r].precision + 1e-12);
    }
  }
}

}  // namespace
}  // namespace causal
