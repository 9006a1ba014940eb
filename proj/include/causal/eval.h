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

#ifndef CAUSAL_EVAL_H_
#define CAUSAL_EVAL_H_

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "causal/corpus.h"
#include "json.hpp"

namespace causal {

struct PooledSpan {
  Role role = Role::kCause;
  std::size_t start = 0;
  std::size_t end = 0;
  auto operator<=>(const PooledSpan&) const = default;
};

// All spans of all relations, deduplicated, ordered by (role, start, end).
std::vector<PooledSpan> PoolSpans(const std::vector<CausalRelation>& relations);

enum class MatchCategory { kTP, kLE, kBE, kLBE, kNoMatch };

const char* MatchCategoryName(MatchCategory category);

MatchCategory ClassifyMatch(const PooledSpan& gold, const PooledSpan& pred);

struct MatchedPair {
  std::size_t gold = 0;
  std::size_t pred = 0;
  MatchCategory category = MatchCategory::kNoMatch;
};

struct SentenceMatch {
  std::vector<MatchedPair> pairs;
  std::vector<std::size_t> unmatched_gold;  // FN
  std::vector<std::size_t> unmatched_pred;  // FP
};

// Largest |gold| * |pred| solved exactly; above it matching is greedy.
inline constexpr std::size_t kExactMatchLimit = 64;

// One-to-one matching maximizing (TP, LE, BE, LBE) lexicographically.
SentenceMatch MatchSentence(const std::vector<PooledSpan>& gold,
                            const std::vector<PooledSpan>& pred);

struct RoleCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  long be = 0;
  long le_pred = 0;
  long le_gold = 0;
  long lbe_pred = 0;
  long lbe_gold = 0;

  long GoldTotal() const { return tp + be + le_gold + lbe_gold + fn; }
  long PredTotal() const { return tp + be + le_pred + lbe_pred + fp; }
  RoleCounts& operator+=(const RoleCounts& o);
  bool operator==(const RoleCounts&) const = default;
};

struct ErrorCounts {
  std::array<RoleCounts, kNumRoles> roles;

  RoleCounts& operator[](Role r) { return roles[static_cast<int>(r)]; }
  const RoleCounts& operator[](Role r) const {
    return roles[static_cast<int>(r)];
  }
  void Add(const SentenceMatch& match, const std::vector<PooledSpan>& gold,
           const std::vector<PooledSpan>& pred);
  ErrorCounts& operator+=(const ErrorCounts& o);
};

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

using RoleScores = std::array<Prf, kNumRoles>;

// Boundary errors earn half credit; label errors earn none.
RoleScores FairScores(const ErrorCounts& counts);
// Only exact (role, range) matches are correct.
RoleScores StrictScores(const ErrorCounts& counts);

enum class EvalMode { kFair, kStrict };

const char* EvalModeName(EvalMode mode);

struct ScoreBlock {
  RoleScores roles;
  // Mean over roles that have at least one gold or predicted span.
  Prf macro;
  ErrorCounts counts;
  std::size_t sentences = 0;
};

struct EvalReport {
  EvalMode mode = EvalMode::kFair;
  ScoreBlock overall;
  // Keyed by gold relation count: "1", "2", "3+".
  std::map<std::string, ScoreBlock> breakdown;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  // Gold-causal sentences without a prediction record; scored as all FN.
  std::vector<std::string> missing_predictions;
};

ScoreBlock Summarize(const ErrorCounts& counts, EvalMode mode);

// Scores `pred` against the gold-causal sentences of `gold`. Throws
// ConsistencyError when a prediction id is not in the gold corpus.
EvalReport Evaluate(const Corpus& gold, const Corpus& pred, EvalMode mode);

nlohmann::ordered_json ReportToJson(const EvalReport& report);
std::string FormatReport(const EvalReport& report);

}  // namespace causal

#endif  // CAUSAL_EVAL_H_
