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

#include "causal/eval.h"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <set>
#include <sstream>
#include <unordered_map>

#include "causal/errors.h"

namespace causal {

std::vector<PooledSpan> PoolSpans(
    const std::vector<CausalRelation>& relations) {
  std::set<PooledSpan> pooled;
  auto add = [&](const Span& s) {
    pooled.insert(PooledSpan{s.role, s.start_tok, s.end_tok});
  };
  for (const CausalRelation& r : relations) {
    add(r.cause);
    add(r.effect);
    if (r.signal) add(*r.signal);
  }
  return {pooled.begin(), pooled.end()};
}

const char* MatchCategoryName(MatchCategory category) {
  switch (category) {
    case MatchCategory::kTP:
      return "TP";
    case MatchCategory::kLE:
      return "LE";
    case MatchCategory::kBE:
      return "BE";
    case MatchCategory::kLBE:
      return "LBE";
    case MatchCategory::kNoMatch:
      return "NoMatch";
  }
  return "?";
}

MatchCategory ClassifyMatch(const PooledSpan& gold, const PooledSpan& pred) {
  bool same_role = gold.role == pred.role;
  if (gold.start == pred.start && gold.end == pred.end) {
    return same_role ? MatchCategory::kTP : MatchCategory::kLE;
  }
  if (gold.start < pred.end && pred.start < gold.end) {
    return same_role ? MatchCategory::kBE : MatchCategory::kLBE;
  }
  return MatchCategory::kNoMatch;
}

namespace {

// Lexicographic (TP, LE, BE, LBE) packed into one integer; counts stay below
// the radix because at most kExactMatchLimit pairs exist.
std::int64_t CategoryWeight(MatchCategory c) {
  constexpr std::int64_t kRadix = kExactMatchLimit + 1;
  switch (c) {
    case MatchCategory::kTP:
      return kRadix * kRadix * kRadix;
    case MatchCategory::kLE:
      return kRadix * kRadix;
    case MatchCategory::kBE:
      return kRadix;
    case MatchCategory::kLBE:
      return 1;
    case MatchCategory::kNoMatch:
      return 0;
  }
  return 0;
}

// DP over subsets of the smaller side, which has at most 8 elements when
// the product of the sizes is at most 64.
std::vector<MatchedPair> ExactMatch(const std::vector<PooledSpan>& gold,
                                    const std::vector<PooledSpan>& pred) {
  const bool gold_rows = gold.size() >= pred.size();
  const std::size_t rows = gold_rows ? gold.size() : pred.size();
  const std::size_t cols = gold_rows ? pred.size() : gold.size();
  auto category = [&](std::size_t r, std::size_t c) {
    return gold_rows ? ClassifyMatch(gold[r], pred[c])
                     : ClassifyMatch(gold[c], pred[r]);
  };
  const std::size_t masks = std::size_t{1} << cols;
  // best[r][mask]: best weight using rows [r, rows) with `mask` cols taken.
  std::vector<std::vector<std::int64_t>> best(
      rows + 1, std::vector<std::int64_t>(masks, 0));
  for (std::size_t r = rows; r-- > 0;) {
    for (std::size_t mask = 0; mask < masks; ++mask) {
      std::int64_t v = best[r + 1][mask];
      for (std::size_t c = 0; c < cols; ++c) {
        if (mask & (std::size_t{1} << c)) continue;
        MatchCategory cat = category(r, c);
        if (cat == MatchCategory::kNoMatch) continue;
        v = std::max(v, CategoryWeight(cat) +
                            best[r + 1][mask | (std::size_t{1} << c)]);
      }
      best[r][mask] = v;
    }
  }
  std::vector<MatchedPair> pairs;
  std::size_t mask = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    if (best[r][mask] == best[r + 1][mask]) continue;
    for (std::size_t c = 0; c < cols; ++c) {
      if (mask & (std::size_t{1} << c)) continue;
      MatchCategory cat = category(r, c);
      if (cat == MatchCategory::kNoMatch) continue;
      if (CategoryWeight(cat) + best[r + 1][mask | (std::size_t{1} << c)] ==
          best[r][mask]) {
        mask |= std::size_t{1} << c;
        pairs.push_back(gold_rows ? MatchedPair{r, c, cat}
                                  : MatchedPair{c, r, cat});
        break;
      }
    }
  }
  return pairs;
}

std::vector<MatchedPair> GreedyMatch(const std::vector<PooledSpan>& gold,
                                     const std::vector<PooledSpan>& pred) {
  std::vector<MatchedPair> pairs;
  std::vector<bool> gold_used(gold.size());
  std::vector<bool> pred_used(pred.size());
  for (MatchCategory cat : {MatchCategory::kTP, MatchCategory::kLE,
                            MatchCategory::kBE, MatchCategory::kLBE}) {
    for (std::size_t g = 0; g < gold.size(); ++g) {
      if (gold_used[g]) continue;
      for (std::size_t p = 0; p < pred.size(); ++p) {
        if (pred_used[p] || ClassifyMatch(gold[g], pred[p]) != cat) continue;
        gold_used[g] = pred_used[p] = true;
        pairs.push_back({g, p, cat});
        break;
      }
    }
  }
  return pairs;
}

}  // namespace

SentenceMatch MatchSentence(const std::vector<PooledSpan>& gold,
                            const std::vector<PooledSpan>& pred) {
  SentenceMatch out;
  out.pairs = gold.size() * pred.size() <= kExactMatchLimit
                  ? ExactMatch(gold, pred)
                  : GreedyMatch(gold, pred);
  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const MatchedPair& a, const MatchedPair& b) {
              return a.gold < b.gold;
            });
  std::vector<bool> gold_used(gold.size());
  std::vector<bool> pred_used(pred.size());
  for (const MatchedPair& p : out.pairs) {
    gold_used[p.gold] = true;
    pred_used[p.pred] = true;
  }
  for (std::size_t g = 0; g < gold.size(); ++g) {
    if (!gold_used[g]) out.unmatched_gold.push_back(g);
  }
  for (std::size_t p = 0; p < pred.size(); ++p) {
    if (!pred_used[p]) out.unmatched_pred.push_back(p);
  }
  return out;
}

RoleCounts& RoleCounts::operator+=(const RoleCounts& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  be += o.be;
  le_pred += o.le_pred;
  le_gold += o.le_gold;
  lbe_pred += o.lbe_pred;
  lbe_gold += o.lbe_gold;
  return *this;
}

void ErrorCounts::Add(const SentenceMatch& match,
                      const std::vector<PooledSpan>& gold,
                      const std::vector<PooledSpan>& pred) {
  for (const MatchedPair& p : match.pairs) {
    RoleCounts& g = (*this)[gold[p.gold].role];
    RoleCounts& q = (*this)[pred[p.pred].role];
    switch (p.category) {
      case MatchCategory::kTP:
        ++g.tp;
        break;
      case MatchCategory::kBE:
        ++g.be;
        break;
      case MatchCategory::kLE:
        ++g.le_gold;
        ++q.le_pred;
        break;
      case MatchCategory::kLBE:
        ++g.lbe_gold;
        ++q.lbe_pred;
        break;
      case MatchCategory::kNoMatch:
        break;
    }
  }
  for (std::size_t g : match.unmatched_gold) ++(*this)[gold[g].role].fn;
  for (std::size_t p : match.unmatched_pred) ++(*this)[pred[p].role].fp;
}

ErrorCounts& ErrorCounts::operator+=(const ErrorCounts& o) {
  for (int r = 0; r < kNumRoles; ++r) roles[r] += o.roles[r];
  return *this;
}

namespace {

Prf MakePrf(double correct, double pred_total, double gold_total) {
  Prf out;
  out.precision = pred_total > 0 ? correct / pred_total : 0.0;
  out.recall = gold_total > 0 ? correct / gold_total : 0.0;
  double sum = out.precision + out.recall;
  out.f1 = sum > 0 ? 2.0 * out.precision * out.recall / sum : 0.0;
  return out;
}

}  // namespace

RoleScores FairScores(const ErrorCounts& counts) {
  RoleScores out;
  for (int r = 0; r < kNumRoles; ++r) {
    const RoleCounts& c = counts.roles[r];
    out[r] = MakePrf(c.tp + 0.5 * c.be, static_cast<double>(c.PredTotal()),
                     static_cast<double>(c.GoldTotal()));
  }
  return out;
}

RoleScores StrictScores(const ErrorCounts& counts) {
  RoleScores out;
  for (int r = 0; r < kNumRoles; ++r) {
    const RoleCounts& c = counts.roles[r];
    out[r] = MakePrf(static_cast<double>(c.tp),
                     static_cast<double>(c.PredTotal()),
                     static_cast<double>(c.GoldTotal()));
  }
  return out;
}

const char* EvalModeName(EvalMode mode) {
  return mode == EvalMode::kFair ? "fair" : "strict";
}

ScoreBlock Summarize(const ErrorCounts& counts, EvalMode mode) {
  ScoreBlock block;
  block.counts = counts;
  block.roles = mode == EvalMode::kFair ? FairScores(counts)
                                        : StrictScores(counts);
  int present = 0;
  for (int r = 0; r < kNumRoles; ++r) {
    const RoleCounts& c = counts.roles[r];
    if (c.GoldTotal() == 0 && c.PredTotal() == 0) continue;
    ++present;
    block.macro.precision += block.roles[r].precision;
    block.macro.recall += block.roles[r].recall;
    block.macro.f1 += block.roles[r].f1;
  }
  if (present > 0) {
    block.macro.precision /= present;
    block.macro.recall /= present;
    block.macro.f1 /= present;
  }
  return block;
}

EvalReport Evaluate(const Corpus& gold, const Corpus& pred, EvalMode mode) {
  std::unordered_map<std::string, const Sentence*> gold_by_id;
  for (const Sentence& s : gold.sentences) gold_by_id.emplace(s.id, &s);
  std::unordered_map<std::string, const Sentence*> pred_by_id;
  for (const Sentence& s : pred.sentences) {
    if (!gold_by_id.count(s.id)) {
      throw ConsistencyError("prediction id '" + s.id + "' not in gold");
    }
    pred_by_id.emplace(s.id, &s);
  }

  EvalReport report;
  report.mode = mode;
  ErrorCounts total;
  std::map<std::string, ErrorCounts> bucket_counts;
  std::map<std::string, std::size_t> bucket_sizes;
  static const std::vector<CausalRelation> kNone;
  for (const Sentence& g : gold.sentences) {
    if (g.relations.empty()) {
      ++report.skipped;
      continue;
    }
    ++report.evaluated;
    auto it = pred_by_id.find(g.id);
    if (it == pred_by_id.end()) report.missing_predictions.push_back(g.id);
    const auto& pred_relations =
        it == pred_by_id.end() ? kNone : it->second->relations;
    std::vector<PooledSpan> gold_spans = PoolSpans(g.relations);
    std::vector<PooledSpan> pred_spans = PoolSpans(pred_relations);
    ErrorCounts counts;
    counts.Add(MatchSentence(gold_spans, pred_spans), gold_spans, pred_spans);
    total += counts;
    std::string key =
        g.relations.size() >= 3 ? "3+" : std::to_string(g.relations.size());
    bucket_counts[key] += counts;
    ++bucket_sizes[key];
  }
  report.overall = Summarize(total, mode);
  report.overall.sentences = report.evaluated;
  for (const auto& [key, counts] : bucket_counts) {
    ScoreBlock block = Summarize(counts, mode);
    block.sentences = bucket_sizes[key];
    report.breakdown.emplace(key, block);
  }
  return report;
}

namespace {

nlohmann::ordered_json BlockToJson(const ScoreBlock& block) {
  nlohmann::ordered_json j;
  j["sentences"] = block.sentences;
  for (int r = 0; r < kNumRoles; ++r) {
    const RoleCounts& c = block.counts.roles[r];
    const Prf& s = block.roles[r];
    nlohmann::ordered_json role;
    role["precision"] = s.precision;
    role["recall"] = s.recall;
    role["f1"] = s.f1;
    role["TP"] = c.tp;
    role["FP"] = c.fp;
    role["FN"] = c.fn;
    role["BE"] = c.be;
    role["LE_pred"] = c.le_pred;
    role["LE_gold"] = c.le_gold;
    role["LBE_pred"] = c.lbe_pred;
    role["LBE_gold"] = c.lbe_gold;
    j[std::string(RoleName(static_cast<Role>(r)))] = role;
  }
  j["macro"] = {{"precision", block.macro.precision},
                {"recall", block.macro.recall},
                {"f1", block.macro.f1}};
  return j;
}

std::string Percent(double v) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%6.1f", 100.0 * v);
  return buf;
}

void AppendRows(std::ostringstream& out, const std::string& title,
                const ScoreBlock& block) {
  auto line = [&](const std::string& name, const Prf& s) {
    char label[32];
    std::snprintf(label, sizeof(label), "%-14s", name.c_str());
    out << label << Percent(s.precision) << Percent(s.recall) << Percent(s.f1)
        << '\n';
  };
  out << title << " (" << block.sentences << " sentences)\n";
  for (int r = 0; r < kNumRoles; ++r) {
    std::string name = "  " + std::string(RoleName(static_cast<Role>(r)));
    const RoleCounts& c = block.counts.roles[r];
    if (c.GoldTotal() == 0 && c.PredTotal() == 0) {
      char label[32];
      std::snprintf(label, sizeof(label), "%-14s", name.c_str());
      out << label << "     -     -     -\n";
      continue;
    }
    line(name, block.roles[r]);
  }
  line("  avg", block.macro);
}

}  // namespace

nlohmann::ordered_json ReportToJson(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["mode"] = EvalModeName(report.mode);
  j["evaluated"] = report.evaluated;
  j["skipped"] = report.skipped;
  j["missing_predictions"] = report.missing_predictions;
  j["overall"] = BlockToJson(report.overall);
  nlohmann::ordered_json breakdown = nlohmann::ordered_json::object();
  for (const auto& [key, block] : report.breakdown) {
    breakdown[key] = BlockToJson(block);
  }
  j["by_relation_count"] = breakdown;
  return j;
}

std::string FormatReport(const EvalReport& report) {
  std::ostringstream out;
  out << "mode: " << EvalModeName(report.mode) << "  evaluated: "
      << report.evaluated << "  skipped: " << report.skipped << '\n';
  out << "                   P      R     F1\n";
  AppendRows(out, "all", report.overall);
  for (const auto& [key, block] : report.breakdown) {
    AppendRows(out, "relations=" + key, block);
  }
  if (!report.missing_predictions.empty()) {
    out << report.missing_predictions.size()
        << " gold-causal sentence(s) without prediction, scored as FN\n";
  }
  return out.str();
}

}  // namespace causal
