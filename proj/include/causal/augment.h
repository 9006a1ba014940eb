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

#ifndef CAUSAL_AUGMENT_H_
#define CAUSAL_AUGMENT_H_

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "causal/corpus.h"

namespace causal {

using Rng = std::mt19937_64;

// Independent stream for item `index` of a run seeded with `seed`.
Rng DerivedRng(std::uint64_t seed, std::uint64_t index);

// Lowercased word -> synonyms, in file order.
class SynonymLexicon {
 public:
  // Throws FormatError for a self-mapping or an empty synonym list.
  void Add(const std::string& word, std::vector<std::string> synonyms);
  const std::vector<std::string>* Find(const std::string& lowercased) const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  // `word<TAB>syn1,syn2,...` per line.
  static SynonymLexicon ParseTsv(std::string_view content);
  static SynonymLexicon LoadTsv(const std::string& path);

 private:
  std::map<std::string, std::vector<std::string>> entries_;
};

using StopwordList = std::unordered_set<std::string>;

// The English stopword list of the reference EDA implementation.
const StopwordList& DefaultStopwords();
// One word per line; throws FormatError when the list is empty.
StopwordList LoadStopwords(const std::string& path);

struct EdaConfig {
  double alpha_sr = 0.4;
  double alpha_ri = 0.1;
  double alpha_rs = 0.6;
  double p_rd = 0.0;
  int n_aug = 4;
  std::uint64_t seed = 13;

  void Validate() const;
};

// Defaults for sentence classification data.
EdaConfig St1EdaDefaults();
// Defaults for span data: synonym replacement 0.4, random insertion 0.5.
EdaConfig St2EdaDefaults();

// Tag markers (<ARG0> etc.) in the token lists below are never replaced,
// moved or deleted.
using Words = std::vector<std::string>;

Words EdaSynonymReplacement(const Words& words, double alpha,
                            const SynonymLexicon& lexicon,
                            const StopwordList& stopwords, Rng& rng);
Words EdaRandomInsertion(const Words& words, double alpha,
                         const SynonymLexicon& lexicon,
                         const StopwordList& stopwords, Rng& rng);
Words EdaRandomSwap(const Words& words, double alpha, Rng& rng);
Words EdaRandomDeletion(const Words& words, double p, Rng& rng);

// Tag markers as separate entries, text between them tokenized.
Words SplitTagged(std::string_view tagged);
// Space-joined, with opening markers glued to the next word and closing
// markers glued to the previous one.
std::string JoinTagged(const Words& words);

// Each original followed by n_aug variants (synonym replacement, random
// insertion, random swap, in that order). Variants keep is_causal and carry
// no span annotation.
Corpus AugmentSt1(const Corpus& corpus, const EdaConfig& config,
                  const SynonymLexicon& lexicon,
                  const StopwordList& stopwords = DefaultStopwords());

struct St2AugmentResult {
  Corpus corpus;
  std::size_t added = 0;
  std::size_t discarded = 0;
};

// One variant per single-relation sentence built on the tagged string with
// synonym replacement then random insertion. Variants whose markers change
// or that no longer parse are discarded.
St2AugmentResult AugmentSt2(const Corpus& corpus, const EdaConfig& config,
                            const SynonymLexicon& lexicon,
                            const StopwordList& stopwords = DefaultStopwords());

// Appends n draws (with replacement) from the sentences holding two or more
// relations. Throws NoMultiRelationInstances when n > 0 and there are none.
Corpus OversampleMultiRelation(const Corpus& corpus, std::size_t n, Rng& rng);

struct SlotLexicons {
  std::vector<std::string> cause_phrases;
  std::vector<std::string> effect_phrases;
  std::vector<std::string> signals_forward;   // cause SIGNAL effect
  std::vector<std::string> signals_backward;  // effect SIGNAL cause

  static SlotLexicons ParseJson(std::string_view content);
  static SlotLexicons LoadJson(const std::string& path);
};

// n single-relation sentences alternating cause-signal-effect and
// effect-signal-cause. Throws EmptyLexicon.
Corpus SynthTemplates(std::size_t n, const SlotLexicons& slots, Rng& rng);

}  // namespace causal

#endif  // CAUSAL_AUGMENT_H_
