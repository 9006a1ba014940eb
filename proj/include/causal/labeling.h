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

#ifndef CAUSAL_LABELING_H_
#define CAUSAL_LABELING_H_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "causal/corpus.h"

namespace causal {

enum class Bilou { kO, kB, kI, kL, kU };

// One BILOU tag of a single layer. The role is ignored for kO.
struct LayerTag {
  Bilou prefix = Bilou::kO;
  Role role = Role::kCause;

  static LayerTag Outside() { return {}; }
  bool IsOutside() const { return prefix == Bilou::kO; }
  std::string ToString() const;
  // Parses "O", "B-ARG0", ..., "U-SIG0".
  static std::optional<LayerTag> Parse(std::string_view text);

  bool operator==(const LayerTag& o) const {
    return prefix == o.prefix && (prefix == Bilou::kO || role == o.role);
  }
};

// The 13 distinct layer tags: O, then B/I/L/U for ARG0, ARG1, SIG0.
std::vector<LayerTag> AllLayerTags();

inline constexpr std::size_t kNumLayers = 3;

struct StackedTag {
  std::array<LayerTag, kNumLayers> layers;

  // "X|Y|Z"
  std::string ToString() const;
  static std::optional<StackedTag> Parse(std::string_view text);
  bool operator==(const StackedTag&) const = default;
};

using LayerSequence = std::vector<LayerTag>;
using StackedTagSequence = std::vector<StackedTag>;

// Tags one relation over `num_tokens` tokens. Throws OverlapError when two of
// its spans share a token and IndexOutOfRange when a span leaves the sentence.
LayerSequence EncodeRelation(std::size_t num_tokens,
                             const CausalRelation& relation);

// Canonical layer order: cause start, effect start, signal start (absent
// last), then input position.
std::vector<CausalRelation> CanonicalOrder(
    const std::vector<CausalRelation>& relations);

// Layer k encodes relation k; missing layers are all O. The relations must be
// given in canonical order. Throws TooManyRelations above three.
StackedTagSequence StackLayers(std::size_t num_tokens,
                               const std::vector<CausalRelation>& relations);

// Tags for the sentence's relations in canonical order (at most three).
StackedTagSequence StackSentence(const Sentence& sentence);

// True iff the layer matches O* ((B-x I-x* L-x | U-x) O*)*.
bool IsValidLayer(const LayerSequence& tags);

// Smallest edit towards a grammatical layer; idempotent.
LayerSequence RepairLayer(const LayerSequence& tags);

LayerSequence ExtractLayer(const StackedTagSequence& tags, std::size_t layer);

struct DecodeReport {
  // Layers that had spans but no cause/effect pair.
  std::vector<std::size_t> dropped_layers;
  // Layers skipped because they violated the BILOU grammar.
  std::vector<std::size_t> invalid_layers;
};

// One relation per layer holding at least one cause and one effect span;
// the first span of each role is used.
std::vector<CausalRelation> DecodeStacked(const StackedTagSequence& tags,
                                          DecodeReport* report = nullptr);

struct TruncationResult {
  Sentence sentence;
  std::vector<std::string> warnings;
};

// Canonically orders the relations and keeps the first three.
TruncationResult TruncateRelations(const Sentence& sentence);

// Sorted unique stacked-tag strings; "O|O|O" is always present.
class LabelVocabulary {
 public:
  LabelVocabulary();
  explicit LabelVocabulary(std::vector<std::string> labels);

  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  std::optional<int> Find(std::string_view label) const;
  const std::string& Label(int id) const { return labels_.at(id); }
  StackedTag Tag(int id) const { return tags_.at(id); }

 private:
  std::vector<std::string> labels_;
  std::vector<StackedTag> tags_;
  std::map<std::string, int, std::less<>> index_;
};

// Encodes every sentence (after truncation) and collects the observed tags.
LabelVocabulary BuildVocabulary(const std::vector<const Corpus*>& corpora);

}  // namespace causal

#endif  // CAUSAL_LABELING_H_
