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

#ifndef CAUSAL_FEATURES_H_
#define CAUSAL_FEATURES_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "causal/corpus.h"

namespace causal {

// Binary sparse features plus an optional dense block for one token.
struct FeatureVector {
  std::vector<int> indices;  // strictly increasing
  std::vector<float> dense;  // empty when the dense channel is off
};

// X for upper case, x for lower case, d for digits, other characters kept.
// Non-ASCII letters map to 'x'.
std::string WordShape(std::string_view word);

// Shape with runs of the same class collapsed ("Xxxxx" -> "Xx").
std::string ShortWordShape(std::string_view word);

// Template strings for the token at `position`: identity, lowercase form,
// prefixes and suffixes up to length 3, shapes, boundary flags, context
// words in a +-2 window and the two adjacent bigrams.
std::vector<std::string> ExtractFeatureStrings(const std::vector<Token>& tokens,
                                               std::size_t position);

// Template string -> feature id. Grows until frozen.
class FeatureMap {
 public:
  // Returns the id, allocating one unless frozen; -1 for unknown templates
  // after freezing.
  int Lookup(const std::string& feature);
  int Find(const std::string& feature) const;

  void Freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  // Restores a frozen map from ids in order.
  static FeatureMap FromNames(std::vector<std::string> names);

  FeatureVector Vectorize(const std::vector<std::string>& features);
  FeatureVector Vectorize(const std::vector<std::string>& features) const;

 private:
  std::unordered_map<std::string, int> ids_;
  std::vector<std::string> names_;
  bool frozen_ = false;
};

}  // namespace causal

#endif  // CAUSAL_FEATURES_H_
