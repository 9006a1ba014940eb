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

#ifndef CAUSAL_DENSE_STORE_H_
#define CAUSAL_DENSE_STORE_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "causal/features.h"

namespace causal {

// Per-token embeddings in the "CNCE" layout, all little-endian:
//   "CNCE" | u32 version (1) | u32 dimension |
//   per record: u32 id length | id bytes | u32 token count |
//               token count * dimension float32
inline constexpr std::uint32_t kDenseStoreVersion = 1;

class DenseStore {
 public:
  DenseStore() = default;
  explicit DenseStore(std::uint32_t dimension) : dimension_(dimension) {}

  std::uint32_t dimension() const { return dimension_; }
  std::size_t size() const { return records_.size(); }
  bool Contains(const std::string& id) const { return records_.count(id) > 0; }

  // Throws DimensionMismatch when `values` is not a multiple of the
  // dimension and FormatError on duplicate ids.
  void Add(const std::string& id, std::vector<float> values);

  std::size_t TokenCount(const std::string& id) const;
  // Vector of token `index` of sentence `id`.
  std::span<const float> Vector(const std::string& id, std::size_t index) const;

  // Record ids in file order.
  const std::vector<std::string>& ids() const { return order_; }

  // Copies the sentence's vectors into `features[t].dense`. Missing
  // sentences get zero vectors; a token count mismatch throws
  // DimensionMismatch.
  void Attach(const std::string& id, std::vector<FeatureVector>& features) const;

 private:
  std::uint32_t dimension_ = 0;
  std::map<std::string, std::vector<float>> records_;
  std::vector<std::string> order_;
};

// Throws IoError, FormatError (bad magic or version), TruncatedFile.
DenseStore LoadDenseStore(const std::string& path);
DenseStore ParseDenseStore(std::string_view bytes);

std::string SerializeDenseStore(const DenseStore& store);
void WriteDenseStore(const DenseStore& store, const std::string& path);

}  // namespace causal

#endif  // CAUSAL_DENSE_STORE_H_
