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

#include "causal/dense_store.h"

#include <algorithm>
#include <bit>
#include <cstring>

#include "causal/errors.h"
#include "causal/text.h"

namespace causal {

void DenseStore::Add(const std::string& id, std::vector<float> values) {
  if (dimension_ == 0 ? !values.empty() : values.size() % dimension_ != 0) {
    throw DimensionMismatch("record '" + id + "' has " +
                            std::to_string(values.size()) +
                            " values for dimension " +
                            std::to_string(dimension_));
  }
  if (records_.count(id)) throw FormatError("duplicate record id '" + id + "'");
  records_.emplace(id, std::move(values));
  order_.push_back(id);
}

std::size_t DenseStore::TokenCount(const std::string& id) const {
  auto it = records_.find(id);
  if (it == records_.end() || dimension_ == 0) return 0;
  return it->second.size() / dimension_;
}

std::span<const float> DenseStore::Vector(const std::string& id,
                                          std::size_t index) const {
  auto it = records_.find(id);
  if (it == records_.end() || index >= TokenCount(id)) {
    throw IndexOutOfRange("no vector " + std::to_string(index) + " for '" +
                          id + "'");
  }
  return {it->second.data() + index * dimension_, dimension_};
}

void DenseStore::Attach(const std::string& id,
                        std::vector<FeatureVector>& features) const {
  auto it = records_.find(id);
  if (it == records_.end()) {
    for (FeatureVector& f : features) f.dense.assign(dimension_, 0.0f);
    return;
  }
  if (TokenCount(id) != features.size()) {
    throw DimensionMismatch("sentence '" + id + "' has " +
                            std::to_string(features.size()) +
                            " tokens, embedding record has " +
                            std::to_string(TokenCount(id)));
  }
  for (std::size_t t = 0; t < features.size(); ++t) {
    auto v = Vector(id, t);
    features[t].dense.assign(v.begin(), v.end());
  }
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  bool done() const { return pos_ == bytes_.size(); }

  std::string_view Take(std::size_t n, const char* what) {
    if (bytes_.size() - pos_ < n) {
      throw TruncatedFile(std::string("file ends inside ") + what +
                          " at byte " + std::to_string(pos_));
    }
    std::string_view out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  std::uint32_t U32(const char* what) {
    std::string_view b = Take(4, what);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) {
      v = (v << 8) | static_cast<unsigned char>(b[i]);
    }
    return v;
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
}

}  // namespace

DenseStore ParseDenseStore(std::string_view bytes) {
  Reader in(bytes);
  constexpr std::string_view kMagic = "CNCE";
  if (bytes.size() < kMagic.size() &&
      kMagic.substr(0, bytes.size()) == bytes) {
    throw TruncatedFile("file ends inside the magic number");
  }
  if (bytes.substr(0, std::min(bytes.size(), kMagic.size())) != kMagic) {
    throw FormatError("bad magic, expected CNCE");
  }
  in.Take(4, "magic");
  std::uint32_t version = in.U32("header");
  if (version != kDenseStoreVersion) {
    throw FormatError("unsupported version " + std::to_string(version));
  }
  std::uint32_t dim = in.U32("header");
  DenseStore store(dim);
  while (!in.done()) {
    std::uint32_t id_len = in.U32("record id length");
    std::string id(in.Take(id_len, "record id"));
    std::uint32_t tokens = in.U32("token count");
    std::size_t count = static_cast<std::size_t>(tokens) * dim;
    std::string_view raw = in.Take(count * 4, "vector data");
    std::vector<float> values(count);
    for (std::size_t i = 0; i < count; ++i) {
      std::uint32_t bits = 0;
      for (int b = 3; b >= 0; --b) {
        bits = (bits << 8) | static_cast<unsigned char>(raw[i * 4 + b]);
      }
      values[i] = std::bit_cast<float>(bits);
    }
    if (dim == 0 && tokens != 0) {
      throw DimensionMismatch("record '" + id + "' has tokens but dimension 0");
    }
    store.Add(id, std::move(values));
  }
  return store;
}

DenseStore LoadDenseStore(const std::string& path) {
  return ParseDenseStore(ReadFile(path));
}

std::string SerializeDenseStore(const DenseStore& store) {
  std::string out = "CNCE";
  PutU32(out, kDenseStoreVersion);
  PutU32(out, store.dimension());
  for (const std::string& id : store.ids()) {
    PutU32(out, static_cast<std::uint32_t>(id.size()));
    out += id;
    std::size_t tokens = store.TokenCount(id);
    PutU32(out, static_cast<std::uint32_t>(tokens));
    for (std::size_t t = 0; t < tokens; ++t) {
      for (float v : store.Vector(id, t)) PutU32(out, std::bit_cast<std::uint32_t>(v));
    }
  }
  return out;
}

void WriteDenseStore(const DenseStore& store, const std::string& path) {
  WriteFile(path, SerializeDenseStore(store));
}

}  // namespace causal
