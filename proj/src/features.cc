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

#include "causal/features.h"

#include <algorithm>

#include "causal/text.h"

namespace causal {

namespace {

char ShapeClass(unsigned char c) {
  if (c >= 'A' && c <= 'Z') return 'X';
  if (c >= 'a' && c <= 'z') return 'x';
  if (c >= '0' && c <= '9') return 'd';
  return static_cast<char>(c);
}

// Shape over code points so multi-byte letters stay one symbol.
std::string Shape(std::string_view word, bool collapse) {
  std::string out;
  for (std::size_t pos = 0; pos < word.size();) {
    CodePoint cp = DecodeUtf8(word, pos);
    std::string cls;
    if (cp.value < 0x80) {
      cls.push_back(ShapeClass(static_cast<unsigned char>(cp.value)));
    } else if (IsPunctuation(cp.value)) {
      cls.assign(word.substr(pos, cp.length));
    } else {
      cls.push_back('x');
    }
    pos += cp.length;
    if (collapse && out.size() >= cls.size() &&
        out.compare(out.size() - cls.size(), cls.size(), cls) == 0) {
      continue;
    }
    out += cls;
  }
  return out;
}

// First / last n code points.
std::string Prefix(std::string_view word, std::size_t n) {
  std::size_t pos = 0;
  for (std::size_t k = 0; k < n && pos < word.size(); ++k) {
    pos += DecodeUtf8(word, pos).length;
  }
  return std::string(word.substr(0, pos));
}

std::string Suffix(std::string_view word, std::size_t n) {
  std::vector<std::size_t> starts;
  for (std::size_t pos = 0; pos < word.size();) {
    starts.push_back(pos);
    pos += DecodeUtf8(word, pos).length;
  }
  if (n >= starts.size()) return std::string(word);
  return std::string(word.substr(starts[starts.size() - n]));
}

std::string ContextWord(const std::vector<Token>& tokens, std::size_t position,
                        int offset) {
  long idx = static_cast<long>(position) + offset;
  if (idx < 0) return "<s>";
  if (idx >= static_cast<long>(tokens.size())) return "</s>";
  return AsciiLower(tokens[idx].text);
}

}  // namespace

std::string WordShape(std::string_view word) { return Shape(word, false); }

std::string ShortWordShape(std::string_view word) { return Shape(word, true); }

std::vector<std::string> ExtractFeatureStrings(const std::vector<Token>& tokens,
                                               std::size_t position) {
  const std::string& word = tokens.at(position).text;
  std::string lower = AsciiLower(word);
  std::vector<std::string> f;
  f.reserve(24);
  f.push_back("bias");
  f.push_back("w=" + word);
  f.push_back("lw=" + lower);
  for (std::size_t n = 1; n <= 3; ++n) {
    f.push_back("p" + std::to_string(n) + "=" + Prefix(lower, n));
    f.push_back("s" + std::to_string(n) + "=" + Suffix(lower, n));
  }
  f.push_back("shape=" + WordShape(word));
  f.push_back("sshape=" + ShortWordShape(word));
  if (position == 0) f.push_back("first");
  if (position + 1 == tokens.size()) f.push_back("last");
  for (int offset : {-2, -1, 1, 2}) {
    long idx = static_cast<long>(position) + offset;
    if (idx < 0 || idx >= static_cast<long>(tokens.size())) continue;
    f.push_back("w[" + std::to_string(offset) + "]=" +
                ContextWord(tokens, position, offset));
  }
  f.push_back("w[-1]|w[0]=" + ContextWord(tokens, position, -1) + "|" + lower);
  f.push_back("w[0]|w[1]=" + lower + "|" + ContextWord(tokens, position, 1));
  return f;
}

int FeatureMap::Lookup(const std::string& feature) {
  auto it = ids_.find(feature);
  if (it != ids_.end()) return it->second;
  if (frozen_) return -1;
  int id = static_cast<int>(names_.size());
  ids_.emplace(feature, id);
  names_.push_back(feature);
  return id;
}

int FeatureMap::Find(const std::string& feature) const {
  auto it = ids_.find(feature);
  return it == ids_.end() ? -1 : it->second;
}

FeatureMap FeatureMap::FromNames(std::vector<std::string> names) {
  FeatureMap map;
  for (std::size_t i = 0; i < names.size(); ++i) {
    map.ids_.emplace(names[i], static_cast<int>(i));
  }
  map.names_ = std::move(names);
  map.frozen_ = true;
  return map;
}

namespace {

FeatureVector Finish(std::vector<int> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return FeatureVector{std::move(ids), {}};
}

}  // namespace

FeatureVector FeatureMap::Vectorize(const std::vector<std::string>& features) {
  std::vector<int> ids;
  ids.reserve(features.size());
  for (const std::string& f : features) {
    int id = Lookup(f);
    if (id >= 0) ids.push_back(id);
  }
  return Finish(std::move(ids));
}

FeatureVector FeatureMap::Vectorize(
    const std::vector<std::string>& features) const {
  std::vector<int> ids;
  ids.reserve(features.size());
  for (const std::string& f : features) {
    int id = Find(f);
    if (id >= 0) ids.push_back(id);
  }
  return Finish(std::move(ids));
}

}  // namespace causal
