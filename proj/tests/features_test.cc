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

#include <algorithm>

#include <gtest/gtest.h>

#include "causal/features.h"

namespace causal {
namespace {

bool Has(const std::vector<std::string>& f, const std::string& name) {
  return std::find(f.begin(), f.end(), name) != f.end();
}

TEST(WordShapeTest, Examples) {
  EXPECT_EQ(WordShape("1.46"), "d.dd");
  EXPECT_EQ(WordShape("Beijing"), "Xxxxxxx");
  EXPECT_EQ(ShortWordShape("Beijing"), "Xx");
  EXPECT_EQ(ShortWordShape("1.46"), "d.d");
  EXPECT_EQ(WordShape("sit-in"), "xxx-xx");
  EXPECT_EQ(WordShape(""), "");
}

TEST(ExtractFeaturesTest, FirstPosition) {
  auto toks = Tokenize("Prices rose 1.46 %");
  auto f = ExtractFeatureStrings(toks, 0);
  EXPECT_TRUE(Has(f, "first"));
  EXPECT_FALSE(Has(f, "last"));
  EXPECT_TRUE(std::none_of(f.begin(), f.end(), [](const std::string& s) {
    return s.rfind("w[-1]=", 0) == 0 || s.rfind("w[-2]=", 0) == 0;
  }));
  EXPECT_TRUE(Has(f, "w[1]=rose"));
  EXPECT_TRUE(Has(f, "lw=prices"));
  EXPECT_TRUE(Has(f, "w=Prices"));
  EXPECT_TRUE(Has(f, "p3=pri"));
  EXPECT_TRUE(Has(f, "s2=es"));
}

TEST(ExtractFeaturesTest, ShapeAndLast) {
  auto toks = Tokenize("Prices rose 1.46");
  auto f = ExtractFeatureStrings(toks, 2);
  EXPECT_TRUE(Has(f, "shape=d.dd"));
  EXPECT_TRUE(Has(f, "last"));
  EXPECT_TRUE(Has(f, "w[-2]=prices"));
  EXPECT_TRUE(Has(f, "w[0]|w[1]=1.46|</s>"));
}

TEST(ExtractFeaturesTest, Deterministic) {
  auto toks = Tokenize("The clash left one person dead.");
  for (std::size_t i = 0; i < toks.size(); ++i) {
    EXPECT_EQ(ExtractFeatureStrings(toks, i), ExtractFeatureStrings(toks, i));
  }
}

TEST(FeatureMapTest, GrowFreezeRestore) {
  FeatureMap map;
  EXPECT_EQ(map.Lookup("a"), 0);
  EXPECT_EQ(map.Lookup("b"), 1);
  EXPECT_EQ(map.Lookup("a"), 0);
  auto v = map.Vectorize({"b", "c", "a", "b"});
  EXPECT_EQ(v.indices, (std::vector<int>{0, 1, 2}));
  map.Freeze();
  EXPECT_EQ(map.Lookup("zzz"), -1);
  EXPECT_EQ(map.size(), 3u);
  auto restored = FeatureMap::FromNames(map.names());
  EXPECT_TRUE(restored.frozen());
  EXPECT_EQ(restored.Find("c"), 2);
  const FeatureMap& cref = restored;
  EXPECT_EQ(cref.Vectorize({"q", "c", "a"}).indices, (std::vector<int>{0, 2}));
}

}  // namespace
}  // namespace causal
