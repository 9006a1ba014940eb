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
#include <cmath>

#include <gtest/gtest.h>

#include "causal/augment.h"
#include "causal/errors.h"
#include "causal/labeling.h"
#include "test_util.h"

namespace causal {
namespace {

using testing::DataPath;
using testing::NoisySynthCorpus;
using testing::Rel;
using testing::S;
using testing::TestSlots;

SynonymLexicon Lexicon() { return SynonymLexicon::LoadTsv(DataPath("lexicon.tsv")); }

Words W(std::string_view text) {
  Words out;
  for (const Token& t : Tokenize(text)) out.push_back(t.text);
  return out;
}

std::vector<std::string> Sorted(Words w) {
  std::sort(w.begin(), w.end());
  return w;
}

TEST(LexiconTest, ParseTsv) {
  auto lex = SynonymLexicon::ParseTsv("Protests\tresist, demonstrations\n\n"
                                      "mark\tmark_off\n");
  ASSERT_NE(lex.Find("protests"), nullptr);
  EXPECT_EQ(*lex.Find("protests"),
            (std::vector<std::string>{"resist", "demonstrations"}));
  EXPECT_EQ(*lex.Find("mark"), (std::vector<std::string>{"mark off"}));
  EXPECT_THROW(SynonymLexicon::ParseTsv("no tab here\n"), FormatError);
  EXPECT_THROW(SynonymLexicon::ParseTsv("word\tword\n"), FormatError);
  EXPECT_GT(Lexicon().size(), 40u);
}

TEST(SynonymReplacementTest, EmptyLexiconIdentity) {
  Rng rng(1);
  Words w = W("protests by students");
  EXPECT_EQ(EdaSynonymReplacement(w, 0.4, SynonymLexicon(), DefaultStopwords(),
                                  rng),
            w);
}

TEST(SynonymReplacementTest, AlphaZeroStillOneReplacement) {
  auto lex = Lexicon();
  Words w = W("protests by students teachers");
  for (int seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    Words out = EdaSynonymReplacement(w, 0.0, lex, DefaultStopwords(), rng);
    ASSERT_EQ(out.size(), w.size());
    int changed = 0;
    for (std::size_t i = 0; i < w.size(); ++i) changed += out[i] != w[i];
    EXPECT_EQ(changed, 1);
    EXPECT_EQ(out[1], "by");
  }
}

TEST(SynonymReplacementTest, DrawsFromSynonymLists) {
  auto lex = Lexicon();
  Words w = W("protests by students");
  Rng rng(3);
  Words out = EdaSynonymReplacement(w, 1.0, lex, DefaultStopwords(), rng);
  const auto& p = *lex.Find("protests");
  const auto& s = *lex.Find("students");
  EXPECT_NE(std::find(p.begin(), p.end(), out[0]), p.end());
  EXPECT_EQ(out[1], "by");
  EXPECT_NE(std::find(s.begin(), s.end(), out[2]), s.end());
}

TEST(SynonymReplacementTest, MarkersUntouched) {
  auto lex = SynonymLexicon::ParseTsv("<ARG0>\tx\nrain\tdrizzle\n");
  Words w = {"<ARG0>", "rain", "</ARG0>"};
  Rng rng(1);
  EXPECT_EQ(EdaSynonymReplacement(w, 1.0, lex, DefaultStopwords(), rng),
            (Words{"<ARG0>", "drizzle", "</ARG0>"}));
}

TEST(RandomInsertionTest, IdentityWithoutSources) {
  Rng rng(1);
  Words w = W("of the and by");
  EXPECT_EQ(EdaRandomInsertion(w, 0.5, Lexicon(), DefaultStopwords(), rng), w);
}

TEST(RandomInsertionTest, LengthAndDeterminism) {
  auto lex = Lexicon();
  Words w = W("heavy rain hit the farmers and crops failed in the north");
  for (double alpha : {0.0, 0.1, 0.5}) {
    Rng a(7), b(7);
    Words x = EdaRandomInsertion(w, alpha, lex, DefaultStopwords(), a);
    Words y = EdaRandomInsertion(w, alpha, lex, DefaultStopwords(), b);
    std::size_t n =
        std::max<std::size_t>(1, std::lround(alpha * double(w.size())));
    EXPECT_EQ(x.size(), w.size() + n);
    EXPECT_EQ(x, y);
  }
}

TEST(RandomSwapTest, Properties) {
  Rng rng(1);
  EXPECT_EQ(EdaRandomSwap({"one"}, 0.6, rng), (Words{"one"}));
  Words w = W("a b c d e f g h i j");
  for (int seed = 0; seed < 30; ++seed) {
    Rng r1(seed), r2(seed);
    Words x = EdaRandomSwap(w, 0.6, r1);
    EXPECT_EQ(Sorted(x), Sorted(w));
    EXPECT_EQ(x, EdaRandomSwap(w, 0.6, r2));
  }
  Words tagged = {"<ARG0>", "a", "</ARG0>", "b", "<ARG1>", "c", "</ARG1>"};
  Rng r3(5);
  Words out = EdaRandomSwap(tagged, 1.0, r3);
  for (std::size_t i : {0, 2, 4, 6}) EXPECT_EQ(out[i], tagged[i]);
}

TEST(RandomDeletionTest, Extremes) {
  Words w = W("a b c d e");
  Rng rng(1);
  EXPECT_EQ(EdaRandomDeletion(w, 0.0, rng), w);
  for (int seed = 0; seed < 20; ++seed) {
    Rng r(seed);
    EXPECT_EQ(EdaRandomDeletion(w, 1.0, r).size(), 1u);
  }
  Words tagged = {"<ARG0>", "a", "</ARG0>"};
  EXPECT_EQ(EdaRandomDeletion(tagged, 1.0, rng), tagged);
}

TEST(RandomDeletionTest, MonteCarloSurvivors) {
  const double p = 0.3;
  const std::size_t L = 20;
  const int trials = 10000;
  Words w(L, "w");
  Rng rng(42);
  double total = 0;
  for (int t = 0; t < trials; ++t) total += EdaRandomDeletion(w, p, rng).size();
  double mean = total / trials;
  double sigma = std::sqrt(L * p * (1 - p) / trials);
  EXPECT_NEAR(mean, (1 - p) * L, 3 * sigma);
}

TEST(SplitJoinTest, RoundTrip) {
  std::string tagged =
      "<ARG0>Heavy rain</ARG0> <SIG0>caused</SIG0> <ARG1>floods</ARG1>.";
  Words w = SplitTagged(tagged);
  EXPECT_EQ(w, (Words{"<ARG0>", "Heavy", "rain", "</ARG0>", "<SIG0>", "caused",
                      "</SIG0>", "<ARG1>", "floods", "</ARG1>", "."}));
  EXPECT_EQ(ParseAnnotated(JoinTagged(w)).relation.cause,
            ParseAnnotated(tagged).relation.cause);
}

Corpus St1Corpus(std::size_t n) {
  Corpus c = NoisySynthCorpus(n, 9);
  for (std::size_t i = 0; i < c.sentences.size(); i += 3) {
    c.sentences[i].relations.clear();
    c.sentences[i].is_causal = false;
  }
  return c;
}

TEST(AugmentSt1Test, FiveTimesAsLarge) {
  Corpus c = St1Corpus(40);
  Corpus out = AugmentSt1(c, St1EdaDefaults(), Lexicon());
  ASSERT_EQ(out.sentences.size(), 5 * c.sentences.size());
  for (std::size_t i = 0; i < c.sentences.size(); ++i) {
    EXPECT_EQ(out.sentences[5 * i].id, c.sentences[i].id);
    for (int a = 1; a <= 4; ++a) {
      const Sentence& v = out.sentences[5 * i + a];
      EXPECT_EQ(v.is_causal, c.sentences[i].is_causal);
      EXPECT_TRUE(v.relations.empty());
      EXPECT_EQ(v.id, c.sentences[i].id + "_eda" + std::to_string(a));
    }
  }
}

TEST(AugmentSt1Test, NoAugmentationAndDeterminism) {
  Corpus c = St1Corpus(10);
  EdaConfig none = St1EdaDefaults();
  none.n_aug = 0;
  EXPECT_EQ(AugmentSt1(c, none, Lexicon()).sentences.size(), 10u);
  Corpus a = AugmentSt1(c, St1EdaDefaults(), Lexicon());
  Corpus b = AugmentSt1(c, St1EdaDefaults(), Lexicon());
  for (std::size_t i = 0; i < a.sentences.size(); ++i) {
    EXPECT_EQ(a.sentences[i].text, b.sentences[i].text);
  }
}

TEST(AugmentSt2Test, MultiRelationOnlyIsUnchanged) {
  Corpus c;
  c.sentences.push_back(testing::ClashSentence());
  auto r = AugmentSt2(c, St2EdaDefaults(), Lexicon());
  EXPECT_EQ(r.added, 0u);
  EXPECT_EQ(r.corpus.sentences.size(), 1u);
}

TEST(AugmentSt2Test, OutputsReparseWithSameMarkers) {
  Corpus c = NoisySynthCorpus(200, 10);
  auto r = AugmentSt2(c, St2EdaDefaults(), Lexicon());
  std::size_t singles = std::count_if(
      c.sentences.begin(), c.sentences.end(),
      [](const Sentence& s) { return s.relations.size() == 1; });
  EXPECT_EQ(r.added + r.discarded, singles);
  EXPECT_GT(r.added, singles / 2);
  ASSERT_EQ(r.corpus.sentences.size(), c.sentences.size() + r.added);
  std::size_t k = c.sentences.size();
  for (std::size_t i = 0; i < c.sentences.size(); ++i) {
    if (c.sentences[i].relations.size() != 1) continue;
    if (k >= r.corpus.sentences.size() ||
        r.corpus.sentences[k].id != c.sentences[i].id + "_st2eda") {
      continue;
    }
    const Sentence& v = r.corpus.sentences[k++];
    ASSERT_EQ(v.relations.size(), 1u);
    EXPECT_GT(v.relations[0].cause.size(), 0u);
    EXPECT_GT(v.relations[0].effect.size(), 0u);
    std::string tagged = RenderAnnotated(v, 0);
    auto markers = [](const Words& w) {
      Words m;
      for (const auto& x : w) {
        if (IsTagMarker(x)) m.push_back(x);
      }
      return m;
    };
    EXPECT_EQ(markers(SplitTagged(tagged)),
              markers(SplitTagged(RenderAnnotated(c.sentences[i], 0))));
    auto reparsed = ParseAnnotated(tagged);
    EXPECT_EQ(reparsed.clean_text, v.text);
    EXPECT_NO_THROW(EncodeRelation(v.tokens.size(), v.relations[0]));
  }
  EXPECT_EQ(k, r.corpus.sentences.size());
}

TEST(OversampleTest, Sizes) {
  Corpus c = NoisySynthCorpus(100, 11);
  Rng rng(1);
  EXPECT_EQ(OversampleMultiRelation(c, 0, rng).sentences.size(), 100u);
  Corpus out = OversampleMultiRelation(c, 400, rng);
  ASSERT_EQ(out.sentences.size(), 500u);
  for (std::size_t i = 100; i < 500; ++i) {
    EXPECT_GE(out.sentences[i].relations.size(), 2u);
    EXPECT_NE(out.sentences[i].id.find("_os" + std::to_string(i - 100)),
              std::string::npos);
  }
}

TEST(OversampleTest, SingleSourceAndNone) {
  Corpus c;
  c.sentences.push_back(MakeSentence("a", "x y z", {}));
  c.sentences.push_back(testing::ClashSentence());
  Rng rng(2);
  Corpus out = OversampleMultiRelation(c, 5, rng);
  for (std::size_t i = 2; i < out.sentences.size(); ++i) {
    EXPECT_EQ(out.sentences[i].text, c.sentences[1].text);
    EXPECT_EQ(out.sentences[i].relations, c.sentences[1].relations);
  }
  c.sentences.pop_back();
  EXPECT_THROW(OversampleMultiRelation(c, 1, rng), NoMultiRelationInstances);
}

TEST(SynthTemplatesTest, ForwardAndBackward) {
  SlotLexicons slots;
  slots.cause_phrases = {"the lack of rain"};
  slots.effect_phrases = {"the crops to fail and farmers to suffer losses"};
  slots.signals_forward = {"caused"};
  slots.signals_backward = {"was a result of"};
  Rng rng(1);
  Corpus c = SynthTemplates(2, slots, rng);
  ASSERT_EQ(c.sentences.size(), 2u);
  EXPECT_EQ(c.sentences[0].text,
            "The lack of rain caused the crops to fail and farmers to suffer "
            "losses.");
  EXPECT_EQ(RenderAnnotated(c.sentences[0], 0),
            "<ARG0>The lack of rain</ARG0> <SIG0>caused</SIG0> <ARG1>the "
            "crops to fail and farmers to suffer losses</ARG1>.");
  EXPECT_EQ(c.sentences[1].id, "synth-1");
  EXPECT_EQ(RenderAnnotated(c.sentences[1], 0),
            "<ARG1>The crops to fail and farmers to suffer losses</ARG1> "
            "<SIG0>was a result of</SIG0> <ARG0>the lack of rain</ARG0>.");

  slots.cause_phrases = {"the decrease in demand for fossil fuels"};
  slots.effect_phrases = {"a decrease in greenhouse gas emissions"};
  Corpus d = SynthTemplates(2, slots, rng);
  EXPECT_EQ(d.sentences[1].text,
            "A decrease in greenhouse gas emissions was a result of the "
            "decrease in demand for fossil fuels.");
}

TEST(SynthTemplatesTest, EmptyCases) {
  Rng rng(1);
  EXPECT_TRUE(SynthTemplates(0, TestSlots(), rng).sentences.empty());
  SlotLexicons empty = TestSlots();
  empty.signals_backward.clear();
  EXPECT_THROW(SynthTemplates(3, empty, rng), EmptyLexicon);
}

TEST(SynthTemplatesTest, NoOverlappingSpans) {
  Rng rng(4);
  Corpus c = SynthTemplates(200, TestSlots(), rng);
  for (const Sentence& s : c.sentences) {
    ASSERT_EQ(s.relations.size(), 1u);
    EXPECT_NO_THROW(EncodeRelation(s.tokens.size(), s.relations[0]));
  }
}

TEST(DerivedRngTest, IndependentOfOrder) {
  Rng a = DerivedRng(13, 5), b = DerivedRng(13, 5), c = DerivedRng(13, 6);
  EXPECT_EQ(a(), b());
  EXPECT_NE(DerivedRng(13, 5)(), c());
}

TEST(EdaConfigTest, Validate) {
  EdaConfig c;
  c.alpha_sr = -0.1;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = EdaConfig();
  c.n_aug = -1;
  EXPECT_THROW(c.Validate(), ConfigError);
}

}  // namespace
}  // namespace causal
