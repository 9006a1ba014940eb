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

#include "causal/augment.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "causal/errors.h"
#include "causal/text.h"
#include "json.hpp"

namespace causal {

Rng DerivedRng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

void SynonymLexicon::Add(const std::string& word,
                         std::vector<std::string> synonyms) {
  std::string key = AsciiLower(word);
  std::erase_if(synonyms, [](const std::string& s) { return s.empty(); });
  if (synonyms.empty()) {
    throw FormatError("no synonyms for '" + key + "'");
  }
  for (const std::string& s : synonyms) {
    if (AsciiLower(s) == key) {
      throw FormatError("'" + key + "' lists itself as a synonym");
    }
  }
  auto& list = entries_[key];
  for (std::string& s : synonyms) {
    if (std::find(list.begin(), list.end(), s) == list.end()) {
      list.push_back(std::move(s));
    }
  }
}

const std::vector<std::string>* SynonymLexicon::Find(
    const std::string& lowercased) const {
  auto it = entries_.find(lowercased);
  return it == entries_.end() ? nullptr : &it->second;
}

SynonymLexicon SynonymLexicon::ParseTsv(std::string_view content) {
  SynonymLexicon lexicon;
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw FormatError("lexicon line " + std::to_string(line_no) +
                        " has no tab");
    }
    std::vector<std::string> synonyms;
    std::string rest = line.substr(tab + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      std::size_t comma = rest.find(',', pos);
      if (comma == std::string::npos) comma = rest.size();
      std::string syn(Trim(std::string_view(rest).substr(pos, comma - pos)));
      std::replace(syn.begin(), syn.end(), '_', ' ');
      if (!syn.empty()) synonyms.push_back(syn);
      pos = comma + 1;
    }
    std::string word(Trim(std::string_view(line).substr(0, tab)));
    try {
      lexicon.Add(word, std::move(synonyms));
    } catch (const FormatError& e) {
      throw FormatError("lexicon line " + std::to_string(line_no) + ": " +
                        e.what());
    }
  }
  return lexicon;
}

SynonymLexicon SynonymLexicon::LoadTsv(const std::string& path) {
  return ParseTsv(ReadFile(path));
}

const StopwordList& DefaultStopwords() {
  static const StopwordList kStopwords = {
      "i",       "me",       "my",      "myself",  "we",         "our",
      "ours",    "ourselves", "you",    "your",    "yours",      "yourself",
      "yourselves", "he",    "him",     "his",     "himself",    "she",
      "her",     "hers",     "herself", "it",      "its",        "itself",
      "they",    "them",     "their",   "theirs",  "themselves", "what",
      "which",   "who",      "whom",    "this",    "that",       "these",
      "those",   "am",       "is",      "are",     "was",        "were",
      "be",      "been",     "being",   "have",    "has",        "had",
      "having",  "do",       "does",    "did",     "doing",      "a",
      "an",      "the",      "and",     "but",     "if",         "or",
      "because", "as",       "until",   "while",   "of",         "at",
      "by",      "for",      "with",    "about",   "against",    "between",
      "into",    "through",  "during",  "before",  "after",      "above",
      "below",   "to",       "from",    "up",      "down",       "in",
      "out",     "on",       "off",     "over",    "under",      "again",
      "further", "then",     "once",    "here",    "there",      "when",
      "where",   "why",      "how",     "all",     "any",        "both",
      "each",    "few",      "more",    "most",    "other",      "some",
      "such",    "no",       "nor",     "not",     "only",       "own",
      "same",    "so",       "than",    "too",     "very",       "s",
      "t",       "can",      "will",    "just",    "don",        "should",
      "now"};
  return kStopwords;
}

StopwordList LoadStopwords(const std::string& path) {
  StopwordList words;
  std::istringstream in(ReadFile(path));
  std::string line;
  while (std::getline(in, line)) {
    std::string w = AsciiLower(Trim(line));
    if (!w.empty()) words.insert(w);
  }
  if (words.empty()) throw FormatError("empty stopword list '" + path + "'");
  return words;
}

void EdaConfig::Validate() const {
  for (double a : {alpha_sr, alpha_ri, alpha_rs, p_rd}) {
    if (!(a >= 0.0 && a <= 1.0)) {
      throw ConfigError("EDA rates must lie in [0, 1]");
    }
  }
  if (n_aug < 0) throw ConfigError("n_aug must be non-negative");
}

EdaConfig St1EdaDefaults() { return EdaConfig{}; }

EdaConfig St2EdaDefaults() {
  EdaConfig c;
  c.alpha_sr = 0.4;
  c.alpha_ri = 0.5;
  c.alpha_rs = 0.0;
  c.n_aug = 1;
  return c;
}

namespace {

std::size_t Uniform(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

std::size_t OpCount(double alpha, std::size_t base) {
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(alpha * static_cast<double>(base))));
}

bool Replaceable(const std::string& word, const SynonymLexicon& lexicon,
                 const StopwordList& stopwords) {
  if (IsTagMarker(word)) return false;
  std::string lower = AsciiLower(word);
  return !stopwords.count(lower) && lexicon.Find(lower) != nullptr;
}

std::size_t WordCount(const Words& words) {
  return static_cast<std::size_t>(std::count_if(
      words.begin(), words.end(),
      [](const std::string& w) { return !IsTagMarker(w); }));
}

}  // namespace

Words EdaSynonymReplacement(const Words& words, double alpha,
                            const SynonymLexicon& lexicon,
                            const StopwordList& stopwords, Rng& rng) {
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (Replaceable(words[i], lexicon, stopwords)) eligible.push_back(i);
  }
  if (eligible.empty()) return words;
  std::size_t n = std::min(OpCount(alpha, eligible.size()), eligible.size());
  std::shuffle(eligible.begin(), eligible.end(), rng);
  Words out = words;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t i = eligible[k];
    const auto& synonyms = *lexicon.Find(AsciiLower(words[i]));
    out[i] = synonyms[Uniform(rng, synonyms.size())];
  }
  return out;
}

Words EdaRandomInsertion(const Words& words, double alpha,
                         const SynonymLexicon& lexicon,
                         const StopwordList& stopwords, Rng& rng) {
  Words out = words;
  std::size_t n = OpCount(alpha, WordCount(words));
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::size_t> sources;
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (Replaceable(out[i], lexicon, stopwords)) sources.push_back(i);
    }
    if (sources.empty()) return out;
    const auto& synonyms =
        *lexicon.Find(AsciiLower(out[sources[Uniform(rng, sources.size())]]));
    std::string word = synonyms[Uniform(rng, synonyms.size())];
    std::size_t at = Uniform(rng, out.size() + 1);
    out.insert(out.begin() + static_cast<long>(at), std::move(word));
  }
  return out;
}

Words EdaRandomSwap(const Words& words, double alpha, Rng& rng) {
  std::vector<std::size_t> movable;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!IsTagMarker(words[i])) movable.push_back(i);
  }
  if (movable.size() < 2) return words;
  Words out = words;
  std::size_t n = OpCount(alpha, movable.size());
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t a = Uniform(rng, movable.size());
    std::size_t b = Uniform(rng, movable.size() - 1);
    if (b >= a) ++b;
    std::swap(out[movable[a]], out[movable[b]]);
  }
  return out;
}

Words EdaRandomDeletion(const Words& words, double p, Rng& rng) {
  std::vector<std::size_t> deletable;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!IsTagMarker(words[i])) deletable.push_back(i);
  }
  if (deletable.empty() || p <= 0.0) return words;
  std::bernoulli_distribution drop(p);
  std::vector<bool> keep(words.size(), true);
  std::size_t kept = 0;
  for (std::size_t i : deletable) {
    keep[i] = !drop(rng);
    kept += keep[i];
  }
  if (kept == 0) keep[deletable[Uniform(rng, deletable.size())]] = true;
  Words out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (keep[i]) out.push_back(words[i]);
  }
  return out;
}

Words SplitTagged(std::string_view tagged) {
  Words out;
  std::size_t text_start = 0;
  auto flush = [&](std::size_t end) {
    for (Token& t : Tokenize(tagged.substr(text_start, end - text_start))) {
      out.push_back(std::move(t.text));
    }
  };
  for (std::size_t pos = 0; pos < tagged.size(); ++pos) {
    if (tagged[pos] != '<') continue;
    std::size_t close = tagged.find('>', pos);
    if (close == std::string_view::npos) break;
    std::string_view candidate = tagged.substr(pos, close - pos + 1);
    if (!IsTagMarker(candidate)) continue;
    flush(pos);
    out.emplace_back(candidate);
    text_start = close + 1;
    pos = close;
  }
  flush(tagged.size());
  return out;
}

std::string JoinTagged(const Words& words) {
  std::string out;
  bool glue = true;
  for (const std::string& w : words) {
    bool marker = IsTagMarker(w);
    bool closing = marker && w[1] == '/';
    if (!glue && !closing) out.push_back(' ');
    out += w;
    glue = marker && !closing;
  }
  return out;
}

Corpus AugmentSt1(const Corpus& corpus, const EdaConfig& config,
                  const SynonymLexicon& lexicon,
                  const StopwordList& stopwords) {
  config.Validate();
  Corpus out;
  out.split_name = corpus.split_name;
  out.sentences.reserve(corpus.sentences.size() * (1 + config.n_aug));
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    const Sentence& s = corpus.sentences[i];
    out.sentences.push_back(s);
    Rng rng = DerivedRng(config.seed, i);
    Words words;
    for (const Token& t : s.tokens) words.push_back(t.text);
    for (int a = 1; a <= config.n_aug; ++a) {
      Words w = EdaSynonymReplacement(words, config.alpha_sr, lexicon,
                                      stopwords, rng);
      w = EdaRandomInsertion(w, config.alpha_ri, lexicon, stopwords, rng);
      w = EdaRandomSwap(w, config.alpha_rs, rng);
      std::string text;
      for (const std::string& word : w) {
        if (!text.empty()) text.push_back(' ');
        text += word;
      }
      Sentence v = MakeSentence(s.id + "_eda" + std::to_string(a),
                                std::move(text), {});
      v.is_causal = s.is_causal;
      out.sentences.push_back(std::move(v));
    }
  }
  return out;
}

namespace {

std::vector<std::string> Markers(const Words& words) {
  std::vector<std::string> out;
  for (const std::string& w : words) {
    if (IsTagMarker(w)) out.push_back(w);
  }
  return out;
}

}  // namespace

St2AugmentResult AugmentSt2(const Corpus& corpus, const EdaConfig& config,
                            const SynonymLexicon& lexicon,
                            const StopwordList& stopwords) {
  config.Validate();
  St2AugmentResult result;
  result.corpus = corpus;
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    const Sentence& s = corpus.sentences[i];
    if (s.relations.size() != 1) continue;
    Rng rng = DerivedRng(config.seed, i);
    Words words = SplitTagged(RenderAnnotated(s, 0));
    Words w = EdaSynonymReplacement(words, config.alpha_sr, lexicon, stopwords,
                                    rng);
    w = EdaRandomInsertion(w, config.alpha_ri, lexicon, stopwords, rng);
    std::string tagged = JoinTagged(w);
    try {
      if (Markers(SplitTagged(tagged)) != Markers(words)) {
        throw MalformedAnnotation("tag markers changed", 0);
      }
      ParsedAnnotation parsed = ParseAnnotated(tagged);
      Sentence v;
      v.id = s.id + "_st2eda";
      v.text = parsed.clean_text;
      v.tokens = Tokenize(v.text);
      AlignedRelation aligned = CharSpansToTokenSpans(v.tokens, parsed.relation);
      const CausalRelation& r = aligned.relation;
      bool overlap = r.cause.Overlaps(r.effect) ||
                     (r.signal && (r.signal->Overlaps(r.cause) ||
                                   r.signal->Overlaps(r.effect)));
      if (overlap || r.signal.has_value() != s.relations[0].signal.has_value()) {
        throw ConsistencyError("span structure changed");
      }
      v.relations.push_back(r);
      v.is_causal = true;
      result.corpus.sentences.push_back(std::move(v));
      ++result.added;
    } catch (const Error&) {
      ++result.discarded;
    }
  }
  return result;
}

Corpus OversampleMultiRelation(const Corpus& corpus, std::size_t n, Rng& rng) {
  Corpus out = corpus;
  if (n == 0) return out;
  std::vector<std::size_t> multi;
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    if (corpus.sentences[i].relations.size() >= 2) multi.push_back(i);
  }
  if (multi.empty()) {
    throw NoMultiRelationInstances("corpus has no sentence with two or more "
                                   "relations");
  }
  for (std::size_t k = 0; k < n; ++k) {
    Sentence copy = corpus.sentences[multi[Uniform(rng, multi.size())]];
    copy.id += "_os" + std::to_string(k);
    out.sentences.push_back(std::move(copy));
  }
  return out;
}

SlotLexicons SlotLexicons::ParseJson(std::string_view content) {
  SlotLexicons slots;
  try {
    nlohmann::json j = nlohmann::json::parse(content);
    j.at("cause_phrases").get_to(slots.cause_phrases);
    j.at("effect_phrases").get_to(slots.effect_phrases);
    j.at("signals_forward").get_to(slots.signals_forward);
    j.at("signals_backward").get_to(slots.signals_backward);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("slot lexicons: ") + e.what());
  }
  return slots;
}

SlotLexicons SlotLexicons::LoadJson(const std::string& path) {
  return ParseJson(ReadFile(path));
}

namespace {

std::string Capitalized(std::string phrase) {
  if (!phrase.empty() && phrase[0] >= 'a' && phrase[0] <= 'z') {
    phrase[0] = static_cast<char>(phrase[0] - 'a' + 'A');
  }
  return phrase;
}

}  // namespace

Corpus SynthTemplates(std::size_t n, const SlotLexicons& slots, Rng& rng) {
  const std::pair<const char*, const std::vector<std::string>*> lists[] = {
      {"cause_phrases", &slots.cause_phrases},
      {"effect_phrases", &slots.effect_phrases},
      {"signals_forward", &slots.signals_forward},
      {"signals_backward", &slots.signals_backward}};
  for (const auto& [name, list] : lists) {
    if (list->empty()) throw EmptyLexicon(std::string(name) + " is empty");
  }
  Corpus out;
  out.split_name = "synthetic";
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& cause =
        slots.cause_phrases[Uniform(rng, slots.cause_phrases.size())];
    const std::string& effect =
        slots.effect_phrases[Uniform(rng, slots.effect_phrases.size())];
    std::string tagged;
    if (i % 2 == 0) {
      const std::string& signal =
          slots.signals_forward[Uniform(rng, slots.signals_forward.size())];
      tagged = "<ARG0>" + Capitalized(cause) + "</ARG0> <SIG0>" + signal +
               "</SIG0> <ARG1>" + effect + "</ARG1>.";
    } else {
      const std::string& signal =
          slots.signals_backward[Uniform(rng, slots.signals_backward.size())];
      tagged = "<ARG1>" + Capitalized(effect) + "</ARG1> <SIG0>" + signal +
               "</SIG0> <ARG0>" + cause + "</ARG0>.";
    }
    ParsedAnnotation parsed = ParseAnnotated(tagged);
    std::vector<Token> tokens = Tokenize(parsed.clean_text);
    CausalRelation rel = CharSpansToTokenSpans(tokens, parsed.relation).relation;
    Sentence s = MakeSentence("synth-" + std::to_string(i), parsed.clean_text,
                              {rel});
    out.sentences.push_back(std::move(s));
  }
  return out;
}

}  // namespace causal
