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

#ifndef CAUSAL_CORPUS_H_
#define CAUSAL_CORPUS_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace causal {

// Offsets are byte offsets into the clean (tag-free) UTF-8 sentence text.
struct Token {
  std::string text;
  std::size_t start_char = 0;
  std::size_t end_char = 0;

  bool operator==(const Token&) const = default;
};

enum class Role { kCause = 0, kEffect = 1, kSignal = 2 };
inline constexpr int kNumRoles = 3;

// "ARG0", "ARG1" or "SIG0".
std::string_view RoleTag(Role role);
// "Cause", "Effect" or "Signal".
std::string_view RoleName(Role role);

// Half-open token range [start_tok, end_tok).
struct Span {
  std::size_t start_tok = 0;
  std::size_t end_tok = 0;
  Role role = Role::kCause;

  std::size_t size() const { return end_tok - start_tok; }
  bool Overlaps(const Span& other) const {
    return start_tok < other.end_tok && other.start_tok < end_tok;
  }
  auto operator<=>(const Span&) const = default;
};

struct CausalRelation {
  Span cause{0, 0, Role::kCause};
  Span effect{0, 0, Role::kEffect};
  std::optional<Span> signal;

  bool operator==(const CausalRelation&) const = default;
};

inline constexpr std::size_t kMaxRelationsPerSentence = 4;

struct Sentence {
  std::string id;
  std::string text;
  std::vector<Token> tokens;
  std::vector<CausalRelation> relations;
  bool is_causal = false;
};

struct Corpus {
  std::vector<Sentence> sentences;
  std::string split_name;
};

// Whitespace split, then every leading and trailing punctuation code point
// of a chunk becomes a token of its own.
std::vector<Token> Tokenize(std::string_view text);

// True for the literal <ARG0>, </ARG0>, <ARG1>, </ARG1>, <SIG0>, </SIG0>.
bool IsTagMarker(std::string_view token);

// Byte range [begin, end) into a clean text.
struct CharRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool operator==(const CharRange&) const = default;
};

struct CharRelation {
  CharRange cause;
  CharRange effect;
  std::optional<CharRange> signal;
};

struct ParsedAnnotation {
  std::string clean_text;
  CharRelation relation;
};

// Parses a string carrying <ARG0>, <ARG1> and optionally <SIG0> markers.
// Throws MalformedAnnotation.
ParsedAnnotation ParseAnnotated(std::string_view tagged);

struct AlignedRelation {
  CausalRelation relation;
  // One entry per range that had to be widened to whole tokens.
  std::vector<std::string> notes;
};

// Minimal token cover of each character range. Ranges that start or end
// inside a token are widened and reported in `notes`. Throws
// SpanAlignmentError when a range touches no token at all.
AlignedRelation CharSpansToTokenSpans(const std::vector<Token>& tokens,
                                      const CharRelation& relation);

// Inverse of ParseAnnotated for relation `relation_index` of `sentence`.
std::string RenderAnnotated(const Sentence& sentence,
                            std::size_t relation_index);

// Builds a sentence from its clean text and token-level relations.
Sentence MakeSentence(std::string id, std::string text,
                      std::vector<CausalRelation> relations);

enum class CorpusFormat { kJsonl, kCsv };

std::optional<CorpusFormat> CorpusFormatFromString(std::string_view name);

struct RowError {
  std::size_t row = 0;  // 0-based data row, header excluded
  std::string kind;     // error class name
  std::string message;
};

struct LoadResult {
  Corpus corpus;
  std::size_t rows = 0;
  std::size_t accepted_rows = 0;
  std::vector<RowError> rejected;
  std::vector<std::string> warnings;
};

// Reads a corpus file. Rows sharing an id are merged into one sentence.
// Row-level problems are collected in `rejected`; throws IoError when the
// file cannot be read and FormatError when the header or schema is wrong.
LoadResult LoadCorpus(const std::string& path, CorpusFormat format);
LoadResult ParseCorpus(std::string_view content, CorpusFormat format);

// Serializes one record per sentence in the given format.
std::string SerializeCorpus(const Corpus& corpus, CorpusFormat format);
void WriteCorpus(const Corpus& corpus, const std::string& path,
                 CorpusFormat format);

}  // namespace causal

#endif  // CAUSAL_CORPUS_H_
