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

#include "causal/corpus.h"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "causal/errors.h"
#include "causal/text.h"
#include "json.hpp"

namespace causal {

std::string_view RoleTag(Role role) {
  switch (role) {
    case Role::kCause:
      return "ARG0";
    case Role::kEffect:
      return "ARG1";
    case Role::kSignal:
      return "SIG0";
  }
  return "";
}

std::string_view RoleName(Role role) {
  switch (role) {
    case Role::kCause:
      return "Cause";
    case Role::kEffect:
      return "Effect";
    case Role::kSignal:
      return "Signal";
  }
  return "";
}

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t pos = 0;
  while (pos < text.size()) {
    CodePoint cp = DecodeUtf8(text, pos);
    if (IsSpace(cp.value)) {
      pos += cp.length;
      continue;
    }
    std::size_t chunk_begin = pos;
    std::size_t chunk_end = pos;
    while (chunk_end < text.size()) {
      CodePoint next = DecodeUtf8(text, chunk_end);
      if (IsSpace(next.value)) break;
      chunk_end += next.length;
    }
    pos = chunk_end;

    // Split the chunk into code points so punctuation can be peeled off
    // both ends.
    std::vector<CodePoint> cps;
    std::vector<std::size_t> offsets;
    for (std::size_t p = chunk_begin; p < chunk_end;) {
      CodePoint c = DecodeUtf8(text, p);
      cps.push_back(c);
      offsets.push_back(p);
      p += c.length;
    }
    std::size_t lo = 0;
    std::size_t hi = cps.size();
    std::vector<Token> trailing;
    auto emit = [&](std::size_t begin, std::size_t end, auto& out) {
      out.push_back(Token{std::string(text.substr(begin, end - begin)), begin,
                          end});
    };
    while (lo < hi && IsPunctuation(cps[lo].value)) {
      emit(offsets[lo], offsets[lo] + cps[lo].length, tokens);
      ++lo;
    }
    while (hi > lo && IsPunctuation(cps[hi - 1].value)) {
      emit(offsets[hi - 1], offsets[hi - 1] + cps[hi - 1].length, trailing);
      --hi;
    }
    if (lo < hi) emit(offsets[lo], offsets[hi - 1] + cps[hi - 1].length, tokens);
    tokens.insert(tokens.end(), trailing.rbegin(), trailing.rend());
  }
  return tokens;
}

namespace {

struct Marker {
  std::string_view text;
  Role role;
  bool closing;
};

constexpr std::array<Marker, 6> kMarkers = {{
    {"<ARG0>", Role::kCause, false},
    {"</ARG0>", Role::kCause, true},
    {"<ARG1>", Role::kEffect, false},
    {"</ARG1>", Role::kEffect, true},
    {"<SIG0>", Role::kSignal, false},
    {"</SIG0>", Role::kSignal, true},
}};

const Marker* MatchMarker(std::string_view text, std::size_t pos) {
  for (const Marker& m : kMarkers) {
    if (text.compare(pos, m.text.size(), m.text) == 0) return &m;
  }
  return nullptr;
}

}  // namespace

bool IsTagMarker(std::string_view token) {
  return std::any_of(kMarkers.begin(), kMarkers.end(),
                     [&](const Marker& m) { return m.text == token; });
}

ParsedAnnotation ParseAnnotated(std::string_view tagged) {
  ParsedAnnotation out;
  std::string& clean = out.clean_text;
  clean.reserve(tagged.size());

  std::array<std::optional<std::size_t>, kNumRoles> open_at;
  std::array<std::optional<CharRange>, kNumRoles> done;
  std::array<std::size_t, kNumRoles> open_pos{};
  std::vector<Role> stack;

  std::size_t pos = 0;
  while (pos < tagged.size()) {
    const Marker* m = tagged[pos] == '<' ? MatchMarker(tagged, pos) : nullptr;
    if (m == nullptr) {
      clean.push_back(tagged[pos++]);
      continue;
    }
    int r = static_cast<int>(m->role);
    std::string name(RoleTag(m->role));
    if (!m->closing) {
      if (open_at[r] || done[r]) {
        throw MalformedAnnotation("duplicated <" + name + ">", pos);
      }
      open_at[r] = clean.size();
      open_pos[r] = pos;
      stack.push_back(m->role);
    } else {
      if (!open_at[r]) {
        throw MalformedAnnotation("</" + name + "> without opening tag", pos);
      }
      if (stack.back() != m->role) {
        throw MalformedAnnotation(
            "</" + name + "> closes across <" +
                std::string(RoleTag(stack.back())) + ">",
            pos);
      }
      stack.pop_back();
      if (*open_at[r] == clean.size()) {
        throw MalformedAnnotation("empty <" + name + "> span", pos);
      }
      done[r] = CharRange{*open_at[r], clean.size()};
      open_at[r].reset();
    }
    pos += m->text.size();
  }
  for (int r = 0; r < kNumRoles; ++r) {
    if (open_at[r]) {
      throw MalformedAnnotation(
          "unclosed <" + std::string(RoleTag(static_cast<Role>(r))) + ">",
          open_pos[r]);
    }
  }
  if (!done[0]) throw MalformedAnnotation("missing <ARG0>", tagged.size());
  if (!done[1]) throw MalformedAnnotation("missing <ARG1>", tagged.size());
  out.relation.cause = *done[0];
  out.relation.effect = *done[1];
  out.relation.signal = done[2];
  return out;
}

namespace {

Span AlignRange(const std::vector<Token>& tokens, const CharRange& range,
                Role role, std::vector<std::string>& notes) {
  std::size_t first = tokens.size();
  std::size_t last = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].start_char < range.end && tokens[i].end_char > range.begin) {
      first = std::min(first, i);
      last = i;
    }
  }
  if (first == tokens.size()) {
    throw SpanAlignmentError(std::string(RoleName(role)) + " range [" +
                             std::to_string(range.begin) + "," +
                             std::to_string(range.end) +
                             ") covers no token");
  }
  if (tokens[first].start_char < range.begin ||
      tokens[last].end_char > range.end) {
    notes.push_back(std::string(RoleName(role)) + " range [" +
                    std::to_string(range.begin) + "," +
                    std::to_string(range.end) + ") widened to [" +
                    std::to_string(tokens[first].start_char) + "," +
                    std::to_string(tokens[last].end_char) + ")");
  }
  return Span{first, last + 1, role};
}

}  // namespace

AlignedRelation CharSpansToTokenSpans(const std::vector<Token>& tokens,
                                      const CharRelation& relation) {
  AlignedRelation out;
  out.relation.cause = AlignRange(tokens, relation.cause, Role::kCause,
                                  out.notes);
  out.relation.effect = AlignRange(tokens, relation.effect, Role::kEffect,
                                   out.notes);
  if (relation.signal) {
    out.relation.signal = AlignRange(tokens, *relation.signal, Role::kSignal,
                                     out.notes);
  }
  return out;
}

std::string RenderAnnotated(const Sentence& sentence,
                            std::size_t relation_index) {
  if (relation_index >= sentence.relations.size()) {
    throw IndexOutOfRange("relation " + std::to_string(relation_index) +
                          " of sentence '" + sentence.id + "' with " +
                          std::to_string(sentence.relations.size()) +
                          " relations");
  }
  const CausalRelation& rel = sentence.relations[relation_index];
  // (byte offset, closing first, marker text)
  std::vector<std::tuple<std::size_t, int, std::string>> inserts;
  auto add = [&](const Span& span) {
    if (span.end_tok > sentence.tokens.size() || span.start_tok >= span.end_tok) {
      throw IndexOutOfRange("span outside sentence '" + sentence.id + "'");
    }
    std::string tag(RoleTag(span.role));
    inserts.emplace_back(sentence.tokens[span.start_tok].start_char, 1,
                         "<" + tag + ">");
    inserts.emplace_back(sentence.tokens[span.end_tok - 1].end_char, 0,
                         "</" + tag + ">");
  };
  add(rel.cause);
  add(rel.effect);
  if (rel.signal) add(*rel.signal);
  std::sort(inserts.begin(), inserts.end());

  std::string out;
  out.reserve(sentence.text.size() + 48);
  std::size_t cursor = 0;
  for (const auto& [offset, kind, marker] : inserts) {
    out.append(sentence.text, cursor, offset - cursor);
    out += marker;
    cursor = offset;
  }
  out.append(sentence.text, cursor, std::string::npos);
  return out;
}

Sentence MakeSentence(std::string id, std::string text,
                      std::vector<CausalRelation> relations) {
  Sentence s;
  s.id = std::move(id);
  s.tokens = Tokenize(text);
  s.text = std::move(text);
  s.is_causal = !relations.empty();
  s.relations = std::move(relations);
  return s;
}

std::optional<CorpusFormat> CorpusFormatFromString(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::kJsonl;
  if (name == "csv") return CorpusFormat::kCsv;
  return std::nullopt;
}

namespace {

// One input record before grouping by id.
struct RawRow {
  std::string id;
  std::optional<std::string> text;
  bool causal = false;
  std::vector<std::string> relations;
};

class RowRejected : public std::runtime_error {
 public:
  RowRejected(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

bool ParseBool(std::string_view value, bool& out) {
  std::string v = AsciiLower(Trim(value));
  if (v == "1" || v == "true" || v == "yes") {
    out = true;
    return true;
  }
  if (v == "0" || v == "false" || v == "no") {
    out = false;
    return true;
  }
  return false;
}

void CheckNoOverlap(const CausalRelation& rel) {
  std::vector<Span> spans = {rel.cause, rel.effect};
  if (rel.signal) spans.push_back(*rel.signal);
  for (std::size_t i = 0; i < spans.size(); ++i) {
    for (std::size_t j = i + 1; j < spans.size(); ++j) {
      if (spans[i].Overlaps(spans[j])) {
        throw RowRejected("OverlapError",
                          std::string(RoleName(spans[i].role)) + " and " +
                              std::string(RoleName(spans[j].role)) +
                              " spans share tokens");
      }
    }
  }
}

// Parses the row's tagged strings into a sentence; throws RowRejected.
Sentence BuildSentence(const RawRow& row, std::vector<std::string>& warnings) {
  if (row.id.empty()) throw RowRejected("FormatError", "empty id");
  std::optional<std::string> clean = row.text;
  std::vector<CharRelation> char_relations;
  for (const std::string& tagged : row.relations) {
    ParsedAnnotation parsed;
    try {
      parsed = ParseAnnotated(tagged);
    } catch (const MalformedAnnotation& e) {
      throw RowRejected("MalformedAnnotation", e.what());
    }
    if (clean && *clean != parsed.clean_text) {
      throw RowRejected("ConsistencyError",
                        "relation strings disagree on the clean text");
    }
    clean = parsed.clean_text;
    char_relations.push_back(parsed.relation);
  }
  if (!clean) {
    throw RowRejected("FormatError", "row has neither text nor relations");
  }
  if (!row.causal && !char_relations.empty()) {
    throw RowRejected("ConsistencyError",
                      "non-causal row carries causal relations");
  }
  Sentence s;
  s.id = row.id;
  s.text = *clean;
  s.tokens = Tokenize(s.text);
  s.is_causal = row.causal;
  for (const CharRelation& cr : char_relations) {
    AlignedRelation aligned;
    try {
      aligned = CharSpansToTokenSpans(s.tokens, cr);
    } catch (const SpanAlignmentError& e) {
      throw RowRejected("SpanAlignmentError", e.what());
    }
    for (const std::string& note : aligned.notes) {
      warnings.push_back("sentence '" + s.id + "': " + note);
    }
    CheckNoOverlap(aligned.relation);
    s.relations.push_back(aligned.relation);
  }
  return s;
}

std::vector<RawRow> ReadJsonlRows(std::string_view content,
                                  std::vector<std::optional<RowError>>& errs) {
  std::vector<RawRow> rows;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string_view::npos) eol = content.size();
    std::string_view line = content.substr(pos, eol - pos);
    pos = eol + 1;
    if (Trim(line).empty()) continue;
    RawRow row;
    std::optional<RowError> err;
    try {
      nlohmann::json j = nlohmann::json::parse(line);
      if (!j.is_object() || !j.contains("id") || !j.contains("causal")) {
        throw RowRejected("FormatError", "record needs 'id' and 'causal'");
      }
      row.id = j.at("id").is_string() ? j.at("id").get<std::string>()
                                      : j.at("id").dump();
      const auto& causal = j.at("causal");
      if (causal.is_boolean()) {
        row.causal = causal.get<bool>();
      } else if (causal.is_number_integer()) {
        row.causal = causal.get<int>() != 0;
      } else {
        throw RowRejected("FormatError", "'causal' must be a boolean");
      }
      if (j.contains("text")) row.text = j.at("text").get<std::string>();
      if (j.contains("relations")) {
        for (const auto& r : j.at("relations")) {
          row.relations.push_back(r.get<std::string>());
        }
      }
    } catch (const RowRejected& e) {
      err = RowError{rows.size(), e.kind(), e.what()};
    } catch (const nlohmann::json::exception& e) {
      err = RowError{rows.size(), "FormatError", e.what()};
    }
    rows.push_back(std::move(row));
    errs.push_back(std::move(err));
  }
  return rows;
}

std::vector<RawRow> ReadCsvRows(std::string_view content,
                                std::vector<std::optional<RowError>>& errs) {
  std::vector<std::vector<std::string>> records = ParseCsv(content);
  std::vector<RawRow> rows;
  if (records.empty()) return rows;
  const std::vector<std::string>& header = records.front();
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    col[std::string(Trim(header[i]))] = i;
  }
  for (const char* required : {"id", "text", "causal"}) {
    if (!col.count(required)) {
      throw FormatError(std::string("CSV header lacks column '") + required +
                        "'");
    }
  }
  for (std::size_t r = 1; r < records.size(); ++r) {
    const std::vector<std::string>& rec = records[r];
    RawRow row;
    std::optional<RowError> err;
    auto cell = [&](const std::string& name) -> std::string {
      auto it = col.find(name);
      if (it == col.end() || it->second >= rec.size()) return "";
      return rec[it->second];
    };
    try {
      if (rec.size() != header.size()) {
        throw RowRejected("FormatError",
                          "expected " + std::to_string(header.size()) +
                              " cells, got " + std::to_string(rec.size()));
      }
      row.id = cell("id");
      std::string text = cell("text");
      if (!text.empty()) row.text = text;
      if (!ParseBool(cell("causal"), row.causal)) {
        throw RowRejected("FormatError", "bad causal value '" +
                                             cell("causal") + "'");
      }
      for (int k = 1; k <= 4; ++k) {
        std::string rel = cell("rel" + std::to_string(k));
        if (!Trim(rel).empty()) row.relations.push_back(rel);
      }
    } catch (const RowRejected& e) {
      err = RowError{rows.size(), e.kind(), e.what()};
    }
    rows.push_back(std::move(row));
    errs.push_back(std::move(err));
  }
  return rows;
}

}  // namespace

LoadResult ParseCorpus(std::string_view content, CorpusFormat format) {
  LoadResult result;
  std::vector<std::optional<RowError>> errs;
  std::vector<RawRow> rows = format == CorpusFormat::kJsonl
                                 ? ReadJsonlRows(content, errs)
                                 : ReadCsvRows(content, errs);
  result.rows = rows.size();
  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (errs[i]) {
      result.rejected.push_back(*errs[i]);
      continue;
    }
    try {
      std::vector<std::string> warnings;
      Sentence s = BuildSentence(rows[i], warnings);
      auto it = by_id.find(s.id);
      if (it == by_id.end()) {
        if (s.relations.size() > kMaxRelationsPerSentence) {
          throw RowRejected("TooManyRelations",
                            std::to_string(s.relations.size()) +
                                " relations in one sentence");
        }
        by_id.emplace(s.id, result.corpus.sentences.size());
        result.corpus.sentences.push_back(std::move(s));
      } else {
        Sentence& merged = result.corpus.sentences[it->second];
        if (merged.text != s.text) {
          throw RowRejected("ConsistencyError",
                            "rows with id '" + s.id +
                                "' disagree on the clean text");
        }
        if (merged.is_causal != s.is_causal) {
          throw RowRejected("ConsistencyError",
                            "rows with id '" + s.id +
                                "' disagree on the causal label");
        }
        if (merged.relations.size() + s.relations.size() >
            kMaxRelationsPerSentence) {
          throw RowRejected("TooManyRelations",
                            "more than 4 relations for id '" + s.id + "'");
        }
        merged.relations.insert(merged.relations.end(), s.relations.begin(),
                                s.relations.end());
      }
      result.warnings.insert(result.warnings.end(), warnings.begin(),
                             warnings.end());
      ++result.accepted_rows;
    } catch (const RowRejected& e) {
      result.rejected.push_back(RowError{i, e.kind(), e.what()});
    }
  }
  return result;
}

LoadResult LoadCorpus(const std::string& path, CorpusFormat format) {
  LoadResult result = ParseCorpus(ReadFile(path), format);
  result.corpus.split_name = path;
  return result;
}

std::string SerializeCorpus(const Corpus& corpus, CorpusFormat format) {
  std::ostringstream out;
  if (format == CorpusFormat::kJsonl) {
    for (const Sentence& s : corpus.sentences) {
      nlohmann::ordered_json j;
      j["id"] = s.id;
      j["causal"] = s.is_causal;
      j["text"] = s.text;
      j["relations"] = nlohmann::ordered_json::array();
      for (std::size_t r = 0; r < s.relations.size(); ++r) {
        j["relations"].push_back(RenderAnnotated(s, r));
      }
      out << j.dump() << '\n';
    }
    return out.str();
  }
  out << "id,text,causal,rel1,rel2,rel3,rel4\n";
  for (const Sentence& s : corpus.sentences) {
    std::vector<std::string> cells = {s.id, s.text, s.is_causal ? "1" : "0"};
    for (std::size_t r = 0; r < kMaxRelationsPerSentence; ++r) {
      cells.push_back(r < s.relations.size() ? RenderAnnotated(s, r) : "");
    }
    out << FormatCsvRecord(cells) << '\n';
  }
  return out.str();
}

void WriteCorpus(const Corpus& corpus, const std::string& path,
                 CorpusFormat format) {
  WriteFile(path, SerializeCorpus(corpus, format));
}

}  // namespace causal
