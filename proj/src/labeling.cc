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

#include "causal/labeling.h"

#include <algorithm>
#include <limits>
#include <set>

#include "causal/errors.h"

namespace causal {

namespace {

constexpr std::array<Role, kNumRoles> kRoles = {Role::kCause, Role::kEffect,
                                                Role::kSignal};

char PrefixChar(Bilou b) {
  switch (b) {
    case Bilou::kO:
      return 'O';
    case Bilou::kB:
      return 'B';
    case Bilou::kI:
      return 'I';
    case Bilou::kL:
      return 'L';
    case Bilou::kU:
      return 'U';
  }
  return '?';
}

// Maximal role spans of a valid or invalid layer, read leniently.
std::vector<Span> ReadSpans(const LayerSequence& tags) {
  std::vector<Span> spans;
  std::optional<Span> open;
  auto close = [&](std::size_t end) {
    if (open) {
      open->end_tok = end;
      spans.push_back(*open);
      open.reset();
    }
  };
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const LayerTag& t = tags[i];
    switch (t.prefix) {
      case Bilou::kO:
        close(i);
        break;
      case Bilou::kB:
        close(i);
        open = Span{i, i, t.role};
        break;
      case Bilou::kI:
        if (!open || open->role != t.role) {
          close(i);
          open = Span{i, i, t.role};
        }
        break;
      case Bilou::kL:
        if (open && open->role == t.role) {
          close(i + 1);
        } else {
          close(i);
          spans.push_back(Span{i, i + 1, t.role});
        }
        break;
      case Bilou::kU:
        close(i);
        spans.push_back(Span{i, i + 1, t.role});
        break;
    }
  }
  close(tags.size());
  return spans;
}

void WriteSpan(LayerSequence& tags, const Span& span) {
  if (span.size() == 1) {
    tags[span.start_tok] = {Bilou::kU, span.role};
    return;
  }
  tags[span.start_tok] = {Bilou::kB, span.role};
  for (std::size_t i = span.start_tok + 1; i + 1 < span.end_tok; ++i) {
    tags[i] = {Bilou::kI, span.role};
  }
  tags[span.end_tok - 1] = {Bilou::kL, span.role};
}

}  // namespace

std::string LayerTag::ToString() const {
  if (prefix == Bilou::kO) return "O";
  std::string out(1, PrefixChar(prefix));
  out += '-';
  out += RoleTag(role);
  return out;
}

std::optional<LayerTag> LayerTag::Parse(std::string_view text) {
  if (text == "O") return LayerTag::Outside();
  if (text.size() != 6 || text[1] != '-') return std::nullopt;
  LayerTag tag;
  switch (text[0]) {
    case 'B':
      tag.prefix = Bilou::kB;
      break;
    case 'I':
      tag.prefix = Bilou::kI;
      break;
    case 'L':
      tag.prefix = Bilou::kL;
      break;
    case 'U':
      tag.prefix = Bilou::kU;
      break;
    default:
      return std::nullopt;
  }
  std::string_view role = text.substr(2);
  for (Role r : kRoles) {
    if (RoleTag(r) == role) {
      tag.role = r;
      return tag;
    }
  }
  return std::nullopt;
}

std::vector<LayerTag> AllLayerTags() {
  std::vector<LayerTag> tags = {LayerTag::Outside()};
  for (Role r : kRoles) {
    for (Bilou b : {Bilou::kB, Bilou::kI, Bilou::kL, Bilou::kU}) {
      tags.push_back({b, r});
    }
  }
  return tags;
}

std::string StackedTag::ToString() const {
  std::string out;
  for (std::size_t k = 0; k < kNumLayers; ++k) {
    if (k) out += '|';
    out += layers[k].ToString();
  }
  return out;
}

std::optional<StackedTag> StackedTag::Parse(std::string_view text) {
  StackedTag tag;
  std::size_t pos = 0;
  for (std::size_t k = 0; k < kNumLayers; ++k) {
    std::size_t bar = text.find('|', pos);
    bool last = k + 1 == kNumLayers;
    if (last != (bar == std::string_view::npos)) return std::nullopt;
    std::string_view part =
        text.substr(pos, last ? std::string_view::npos : bar - pos);
    auto layer = LayerTag::Parse(part);
    if (!layer) return std::nullopt;
    tag.layers[k] = *layer;
    pos = bar + 1;
  }
  return tag;
}

LayerSequence EncodeRelation(std::size_t num_tokens,
                             const CausalRelation& relation) {
  std::vector<Span> spans = {relation.cause, relation.effect};
  if (relation.signal) spans.push_back(*relation.signal);
  for (const Span& s : spans) {
    if (s.start_tok >= s.end_tok || s.end_tok > num_tokens) {
      throw IndexOutOfRange(std::string(RoleName(s.role)) + " span [" +
                            std::to_string(s.start_tok) + "," +
                            std::to_string(s.end_tok) + ") outside " +
                            std::to_string(num_tokens) + " tokens");
    }
  }
  for (std::size_t i = 0; i < spans.size(); ++i) {
    for (std::size_t j = i + 1; j < spans.size(); ++j) {
      if (spans[i].Overlaps(spans[j])) {
        throw OverlapError(std::string(RoleName(spans[i].role)) + " and " +
                           std::string(RoleName(spans[j].role)) +
                           " spans overlap");
      }
    }
  }
  LayerSequence tags(num_tokens, LayerTag::Outside());
  for (const Span& s : spans) WriteSpan(tags, s);
  return tags;
}

std::vector<CausalRelation> CanonicalOrder(
    const std::vector<CausalRelation>& relations) {
  std::vector<CausalRelation> out = relations;
  static constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();
  std::stable_sort(out.begin(), out.end(),
                   [](const CausalRelation& a, const CausalRelation& b) {
                     auto key = [](const CausalRelation& r) {
                       return std::make_tuple(
                           r.cause.start_tok, r.effect.start_tok,
                           r.signal ? r.signal->start_tok : kAbsent);
                     };
                     return key(a) < key(b);
                   });
  return out;
}

StackedTagSequence StackLayers(std::size_t num_tokens,
                               const std::vector<CausalRelation>& relations) {
  if (relations.size() > kNumLayers) {
    throw TooManyRelations(std::to_string(relations.size()) +
                           " relations for " + std::to_string(kNumLayers) +
                           " layers");
  }
  StackedTagSequence out(num_tokens);
  for (std::size_t k = 0; k < relations.size(); ++k) {
    LayerSequence layer = EncodeRelation(num_tokens, relations[k]);
    for (std::size_t i = 0; i < num_tokens; ++i) out[i].layers[k] = layer[i];
  }
  return out;
}

StackedTagSequence StackSentence(const Sentence& sentence) {
  std::vector<CausalRelation> ordered = CanonicalOrder(sentence.relations);
  if (ordered.size() > kNumLayers) ordered.resize(kNumLayers);
  return StackLayers(sentence.tokens.size(), ordered);
}

bool IsValidLayer(const LayerSequence& tags) {
  std::optional<Role> open;
  for (const LayerTag& t : tags) {
    switch (t.prefix) {
      case Bilou::kO:
      case Bilou::kB:
      case Bilou::kU:
        if (open) return false;
        if (t.prefix == Bilou::kB) open = t.role;
        break;
      case Bilou::kI:
      case Bilou::kL:
        if (!open || *open != t.role) return false;
        if (t.prefix == Bilou::kL) open.reset();
        break;
    }
  }
  return !open;
}

LayerSequence RepairLayer(const LayerSequence& tags) {
  LayerSequence out(tags.size(), LayerTag::Outside());
  for (const Span& s : ReadSpans(tags)) WriteSpan(out, s);
  return out;
}

LayerSequence ExtractLayer(const StackedTagSequence& tags, std::size_t layer) {
  LayerSequence out;
  out.reserve(tags.size());
  for (const StackedTag& t : tags) out.push_back(t.layers.at(layer));
  return out;
}

std::vector<CausalRelation> DecodeStacked(const StackedTagSequence& tags,
                                          DecodeReport* report) {
  std::vector<CausalRelation> relations;
  for (std::size_t k = 0; k < kNumLayers; ++k) {
    LayerSequence layer = ExtractLayer(tags, k);
    if (!IsValidLayer(layer)) {
      if (report) report->invalid_layers.push_back(k);
      continue;
    }
    std::array<std::optional<Span>, kNumRoles> first;
    bool any = false;
    for (const Span& s : ReadSpans(layer)) {
      any = true;
      auto& slot = first[static_cast<int>(s.role)];
      if (!slot) slot = s;
    }
    if (!first[0] || !first[1]) {
      if (any && report) report->dropped_layers.push_back(k);
      continue;
    }
    relations.push_back(CausalRelation{*first[0], *first[1], first[2]});
  }
  return relations;
}

TruncationResult TruncateRelations(const Sentence& sentence) {
  TruncationResult out{sentence, {}};
  out.sentence.relations = CanonicalOrder(sentence.relations);
  while (out.sentence.relations.size() > kNumLayers) {
    out.warnings.push_back(
        "sentence '" + sentence.id + "': dropped relation " +
        std::to_string(out.sentence.relations.size() - 1) +
        " (more than three relations)");
    out.sentence.relations.pop_back();
  }
  std::reverse(out.warnings.begin(), out.warnings.end());
  return out;
}

LabelVocabulary::LabelVocabulary() : LabelVocabulary(std::vector<std::string>{}) {}

LabelVocabulary::LabelVocabulary(std::vector<std::string> labels) {
  std::set<std::string> unique(labels.begin(), labels.end());
  unique.insert("O|O|O");
  labels_.assign(unique.begin(), unique.end());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    auto tag = StackedTag::Parse(labels_[i]);
    if (!tag) throw UnknownLabel("not a stacked tag: '" + labels_[i] + "'");
    tags_.push_back(*tag);
    index_.emplace(labels_[i], static_cast<int>(i));
  }
}

std::optional<int> LabelVocabulary::Find(std::string_view label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

LabelVocabulary BuildVocabulary(const std::vector<const Corpus*>& corpora) {
  std::set<std::string> seen;
  for (const Corpus* corpus : corpora) {
    for (const Sentence& s : corpus->sentences) {
      for (const StackedTag& t : StackSentence(s)) seen.insert(t.ToString());
    }
  }
  return LabelVocabulary(std::vector<std::string>(seen.begin(), seen.end()));
}

}  // namespace causal
