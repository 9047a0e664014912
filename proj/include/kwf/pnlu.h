/* Copyright 2026 The kwf Authors.

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       https://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License. */

// Sentence segmentation and key-structure matching.
//
// Matching is anchored at both ends of a whitespace-normalized sentence:
// keywords are found case-insensitively at word boundaries, every slot must
// capture at least one non-space character, a leading keyword must start the
// sentence and a trailing keyword must end it (optionally followed by the
// terminator). Among all placements satisfying that, the lexicographically
// earliest one is chosen, which gives every slot but the last its minimal
// capture.

#ifndef KWF_PNLU_H_
#define KWF_PNLU_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kwf/element.h"
#include "kwf/keystructure.h"

namespace kwf {

struct SentenceSpan {
  std::size_t begin = 0;  // byte range in the segmented text,
  std::size_t end = 0;    // terminator included
  std::string text;       // raw bytes of that range

  bool operator==(const SentenceSpan&) const = default;
};

// Splits at '.', '?' or '!' followed by whitespace or end of text, and at
// blank lines. "etc." ends a sentence like any other period.
std::vector<SentenceSpan> Segment(std::string_view text);

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool operator==(const Span&) const = default;
};

struct PatternMatch {
  std::vector<Span> keywords;  // one per keyword, in order
  std::vector<Span> slots;     // trimmed captures, slot order
};

// `sentence` must already be whitespace-normalized (see NormalizeSpace).
std::optional<PatternMatch> MatchPattern(const SentencePattern& pattern,
                                         std::string_view sentence);

struct SentenceMatch {
  const SentencePattern* pattern = nullptr;
  std::string normalized;
  PatternMatch match;
};

// Best pattern for a raw sentence: greatest keyword_weight, then declaration
// order.
std::optional<SentenceMatch> MatchBest(const KeyStructure& ks,
                                       std::string_view sentence);

// Element for the best match; id and sources are left empty.
std::optional<KnowledgeElement> MatchSentence(const KeyStructure& ks,
                                              std::string_view sentence);

struct HierarchyGroup {
  std::string pragmatics;
  std::vector<KnowledgeElement> elements;
  bool operator==(const HierarchyGroup&) const = default;
};

// Groups keyed by pragmatics in order of first appearance.
struct SemanticHierarchy {
  std::vector<HierarchyGroup> groups;
  bool operator==(const SemanticHierarchy&) const = default;
};

SemanticHierarchy BuildHierarchy(std::span<const KnowledgeElement> elements);
std::string RenderHierarchy(const SemanticHierarchy& hierarchy);

struct ExtractOptions {
  std::int64_t timestamp = 0;
  int reliability = 0;
  // Element ids are "<id_prefix>#<sentence>"; defaults to the doc id.
  std::string id_prefix;
  // Added to every sentence byte range, for text cut out of a larger doc.
  std::size_t base_offset = 0;
};

struct Extraction {
  std::vector<KnowledgeElement> elements;
  SemanticHierarchy hierarchy;
};

Extraction Extract(const KeyStructure& ks, std::string_view text,
                   std::string_view doc_id, const ExtractOptions& options = {});

}  // namespace kwf

#endif  // KWF_PNLU_H_
