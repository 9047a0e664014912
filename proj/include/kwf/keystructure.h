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

// Sentence patterns and key structures: the grammar of a pseudo-natural
// language. A pattern is written in star notation, e.g.
//
//   if * then * is called *
//
// where each maximal run of `*` is a slot and each maximal non-star run is a
// keyword. A key structure is a validated, ordered set of patterns plus an
// optional combination grammar over their pragmatics tags.

#ifndef KWF_KEYSTRUCTURE_H_
#define KWF_KEYSTRUCTURE_H_

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace kwf {

enum class LayerKind { kCore, kDomain, kJargon };

struct Layer {
  LayerKind kind = LayerKind::kCore;
  std::string qualifier;  // domain name or jargon group; empty for core

  static Layer Core() { return {}; }
  static Layer Domain(std::string name) {
    return {LayerKind::kDomain, std::move(name)};
  }
  static Layer Jargon(std::string group) {
    return {LayerKind::kJargon, std::move(group)};
  }

  bool operator==(const Layer&) const = default;
};

// "core", "domain:<name>", "jargon:<group>".
std::string LayerToString(const Layer& layer);
Layer ParseLayer(std::string_view text);

struct Keyword {
  std::string text;  // whitespace-normalized, case as written
  bool operator==(const Keyword&) const = default;
};

struct Slot {
  int ordinal = 0;  // 1-based, in order of appearance
  bool operator==(const Slot&) const = default;
};

using PatternToken = std::variant<Keyword, Slot>;

// Tags may carry a variant suffix after '~' ("extensional-definition~etc").
// The part before '~' is the semantic construct the pattern expresses; it is
// what extracted elements are labelled with.
std::string_view ConstructOf(std::string_view pragmatics);

class SentencePattern {
 public:
  const std::string& id() const { return id_; }
  const std::vector<PatternToken>& tokens() const { return tokens_; }
  // roles()[k - 1] names slot k.
  const std::vector<std::string>& roles() const { return roles_; }
  const std::string& pragmatics() const { return pragmatics_; }
  std::string_view construct() const { return ConstructOf(pragmatics_); }
  const Layer& layer() const { return layer_; }

  std::size_t slot_count() const { return roles_.size(); }
  std::vector<std::string> keywords() const;
  // Total characters over all keywords; the match tie-breaker.
  std::size_t keyword_weight() const;

  // Star notation with single spaces between tokens.
  std::string Render() const;

  bool operator==(const SentencePattern&) const = default;

 private:
  friend SentencePattern ParsePattern(std::string_view, std::vector<std::string>,
                                      std::string, Layer, std::string);
  SentencePattern() = default;

  std::string id_;
  std::vector<PatternToken> tokens_;
  std::vector<std::string> roles_;
  std::string pragmatics_;
  Layer layer_;
};

// Throws Error{kAdjacentSlots, kNoKeyword, kRoleCountMismatch} for the
// corresponding malformed specs, kInvalidArgument for unusable names.
// An empty id defaults to the pragmatics tag.
SentencePattern ParsePattern(std::string_view spec,
                             std::vector<std::string> roles,
                             std::string pragmatics, Layer layer = Layer::Core(),
                             std::string id = {});

// Sequence constraints over pragmatics tags.
//   "A precedes B": no A may appear after any B.
//   "A next B":     every A is immediately followed by B.
struct SequenceRule {
  enum class Kind { kPrecedes, kNext };
  Kind kind = Kind::kPrecedes;
  std::string first;
  std::string second;
  bool operator==(const SequenceRule&) const = default;
};

struct CombinationGrammar {
  std::vector<SequenceRule> rules;
  bool operator==(const CombinationGrammar&) const = default;
};

// Rules separated by ';', e.g. "concept-definition precedes classification".
CombinationGrammar ParseCombination(std::string_view text);
std::string RenderCombination(const CombinationGrammar& grammar);

struct SequenceCheck {
  bool legal = true;
  std::size_t position = 0;  // first offending index when !legal
};

class KeyStructure {
 public:
  const std::string& name() const { return name_; }
  const std::vector<SentencePattern>& patterns() const { return patterns_; }
  const std::optional<CombinationGrammar>& combination() const {
    return combination_;
  }
  std::vector<LayerKind> layers() const;

  const SentencePattern* FindPattern(std::string_view id) const;
  // True if `tag` names a pattern's pragmatics or its construct.
  bool HasTag(std::string_view tag) const;

  // Throws Error{kUnknownTag} if a tag is not declared.
  SequenceCheck CheckSequence(const std::vector<std::string>& tags) const;

  bool operator==(const KeyStructure&) const = default;

 private:
  friend KeyStructure CompileKeyStructure(std::string, std::vector<SentencePattern>,
                                          std::optional<CombinationGrammar>);
  KeyStructure() = default;

  std::string name_;
  std::vector<SentencePattern> patterns_;
  std::optional<CombinationGrammar> combination_;
};

// Throws Error{kDuplicatePragmatics, kDuplicateId} on normal-form violations,
// kUnknownTag when the grammar names an undeclared tag, kInvalidArgument for
// an empty pattern list.
KeyStructure CompileKeyStructure(
    std::string name, std::vector<SentencePattern> patterns,
    std::optional<CombinationGrammar> combination = std::nullopt);

// Free-function spelling of KeyStructure::CheckSequence.
inline SequenceCheck CheckSequence(const KeyStructure& ks,
                                   const std::vector<std::string>& tags) {
  return ks.CheckSequence(tags);
}

// Key-structure file (.ksl). See docs/formats.md.
KeyStructure ParseKeyStructureFile(std::string_view text,
                                   std::string default_name = "unnamed");
std::string RenderKeyStructureFile(const KeyStructure& ks);
KeyStructure LoadKeyStructure(const std::string& path);

// Spectrum order: a <= b when every pattern of a (by rendered notation,
// case-folded) also occurs in b. Unrelated structures are unordered.
std::partial_ordering CompareGranularity(const KeyStructure& a,
                                         const KeyStructure& b);

}  // namespace kwf

#endif  // KWF_KEYSTRUCTURE_H_
