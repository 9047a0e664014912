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

// Magma (the element store), requirement-driven crystals, renewal and the
// two question forms a crystal answers.
//
// Conflicts: two elements with the same pragmatics and the same key binding
// (see KeyRoleOf) but different bindings otherwise. The more dependable one
// survives, ordered by (reliability, timestamp, position in the log).

#ifndef KWF_CRYSTALLIZER_H_
#define KWF_CRYSTALLIZER_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kwf/element.h"

namespace kwf {

class Magma {
 public:
  // Appends and indexes `elements`. An element with the same content as a
  // stored one is folded into it: its sources are appended and the stored
  // timestamp/reliability become the maxima of the two. Throws
  // Error{kDuplicateId} (nothing ingested) if an id is already stored or
  // repeats within the batch. Returns the number of newly stored elements.
  std::size_t Ingest(std::span<const KnowledgeElement> elements);

  const std::vector<KnowledgeElement>& elements() const { return log_; }
  std::size_t size() const { return log_.size(); }
  const KnowledgeElement* Find(std::string_view id) const;
  // Ids of elements whose key binding folds to `key` (see KeyOf).
  std::vector<std::string> Lookup(std::string_view key) const;
  const std::map<std::string, std::vector<std::string>, std::less<>>& index() const {
    return index_;
  }

 private:
  static std::string ContentKey(const KnowledgeElement& e);

  std::vector<KnowledgeElement> log_;
  std::map<std::string, std::size_t, std::less<>> by_id_;
  std::map<std::string, std::size_t> by_content_;
  std::map<std::string, std::vector<std::string>, std::less<>> index_;
};

// Append-only persistence: `kel_path` holds every ingested element line in
// order and is replayed through Ingest; `idx_path` is a derived
// "<key>\t<id>,<id>..." sidecar rewritten after each append.
Magma LoadMagma(const std::string& kel_path);
void AppendMagma(const std::string& kel_path, const std::string& idx_path,
                 const Magma& after, std::span<const KnowledgeElement> ingested);
std::string RenderMagmaIndex(const Magma& magma);

struct Conflict {
  std::string first;   // element ids, first < second in input order
  std::string second;
  bool operator==(const Conflict&) const = default;
};

std::vector<Conflict> DetectConflicts(std::span<const KnowledgeElement> elements);
inline std::vector<Conflict> DetectConflicts(const Magma& magma) {
  return DetectConflicts(magma.elements());
}

struct SubjectFilter {
  enum class Kind { kExact, kPrefix };
  Kind kind = Kind::kExact;
  std::string text;  // compared case-insensitively against the key binding
  bool operator==(const SubjectFilter&) const = default;
};

// An element is admitted when it passes every non-empty criterion; within a
// criterion any listed value suffices.
struct Requirement {
  std::vector<std::string> pragmatics;
  std::vector<SubjectFilter> subjects;
  std::vector<std::string> sources;  // document ids

  bool empty() const {
    return pragmatics.empty() && subjects.empty() && sources.empty();
  }
  bool Admits(const KnowledgeElement& e) const;
  bool operator==(const Requirement&) const = default;
};

struct Crystal {
  std::string domain;
  std::vector<KnowledgeElement> elements;
  Requirement requirement;
  std::int64_t formed_at = 0;
  std::uint64_t version = 1;

  bool operator==(const Crystal&) const = default;
};

// Keeps one survivor per (pragmatics, key) group, in input order.
std::vector<KnowledgeElement> ResolveConflicts(
    std::span<const KnowledgeElement> elements);

// Throws Error{kInvalidArgument} for an empty requirement or a domain that
// is not a single token, Error{kEmptyCrystal} if nothing passes.
Crystal Crystallize(const Magma& magma, const Requirement& req,
                    std::string domain, std::int64_t formed_at);

// Knowledge kidney. Throws Error{kRequirementViolation} if a new element is
// outside the crystal's requirement, Error{kDuplicateId} if a new element
// reuses a stored id for different content. The version moves only when
// the element set changes.
Crystal Renew(const Crystal& crystal, std::span<const KnowledgeElement> fresh,
              std::int64_t now);

// Elements whose `concept` or `subject` binding equals `term`, ignoring
// case and spacing.
std::vector<KnowledgeElement> QueryDefine(const Crystal& crystal,
                                          std::string_view term);

// Concepts of definitions (elements binding condition, father_concept and
// concept) with the given condition and father concept, in stored order.
std::vector<std::string> QueryName(const Crystal& crystal,
                                   std::string_view condition,
                                   std::string_view father);

// "crystal <domain> <version> <formed_at>", a "require" line, then element
// lines. See docs/formats.md.
std::string SerializeCrystal(const Crystal& crystal);
Crystal ParseCrystal(std::string_view text);

std::string RenderRequirement(const Requirement& req);
Requirement ParseRequirementLine(std::string_view line);

}  // namespace kwf

#endif  // KWF_CRYSTALLIZER_H_
