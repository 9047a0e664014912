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

// Knowledge middleware that runs over crystals and packages without ever
// changing them: views, frame <-> triple transformation, summaries.

#ifndef KWF_MIDDLEWARE_H_
#define KWF_MIDDLEWARE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kwf/crystallizer.h"
#include "kwf/keystructure.h"
#include "kwf/knowware.h"

namespace kwf {

// Unset criteria do not filter. Subject filters are conjunctive and test the
// key binding.
struct ViewSpec {
  std::optional<std::set<std::string>> pragmatics;
  std::optional<std::set<std::string>> roles;
  std::vector<SubjectFilter> subjects;

  bool empty() const { return !pragmatics && !roles && subjects.empty(); }
  bool operator==(const ViewSpec&) const = default;
};

// The view that applying `a` then `b` amounts to.
ViewSpec Conjoin(const ViewSpec& a, const ViewSpec& b);

// Keeps elements whose pragmatics and key binding pass; drops bindings for
// roles outside `roles`, and the element itself if its key role is dropped.
// Throws Error{kInvalidArgument} for an empty view.
Crystal ApplyView(const Crystal& source, const ViewSpec& view);
// Throws Error{kVerifyFailed} unless the package verifies.
Crystal ApplyView(const KnowwarePackage& source, const ViewSpec& view);

// `view <criterion> :: <values>` lines; see docs/formats.md.
ViewSpec ParseViewFile(std::string_view text);
std::string RenderViewFile(const ViewSpec& view);

struct Triple {
  std::string subject;
  std::string relation;  // "<pragmatics>/<role>"
  std::string object;
  bool operator==(const Triple&) const = default;
};

// One triple per non-key binding, in binding order. Throws
// Error{kNoKeyRole} for an element without bindings.
std::vector<Triple> ToTriples(const KnowledgeElement& e);

// pragmatics -> name of the role holding the element's key.
using KeyRoleTable = std::map<std::string, std::string, std::less<>>;
KeyRoleTable KeyRolesOf(const KeyStructure& ks);

// Rebuilds an element (no provenance) with the key role first. The key role
// comes from `key_roles`, or is "subject" for pragmatics not listed.
// Throws Error{kMixedSubjects} for an empty list or differing subjects,
// Error{kMixedPragmatics} for differing relation prefixes.
KnowledgeElement FromTriples(std::span<const Triple> triples,
                             const KeyRoleTable& key_roles = {});

// Tab-separated "subject\trelation\tobject" lines.
std::string RenderTriplesTsv(std::span<const Triple> triples);
std::vector<Triple> ParseTriplesTsv(std::string_view text);

struct Summary {
  std::size_t elements = 0;
  std::size_t groups = 0;
  std::size_t subjects = 0;  // distinct folded key bindings
  std::map<std::string, std::size_t> counts;
  std::uint64_t version = 0;
  std::int64_t formed_at = 0;
  bool operator==(const Summary&) const = default;
};

Summary Summarize(const Crystal& crystal);
std::string RenderSummary(const Summary& summary);

}  // namespace kwf

#endif  // KWF_MIDDLEWARE_H_
