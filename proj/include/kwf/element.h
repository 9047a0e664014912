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

#ifndef KWF_ELEMENT_H_
#define KWF_ELEMENT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kwf {

struct Source {
  std::string doc;
  std::size_t sentence = 0;
  // Byte range of the sentence in the document.
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const Source&) const = default;
};

struct Binding {
  std::string role;
  std::string text;

  bool operator==(const Binding&) const = default;
};

// One matched sentence decomposed into role -> text bindings.
struct KnowledgeElement {
  std::string id;
  std::string pragmatics;
  std::string pattern_id;
  std::vector<Binding> bindings;  // slot order
  // Where the content was seen. Ingest appends to this when it collapses a
  // duplicate; the first entry is the original extraction site.
  std::vector<Source> sources;
  std::int64_t timestamp = 0;
  int reliability = 0;

  const std::string* Find(std::string_view role) const;

  bool operator==(const KnowledgeElement&) const = default;
};

// Same pragmatics and the same role -> text map, ignoring order and
// provenance (id, pattern id, sources, timestamp, reliability).
bool SameContent(const KnowledgeElement& a, const KnowledgeElement& b);

// "concept" if bound, else "subject", else the first role; empty when the
// element has no bindings.
std::string KeyRoleOf(const KnowledgeElement& e);
// Value of the key role, or nullptr.
const std::string* KeyBinding(const KnowledgeElement& e);
// Case- and space-folded key binding used for indexing.
std::string KeyOf(const KnowledgeElement& e);

// Element line format (.kel); see docs/formats.md.
std::string SerializeElement(const KnowledgeElement& e);
KnowledgeElement ParseElementLine(std::string_view line);

// One element per line, each terminated by '\n'.
std::string SerializeElements(std::span<const KnowledgeElement> elements);
// Skips blank lines and lines starting with '#'.
std::vector<KnowledgeElement> ParseElements(std::string_view text);

// Parses the `| key=«value»` field list that follows a record head. Shared
// with the crystal requirement line.
struct Field {
  std::string key;
  std::string value;
};
std::vector<Field> ParseFields(std::string_view text);
std::string RenderField(std::string_view key, std::string_view value);

}  // namespace kwf

#endif  // KWF_ELEMENT_H_
