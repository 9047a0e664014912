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

// Knowledge pump: locates <TAG>...</TAG> regions of a document and runs a
// key structure over each of them. Sentences matching a pattern are kept,
// their keyword runs wrapped in `**`, and decomposed into elements; all
// other region content is discarded.

#ifndef KWF_PUMP_H_
#define KWF_PUMP_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "kwf/keystructure.h"
#include "kwf/pnlu.h"

namespace kwf {

class PumpSpec {
 public:
  // Tag is upper-cased; throws Error{kInvalidArgument} if empty or not
  // alphanumeric/'_'/'-'.
  PumpSpec(std::string_view tag, KeyStructure ks);

  const std::string& tag() const { return tag_; }
  const KeyStructure& ks() const { return ks_; }

 private:
  std::string tag_;
  KeyStructure ks_;
};

// Tag names are compared case-insensitively. Throws Error{kUnbalancedTag}
// for an unmatched open or close tag and Error{kNestedSameTag} for an open
// tag inside an open region of the same name.
std::vector<Span> ScanTags(std::string_view doc, std::string_view tag);

struct PumpResult {
  // Kept sentences, keyword runs wrapped in `**`; sentences of one region
  // joined by a space, regions separated by '\n'.
  std::string marked_text;
  std::vector<KnowledgeElement> elements;
  SemanticHierarchy hierarchy;
  // Everything inside the regions that is not a kept sentence, as maximal
  // byte ranges of the document.
  std::vector<Span> discarded_spans;
};

struct PumpOptions {
  std::int64_t timestamp = 0;
  int reliability = 0;
};

// Element ids are "<doc_id>#<region>#<sentence>", both 0-based.
PumpResult Pump(std::string_view doc, const PumpSpec& spec,
                std::string_view doc_id, const PumpOptions& options = {});

// Inverse of the marking, for checking marked text against the source.
std::string StripMarkers(std::string_view marked);

}  // namespace kwf

#endif  // KWF_PUMP_H_
