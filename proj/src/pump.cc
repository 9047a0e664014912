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

#include "kwf/pump.h"

#include <algorithm>
#include <optional>

#include "kwf/error.h"
#include "kwf/text.h"

namespace kwf {
namespace {

constexpr std::string_view kMarker = "**";

std::string MarkSentence(const SentenceSpan& sentence, const SentenceMatch& sm) {
  NormalizedText norm = NormalizeWithMap(sentence.text);
  std::string out;
  std::size_t pos = 0;
  for (const Span& k : sm.match.keywords) {
    std::size_t b = norm.origin[k.begin];
    std::size_t e = norm.origin[k.end - 1] + 1;
    out.append(sentence.text, pos, b - pos);
    out.append(kMarker);
    out.append(sentence.text, b, e - b);
    out.append(kMarker);
    pos = e;
  }
  out.append(sentence.text, pos);
  return out;
}

}  // namespace

PumpSpec::PumpSpec(std::string_view tag, KeyStructure ks) : ks_(std::move(ks)) {
  tag_ = std::string(Trim(tag));
  if (tag_.empty()) throw Error(ErrorCode::kInvalidArgument, "empty pump tag");
  for (char& c : tag_) {
    if (!(IsWordChar(c) || c == '-') || static_cast<unsigned char>(c) >= 0x80) {
      throw Error(ErrorCode::kInvalidArgument, "bad pump tag '" + tag_ + "'");
    }
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
}

std::vector<Span> ScanTags(std::string_view doc, std::string_view tag) {
  const std::string lowered = ToLower(doc);
  const std::string open = "<" + ToLower(tag) + ">";
  const std::string close = "</" + ToLower(tag) + ">";
  std::vector<Span> regions;
  std::size_t pos = 0;
  std::optional<std::size_t> content_begin;
  while (true) {
    std::size_t o = lowered.find(open, pos);
    std::size_t c = lowered.find(close, pos);
    if (o == std::string::npos && c == std::string::npos) break;
    if (o < c) {
      if (content_begin) {
        throw Error(ErrorCode::kNestedSameTag,
                    "<" + std::string(tag) + "> at byte " + std::to_string(o) +
                        " inside an open region");
      }
      content_begin = o + open.size();
      pos = *content_begin;
    } else {
      if (!content_begin) {
        throw Error(ErrorCode::kUnbalancedTag,
                    "</" + std::string(tag) + "> at byte " + std::to_string(c) +
                        " without an open tag");
      }
      regions.push_back({*content_begin, c});
      content_begin.reset();
      pos = c + close.size();
    }
  }
  if (content_begin) {
    throw Error(ErrorCode::kUnbalancedTag,
                "<" + std::string(tag) + "> is never closed");
  }
  return regions;
}

PumpResult Pump(std::string_view doc, const PumpSpec& spec,
                std::string_view doc_id, const PumpOptions& options) {
  PumpResult result;
  auto regions = ScanTags(doc, spec.tag());
  std::vector<std::string> marked_regions;
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const Span region = regions[r];
    std::string_view text = doc.substr(region.begin, region.end - region.begin);

    ExtractOptions xo;
    xo.timestamp = options.timestamp;
    xo.reliability = options.reliability;
    xo.id_prefix = std::string(doc_id) + "#" + std::to_string(r);
    xo.base_offset = region.begin;
    Extraction x = Extract(spec.ks(), text, doc_id, xo);
    std::move(x.elements.begin(), x.elements.end(),
              std::back_inserter(result.elements));

    std::vector<std::string> marked;
    std::size_t cursor = region.begin;
    for (const auto& sentence : Segment(text)) {
      auto sm = MatchBest(spec.ks(), sentence.text);
      if (!sm) continue;
      marked.push_back(MarkSentence(sentence, *sm));
      std::size_t b = region.begin + sentence.begin;
      if (b > cursor) result.discarded_spans.push_back({cursor, b});
      cursor = region.begin + sentence.end;
    }
    if (region.end > cursor) result.discarded_spans.push_back({cursor, region.end});
    if (!marked.empty()) marked_regions.push_back(Join(marked, " "));
  }
  result.marked_text = Join(marked_regions, "\n");
  result.hierarchy = BuildHierarchy(result.elements);
  return result;
}

std::string StripMarkers(std::string_view marked) {
  std::string out;
  out.reserve(marked.size());
  for (std::size_t i = 0; i < marked.size(); ++i) {
    if (marked.substr(i, kMarker.size()) == kMarker) {
      ++i;
      continue;
    }
    out.push_back(marked[i]);
  }
  return out;
}

}  // namespace kwf
