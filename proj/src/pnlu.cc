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

#include "kwf/pnlu.h"

#include <variant>

#include "kwf/text.h"

namespace kwf {
namespace {

// Offsets of `kw` in `lowered` that sit on word boundaries.
std::vector<std::size_t> Occurrences(std::string_view lowered,
                                     std::string_view kw) {
  std::vector<std::size_t> out;
  if (kw.empty()) return out;
  bool word_start = IsWordChar(kw.front());
  bool word_end = IsWordChar(kw.back());
  for (std::size_t p = lowered.find(kw); p != std::string_view::npos;
       p = lowered.find(kw, p + 1)) {
    std::size_t e = p + kw.size();
    bool left = p == 0 || !word_start || !IsWordChar(lowered[p - 1]);
    bool right = e == lowered.size() || !word_end || !IsWordChar(lowered[e]);
    if (left && right) out.push_back(p);
  }
  return out;
}

Span TrimSpan(std::string_view s, std::size_t b, std::size_t e) {
  while (b < e && IsSpace(s[b])) ++b;
  while (e > b && IsSpace(s[e - 1])) --e;
  return {b, e};
}

}  // namespace

std::vector<SentenceSpan> Segment(std::string_view text) {
  std::vector<SentenceSpan> out;
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    while (i < n && IsSpace(text[i])) ++i;
    if (i == n) break;
    std::size_t begin = i;
    std::size_t end = n;
    while (i < n) {
      char c = text[i];
      if (IsTerminator(c) && (i + 1 == n || IsSpace(text[i + 1]))) {
        end = i + 1;
        ++i;
        break;
      }
      if (c == '\n') {
        // A blank line (only spaces/tabs between two newlines) ends the
        // sentence at the last non-space byte before it.
        std::size_t j = i + 1;
        while (j < n && (text[j] == ' ' || text[j] == '\t' || text[j] == '\r')) ++j;
        if (j < n && text[j] == '\n') {
          end = i;
          while (end > begin && IsSpace(text[end - 1])) --end;
          i = j;
          break;
        }
      }
      ++i;
    }
    if (end == n) {
      while (end > begin && IsSpace(text[end - 1])) --end;
    }
    out.push_back({begin, end, std::string(text.substr(begin, end - begin))});
  }
  return out;
}

std::optional<PatternMatch> MatchPattern(const SentencePattern& pattern,
                                         std::string_view s) {
  const std::size_t n = s.size();
  if (n == 0) return std::nullopt;
  const std::string lowered = ToLower(s);
  const auto& tokens = pattern.tokens();
  const bool lead = std::holds_alternative<Slot>(tokens.front());
  const bool trail = std::holds_alternative<Slot>(tokens.back());
  const bool term = IsTerminator(s[n - 1]);
  const std::size_t slot_end = term ? n - 1 : n;

  std::vector<std::string> kws;
  for (const auto& k : pattern.keywords()) kws.push_back(ToLower(k));
  const std::size_t m = kws.size();

  std::vector<std::size_t> nonspace(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    nonspace[i + 1] = nonspace[i] + (IsSpace(s[i]) ? 0 : 1);
  }
  auto has_text = [&](std::size_t b, std::size_t e) {
    return b < e && nonspace[e] > nonspace[b];
  };

  std::vector<std::vector<std::size_t>> occ(m);
  for (std::size_t i = 0; i < m; ++i) {
    occ[i] = Occurrences(lowered, kws[i]);
    if (occ[i].empty()) return std::nullopt;
  }

  auto right_ok = [&](std::size_t end) {
    return trail ? has_text(end, slot_end) : (end == n || (term && end == n - 1));
  };

  // latest[i]: the latest start of keyword i from which keywords i..m-1 can
  // still be placed. Every earlier occurrence is then feasible too.
  std::vector<std::size_t> latest(m);
  {
    bool found = false;
    for (auto it = occ[m - 1].rbegin(); it != occ[m - 1].rend(); ++it) {
      if (right_ok(*it + kws[m - 1].size())) {
        latest[m - 1] = *it;
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
  }
  for (std::size_t i = m - 1; i-- > 0;) {
    bool found = false;
    for (auto it = occ[i].rbegin(); it != occ[i].rend(); ++it) {
      std::size_t e = *it + kws[i].size();
      if (e <= latest[i + 1] && has_text(e, latest[i + 1])) {
        latest[i] = *it;
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
  }

  PatternMatch result;
  std::size_t prev_end = 0;
  for (std::size_t i = 0; i < m; ++i) {
    bool found = false;
    for (std::size_t p : occ[i]) {
      if (p > latest[i]) break;
      bool left = i == 0 ? (lead ? has_text(0, p) : p == 0)
                         : (p >= prev_end && has_text(prev_end, p));
      if (!left) continue;
      if (i == m - 1 && !right_ok(p + kws[i].size())) continue;
      result.keywords.push_back({p, p + kws[i].size()});
      prev_end = p + kws[i].size();
      found = true;
      break;
    }
    if (!found) return std::nullopt;
  }

  if (lead) result.slots.push_back(TrimSpan(s, 0, result.keywords.front().begin));
  for (std::size_t i = 0; i + 1 < m; ++i) {
    result.slots.push_back(
        TrimSpan(s, result.keywords[i].end, result.keywords[i + 1].begin));
  }
  if (trail) result.slots.push_back(TrimSpan(s, result.keywords.back().end, slot_end));
  return result;
}

std::optional<SentenceMatch> MatchBest(const KeyStructure& ks,
                                       std::string_view sentence) {
  std::optional<SentenceMatch> best;
  std::string normalized = NormalizeSpace(sentence);
  for (const auto& p : ks.patterns()) {
    if (best && p.keyword_weight() <= best->pattern->keyword_weight()) continue;
    if (auto m = MatchPattern(p, normalized)) {
      best = SentenceMatch{&p, normalized, std::move(*m)};
    }
  }
  return best;
}

namespace {

KnowledgeElement ElementFor(const SentenceMatch& sm) {
  KnowledgeElement e;
  e.pragmatics = std::string(sm.pattern->construct());
  e.pattern_id = sm.pattern->id();
  const auto& roles = sm.pattern->roles();
  for (std::size_t k = 0; k < roles.size(); ++k) {
    const Span& sp = sm.match.slots[k];
    e.bindings.push_back(
        {roles[k], sm.normalized.substr(sp.begin, sp.end - sp.begin)});
  }
  return e;
}

}  // namespace

std::optional<KnowledgeElement> MatchSentence(const KeyStructure& ks,
                                              std::string_view sentence) {
  auto sm = MatchBest(ks, sentence);
  if (!sm) return std::nullopt;
  return ElementFor(*sm);
}

SemanticHierarchy BuildHierarchy(std::span<const KnowledgeElement> elements) {
  SemanticHierarchy h;
  for (const auto& e : elements) {
    HierarchyGroup* group = nullptr;
    for (auto& g : h.groups) {
      if (g.pragmatics == e.pragmatics) {
        group = &g;
        break;
      }
    }
    if (!group) {
      h.groups.push_back({e.pragmatics, {}});
      group = &h.groups.back();
    }
    group->elements.push_back(e);
  }
  return h;
}

std::string RenderHierarchy(const SemanticHierarchy& hierarchy) {
  std::string out;
  for (const auto& g : hierarchy.groups) {
    out += "group " + g.pragmatics + " " + std::to_string(g.elements.size()) + "\n";
    for (const auto& e : g.elements) {
      const std::string* key = KeyBinding(e);
      out += "  " + e.id + " " + (key ? *key : std::string()) + "\n";
    }
  }
  return out;
}

Extraction Extract(const KeyStructure& ks, std::string_view text,
                   std::string_view doc_id, const ExtractOptions& options) {
  Extraction out;
  const std::string prefix =
      options.id_prefix.empty() ? std::string(doc_id) : options.id_prefix;
  auto sentences = Segment(text);
  for (std::size_t k = 0; k < sentences.size(); ++k) {
    auto sm = MatchBest(ks, sentences[k].text);
    if (!sm) continue;
    KnowledgeElement e = ElementFor(*sm);
    e.id = prefix + "#" + std::to_string(k);
    e.sources.push_back({std::string(doc_id), k,
                         options.base_offset + sentences[k].begin,
                         options.base_offset + sentences[k].end});
    e.timestamp = options.timestamp;
    e.reliability = options.reliability;
    out.elements.push_back(std::move(e));
  }
  out.hierarchy = BuildHierarchy(out.elements);
  return out;
}

}  // namespace kwf
