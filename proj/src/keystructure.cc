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

#include "kwf/keystructure.h"

#include <algorithm>
#include <filesystem>
#include <set>

#include "kwf/error.h"
#include "kwf/text.h"

namespace kwf {
namespace {

bool IsNameChar(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.' ||
         c == '~';
}

void CheckName(std::string_view what, std::string_view name) {
  bool ok = !name.empty() && std::all_of(name.begin(), name.end(), IsNameChar);
  if (!ok) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " '" + std::string(name) +
                    "' must be nonempty and use only [A-Za-z0-9_.~-]");
  }
}

bool TagMatches(const SentencePattern& p, std::string_view tag) {
  return p.pragmatics() == tag || p.construct() == tag;
}

}  // namespace

std::string LayerToString(const Layer& layer) {
  switch (layer.kind) {
    case LayerKind::kCore: return "core";
    case LayerKind::kDomain: return "domain:" + layer.qualifier;
    case LayerKind::kJargon: return "jargon:" + layer.qualifier;
  }
  return "core";
}

Layer ParseLayer(std::string_view text) {
  if (text == "core") return Layer::Core();
  auto colon = text.find(':');
  if (colon != std::string_view::npos && colon + 1 < text.size()) {
    auto head = text.substr(0, colon);
    std::string qual(text.substr(colon + 1));
    if (head == "domain") return Layer::Domain(std::move(qual));
    if (head == "jargon") return Layer::Jargon(std::move(qual));
  }
  throw Error(ErrorCode::kParse, "bad layer '" + std::string(text) + "'");
}

std::string_view ConstructOf(std::string_view pragmatics) {
  return pragmatics.substr(0, pragmatics.find('~'));
}

std::vector<std::string> SentencePattern::keywords() const {
  std::vector<std::string> out;
  for (const auto& t : tokens_) {
    if (auto* kw = std::get_if<Keyword>(&t)) out.push_back(kw->text);
  }
  return out;
}

std::size_t SentencePattern::keyword_weight() const {
  std::size_t w = 0;
  for (const auto& t : tokens_) {
    if (auto* kw = std::get_if<Keyword>(&t)) w += kw->text.size();
  }
  return w;
}

std::string SentencePattern::Render() const {
  std::vector<std::string> parts;
  for (const auto& t : tokens_) {
    if (auto* kw = std::get_if<Keyword>(&t)) {
      parts.push_back(kw->text);
    } else {
      parts.emplace_back("*");
    }
  }
  return Join(parts, " ");
}

SentencePattern ParsePattern(std::string_view spec,
                             std::vector<std::string> roles,
                             std::string pragmatics, Layer layer,
                             std::string id) {
  CheckName("pragmatics", pragmatics);
  if (id.empty()) id = pragmatics;
  CheckName("pattern id", id);

  SentencePattern p;
  std::size_t i = 0;
  bool any_keyword = false;
  bool prev_slot = false;
  int ordinal = 0;
  while (i < spec.size()) {
    if (spec[i] == '*') {
      while (i < spec.size() && spec[i] == '*') ++i;
      if (prev_slot) {
        // Only whitespace separated this run from the previous slot.
        throw Error(ErrorCode::kAdjacentSlots,
                    "two slots with no keyword between in '" +
                        std::string(spec) + "'");
      }
      p.tokens_.push_back(Slot{++ordinal});
      prev_slot = true;
      continue;
    }
    std::size_t b = i;
    while (i < spec.size() && spec[i] != '*') ++i;
    std::string kw = NormalizeSpace(spec.substr(b, i - b));
    if (kw.empty()) continue;
    p.tokens_.push_back(Keyword{std::move(kw)});
    any_keyword = true;
    prev_slot = false;
  }
  if (!any_keyword) {
    throw Error(ErrorCode::kNoKeyword,
                "pattern '" + std::string(spec) + "' has no keyword");
  }
  if (static_cast<std::size_t>(ordinal) != roles.size()) {
    throw Error(ErrorCode::kRoleCountMismatch,
                "pattern '" + std::string(spec) + "' has " +
                    std::to_string(ordinal) + " slots but " +
                    std::to_string(roles.size()) + " roles");
  }
  std::set<std::string> seen;
  for (const auto& r : roles) {
    CheckName("role", r);
    if (!seen.insert(r).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate role '" + r + "'");
    }
  }
  p.id_ = std::move(id);
  p.roles_ = std::move(roles);
  p.pragmatics_ = std::move(pragmatics);
  p.layer_ = std::move(layer);
  return p;
}

CombinationGrammar ParseCombination(std::string_view text) {
  CombinationGrammar g;
  for (const auto& clause : Split(text, ';')) {
    auto words = SplitWhitespace(clause);
    if (words.empty()) continue;
    if (words.size() != 3 || (words[1] != "precedes" && words[1] != "next")) {
      throw Error(ErrorCode::kParse,
                  "bad combination rule '" + std::string(Trim(clause)) +
                      "' (expected '<tag> precedes|next <tag>')");
    }
    g.rules.push_back({words[1] == "precedes" ? SequenceRule::Kind::kPrecedes
                                              : SequenceRule::Kind::kNext,
                       words[0], words[2]});
  }
  return g;
}

std::string RenderCombination(const CombinationGrammar& grammar) {
  std::vector<std::string> parts;
  for (const auto& r : grammar.rules) {
    parts.push_back(r.first +
                    (r.kind == SequenceRule::Kind::kPrecedes ? " precedes "
                                                             : " next ") +
                    r.second);
  }
  return Join(parts, "; ");
}

std::vector<LayerKind> KeyStructure::layers() const {
  std::vector<LayerKind> out;
  for (LayerKind k :
       {LayerKind::kCore, LayerKind::kDomain, LayerKind::kJargon}) {
    bool present = std::any_of(patterns_.begin(), patterns_.end(),
                               [k](const auto& p) { return p.layer().kind == k; });
    if (present) out.push_back(k);
  }
  return out;
}

const SentencePattern* KeyStructure::FindPattern(std::string_view id) const {
  for (const auto& p : patterns_) {
    if (p.id() == id) return &p;
  }
  return nullptr;
}

bool KeyStructure::HasTag(std::string_view tag) const {
  return std::any_of(patterns_.begin(), patterns_.end(),
                     [tag](const auto& p) { return TagMatches(p, tag); });
}

SequenceCheck KeyStructure::CheckSequence(
    const std::vector<std::string>& tags) const {
  for (const auto& t : tags) {
    if (!HasTag(t)) throw Error(ErrorCode::kUnknownTag, "unknown tag '" + t + "'");
  }
  if (!combination_) return {};

  // A tag in the sequence satisfies a rule operand when it is the operand
  // itself or shares the operand's construct.
  auto is = [](std::string_view seq_tag, std::string_view operand) {
    return seq_tag == operand || ConstructOf(seq_tag) == operand;
  };
  for (std::size_t i = 0; i <= tags.size(); ++i) {
    for (const auto& r : combination_->rules) {
      if (r.kind == SequenceRule::Kind::kPrecedes && i < tags.size() &&
          is(tags[i], r.first)) {
        for (std::size_t j = 0; j < i; ++j) {
          if (is(tags[j], r.second)) return {false, i};
        }
      }
      if (r.kind == SequenceRule::Kind::kNext && i > 0 &&
          is(tags[i - 1], r.first) &&
          (i == tags.size() || !is(tags[i], r.second))) {
        return {false, i};
      }
    }
  }
  return {};
}

KeyStructure CompileKeyStructure(std::string name,
                                 std::vector<SentencePattern> patterns,
                                 std::optional<CombinationGrammar> combination) {
  if (patterns.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "key structure '" + name + "' has no patterns");
  }
  std::set<std::string> ids, tags;
  for (const auto& p : patterns) {
    if (!ids.insert(p.id()).second) {
      throw Error(ErrorCode::kDuplicateId, "pattern id '" + p.id() + "'");
    }
    if (!tags.insert(p.pragmatics()).second) {
      throw Error(ErrorCode::kDuplicatePragmatics,
                  "pragmatics '" + p.pragmatics() + "' used by two patterns");
    }
  }
  KeyStructure ks;
  ks.name_ = std::move(name);
  ks.patterns_ = std::move(patterns);
  if (combination) {
    for (const auto& r : combination->rules) {
      for (const auto* t : {&r.first, &r.second}) {
        if (!ks.HasTag(*t)) {
          throw Error(ErrorCode::kUnknownTag,
                      "combination names unknown tag '" + *t + "'");
        }
      }
    }
  }
  ks.combination_ = std::move(combination);
  return ks;
}

KeyStructure ParseKeyStructureFile(std::string_view text,
                                   std::string default_name) {
  std::string name = std::move(default_name);
  std::vector<SentencePattern> patterns;
  std::optional<CombinationGrammar> combination;
  int lineno = 0;
  for (const auto& raw : Split(text, '\n')) {
    ++lineno;
    std::string_view line = Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto fail = [&](const std::string& why) {
      return Error(ErrorCode::kParse,
                   "line " + std::to_string(lineno) + ": " + why);
    };
    if (StartsWith(line, "name ")) {
      name = std::string(Trim(line.substr(5)));
      continue;
    }
    if (StartsWith(line, "combination")) {
      auto sep = line.find("::");
      if (sep == std::string_view::npos) throw fail("combination needs '::'");
      combination = ParseCombination(line.substr(sep + 2));
      continue;
    }
    if (!StartsWith(line, "pattern ")) throw fail("unknown directive");
    auto first = line.find("::");
    auto second = first == std::string_view::npos ? first
                                                  : line.find("::", first + 2);
    if (second == std::string_view::npos) {
      throw fail("pattern needs '<id> <layer> <pragmatics> :: <spec> :: <roles>'");
    }
    auto head = SplitWhitespace(line.substr(8, first - 8));
    if (head.size() != 3) throw fail("pattern head must be '<id> <layer> <pragmatics>'");
    std::string spec(Trim(line.substr(first + 2, second - first - 2)));
    std::vector<std::string> roles;
    std::string_view role_text = Trim(line.substr(second + 2));
    if (!role_text.empty()) {
      for (auto& r : Split(role_text, ',')) roles.emplace_back(Trim(r));
    }
    try {
      patterns.push_back(ParsePattern(spec, std::move(roles), head[2],
                                      ParseLayer(head[1]), head[0]));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return CompileKeyStructure(std::move(name), std::move(patterns),
                             std::move(combination));
}

std::string RenderKeyStructureFile(const KeyStructure& ks) {
  std::string out = "name " + ks.name() + "\n";
  for (const auto& p : ks.patterns()) {
    out += "pattern " + p.id() + " " + LayerToString(p.layer()) + " " +
           p.pragmatics() + " :: " + p.Render() + " :: " + Join(p.roles(), ",") +
           "\n";
  }
  if (ks.combination()) {
    out += "combination :: " + RenderCombination(*ks.combination()) + "\n";
  }
  return out;
}

KeyStructure LoadKeyStructure(const std::string& path) {
  return ParseKeyStructureFile(ReadFile(path),
                               std::filesystem::path(path).stem().string());
}

std::partial_ordering CompareGranularity(const KeyStructure& a,
                                         const KeyStructure& b) {
  auto signatures = [](const KeyStructure& ks) {
    std::set<std::string> s;
    for (const auto& p : ks.patterns()) s.insert(ToLower(p.Render()));
    return s;
  };
  auto sa = signatures(a), sb = signatures(b);
  bool a_in_b = std::includes(sb.begin(), sb.end(), sa.begin(), sa.end());
  bool b_in_a = std::includes(sa.begin(), sa.end(), sb.begin(), sb.end());
  if (a_in_b && b_in_a) return std::partial_ordering::equivalent;
  if (a_in_b) return std::partial_ordering::less;
  if (b_in_a) return std::partial_ordering::greater;
  return std::partial_ordering::unordered;
}

}  // namespace kwf
