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

#include "kwf/middleware.h"

#include <algorithm>

#include "kwf/error.h"
#include "kwf/text.h"

namespace kwf {
namespace {

std::optional<std::set<std::string>> Intersect(
    const std::optional<std::set<std::string>>& a,
    const std::optional<std::set<std::string>>& b) {
  if (!a) return b;
  if (!b) return a;
  std::set<std::string> out;
  std::set_intersection(a->begin(), a->end(), b->begin(), b->end(),
                        std::inserter(out, out.begin()));
  return out;
}

bool SubjectPasses(const SubjectFilter& f, const std::string& key) {
  std::string want = ToLower(NormalizeSpace(f.text));
  return f.kind == SubjectFilter::Kind::kExact ? key == want : StartsWith(key, want);
}

std::set<std::string> CommaSet(std::string_view text) {
  std::set<std::string> out;
  for (const auto& v : Split(text, ',')) {
    auto t = Trim(v);
    if (!t.empty()) out.emplace(t);
  }
  return out;
}

}  // namespace

ViewSpec Conjoin(const ViewSpec& a, const ViewSpec& b) {
  ViewSpec out;
  out.pragmatics = Intersect(a.pragmatics, b.pragmatics);
  out.roles = Intersect(a.roles, b.roles);
  out.subjects = a.subjects;
  out.subjects.insert(out.subjects.end(), b.subjects.begin(), b.subjects.end());
  return out;
}

Crystal ApplyView(const Crystal& source, const ViewSpec& view) {
  if (view.empty()) throw Error(ErrorCode::kInvalidArgument, "view has no criterion");
  Crystal out = source;
  out.elements.clear();
  for (const auto& e : source.elements) {
    if (view.pragmatics && !view.pragmatics->count(e.pragmatics)) continue;
    std::string key_role = KeyRoleOf(e);
    if (view.roles && !view.roles->count(key_role)) continue;
    std::string key = KeyOf(e);
    bool subjects_ok = std::all_of(view.subjects.begin(), view.subjects.end(),
                                   [&](const auto& f) { return SubjectPasses(f, key); });
    if (!subjects_ok) continue;
    KnowledgeElement kept = e;
    if (view.roles) {
      std::erase_if(kept.bindings,
                    [&](const Binding& b) { return !view.roles->count(b.role); });
    }
    out.elements.push_back(std::move(kept));
  }
  return out;
}

Crystal ApplyView(const KnowwarePackage& source, const ViewSpec& view) {
  VerifyResult v = Verify(source);
  if (!v.ok) {
    throw Error(ErrorCode::kVerifyFailed,
                "package '" + source.manifest().name + "' fails verify: " + v.reason);
  }
  return ApplyView(CrystalOf(source), view);
}

ViewSpec ParseViewFile(std::string_view text) {
  ViewSpec view;
  int lineno = 0;
  for (const auto& raw : Split(text, '\n')) {
    ++lineno;
    std::string_view line = Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto sep = line.find("::");
    auto head = SplitWhitespace(line.substr(0, sep));
    if (sep == std::string_view::npos || head.size() != 2 || head[0] != "view") {
      throw Error(ErrorCode::kParse, "line " + std::to_string(lineno) +
                                         ": expected 'view <criterion> :: <values>'");
    }
    std::string_view values = Trim(line.substr(sep + 2));
    if (head[1] == "pragmatics") {
      if (!view.pragmatics) view.pragmatics.emplace();
      view.pragmatics->merge(CommaSet(values));
    } else if (head[1] == "roles") {
      if (!view.roles) view.roles.emplace();
      view.roles->merge(CommaSet(values));
    } else if (head[1] == "subject") {
      view.subjects.push_back({SubjectFilter::Kind::kExact, std::string(values)});
    } else if (head[1] == "prefix") {
      view.subjects.push_back({SubjectFilter::Kind::kPrefix, std::string(values)});
    } else {
      throw Error(ErrorCode::kParse, "line " + std::to_string(lineno) +
                                         ": unknown criterion '" + head[1] + "'");
    }
  }
  return view;
}

std::string RenderViewFile(const ViewSpec& view) {
  std::string out;
  auto join_set = [](const std::set<std::string>& s) {
    return Join(std::vector<std::string>(s.begin(), s.end()), ",");
  };
  if (view.pragmatics) out += "view pragmatics :: " + join_set(*view.pragmatics) + "\n";
  if (view.roles) out += "view roles :: " + join_set(*view.roles) + "\n";
  for (const auto& f : view.subjects) {
    out += std::string("view ") +
           (f.kind == SubjectFilter::Kind::kExact ? "subject" : "prefix") +
           " :: " + f.text + "\n";
  }
  return out;
}

std::vector<Triple> ToTriples(const KnowledgeElement& e) {
  const std::string key_role = KeyRoleOf(e);
  if (key_role.empty()) {
    throw Error(ErrorCode::kNoKeyRole, "element '" + e.id + "' has no bindings");
  }
  const std::string& subject = *e.Find(key_role);
  std::vector<Triple> out;
  for (const auto& b : e.bindings) {
    if (b.role == key_role) continue;
    out.push_back({subject, e.pragmatics + "/" + b.role, b.text});
  }
  return out;
}

KeyRoleTable KeyRolesOf(const KeyStructure& ks) {
  KeyRoleTable out;
  for (const auto& p : ks.patterns()) {
    const auto& roles = p.roles();
    if (roles.empty()) continue;
    auto has = [&](std::string_view r) {
      return std::find(roles.begin(), roles.end(), r) != roles.end();
    };
    out[std::string(p.construct())] =
        has("concept") ? "concept" : has("subject") ? "subject" : roles.front();
  }
  return out;
}

KnowledgeElement FromTriples(std::span<const Triple> triples,
                             const KeyRoleTable& key_roles) {
  if (triples.empty()) {
    throw Error(ErrorCode::kMixedSubjects, "no triples to rebuild an element from");
  }
  KnowledgeElement e;
  const std::string& subject = triples.front().subject;
  for (const auto& t : triples) {
    if (t.subject != subject) {
      throw Error(ErrorCode::kMixedSubjects,
                  "subjects '" + subject + "' and '" + t.subject + "'");
    }
    auto slash = t.relation.rfind('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == t.relation.size()) {
      throw Error(ErrorCode::kParse, "relation '" + t.relation +
                                         "' is not '<pragmatics>/<role>'");
    }
    std::string pragmatics = t.relation.substr(0, slash);
    if (e.pragmatics.empty()) {
      e.pragmatics = pragmatics;
    } else if (e.pragmatics != pragmatics) {
      throw Error(ErrorCode::kMixedPragmatics,
                  "pragmatics '" + e.pragmatics + "' and '" + pragmatics + "'");
    }
    e.bindings.push_back({t.relation.substr(slash + 1), t.object});
  }
  auto it = key_roles.find(e.pragmatics);
  std::string key_role = it == key_roles.end() ? "subject" : it->second;
  e.bindings.insert(e.bindings.begin(), Binding{key_role, subject});
  return e;
}

std::string RenderTriplesTsv(std::span<const Triple> triples) {
  std::string out;
  for (const auto& t : triples) {
    out += t.subject + "\t" + t.relation + "\t" + t.object + "\n";
  }
  return out;
}

std::vector<Triple> ParseTriplesTsv(std::string_view text) {
  std::vector<Triple> out;
  for (const auto& line : Split(text, '\n')) {
    if (line.empty()) continue;
    auto cols = Split(line, '\t');
    if (cols.size() != 3) {
      throw Error(ErrorCode::kParse, "triple line needs 3 tab-separated columns");
    }
    out.push_back({cols[0], cols[1], cols[2]});
  }
  return out;
}

Summary Summarize(const Crystal& crystal) {
  Summary s;
  s.elements = crystal.elements.size();
  std::set<std::string> subjects;
  for (const auto& e : crystal.elements) {
    ++s.counts[e.pragmatics];
    std::string key = KeyOf(e);
    if (!key.empty()) subjects.insert(key);
  }
  s.groups = s.counts.size();
  s.subjects = subjects.size();
  s.version = crystal.version;
  s.formed_at = crystal.formed_at;
  return s;
}

std::string RenderSummary(const Summary& s) {
  std::string out = "elements " + std::to_string(s.elements) + "\n" +
                    "groups " + std::to_string(s.groups) + "\n" +
                    "subjects " + std::to_string(s.subjects) + "\n" +
                    "version " + std::to_string(s.version) + "\n" +
                    "formed_at " + std::to_string(s.formed_at) + "\n";
  for (const auto& [tag, n] : s.counts) {
    out += "count " + tag + " " + std::to_string(n) + "\n";
  }
  return out;
}

}  // namespace kwf
