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

#include "kwf/crystallizer.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <tuple>

#include "kwf/error.h"
#include "kwf/text.h"

namespace kwf {

std::string Magma::ContentKey(const KnowledgeElement& e) {
  std::vector<std::string> parts;
  for (const auto& b : e.bindings) parts.push_back(b.role + "\x1f" + b.text);
  std::sort(parts.begin(), parts.end());
  return e.pragmatics + "\x1e" + Join(parts, "\x1e");
}

std::size_t Magma::Ingest(std::span<const KnowledgeElement> elements) {
  std::set<std::string_view> batch;
  for (const auto& e : elements) {
    if (e.id.empty()) throw Error(ErrorCode::kInvalidArgument, "element without id");
    if (by_id_.count(e.id) || !batch.insert(e.id).second) {
      throw Error(ErrorCode::kDuplicateId, "element id '" + e.id + "'");
    }
  }
  std::size_t added = 0;
  for (const auto& e : elements) {
    std::string content = ContentKey(e);
    if (auto it = by_content_.find(content); it != by_content_.end()) {
      KnowledgeElement& stored = log_[it->second];
      stored.sources.insert(stored.sources.end(), e.sources.begin(), e.sources.end());
      stored.timestamp = std::max(stored.timestamp, e.timestamp);
      stored.reliability = std::max(stored.reliability, e.reliability);
      continue;
    }
    by_id_[e.id] = log_.size();
    by_content_[content] = log_.size();
    index_[KeyOf(e)].push_back(e.id);
    log_.push_back(e);
    ++added;
  }
  return added;
}

const KnowledgeElement* Magma::Find(std::string_view id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &log_[it->second];
}

std::vector<std::string> Magma::Lookup(std::string_view key) const {
  auto it = index_.find(ToLower(NormalizeSpace(key)));
  return it == index_.end() ? std::vector<std::string>{} : it->second;
}

Magma LoadMagma(const std::string& kel_path) {
  Magma m;
  if (!std::filesystem::exists(kel_path)) return m;
  for (const auto& e : ParseElements(ReadFile(kel_path))) {
    m.Ingest(std::span<const KnowledgeElement>(&e, 1));
  }
  return m;
}

std::string RenderMagmaIndex(const Magma& magma) {
  std::string out;
  for (const auto& [key, ids] : magma.index()) {
    out += key + "\t" + Join(ids, ",") + "\n";
  }
  return out;
}

void AppendMagma(const std::string& kel_path, const std::string& idx_path,
                 const Magma& after, std::span<const KnowledgeElement> ingested) {
  std::ofstream out(kel_path, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::kIo, "cannot append to " + kel_path);
  std::string lines = SerializeElements(ingested);
  out.write(lines.data(), static_cast<std::streamsize>(lines.size()));
  out.close();
  WriteFile(idx_path, RenderMagmaIndex(after));
}

namespace {

// Elements with different content in the same group conflict.
std::string GroupKey(const KnowledgeElement& e) {
  return e.pragmatics + "\x1e" + KeyOf(e);
}

std::string RestKey(const KnowledgeElement& e) {
  std::string key_role = KeyRoleOf(e);
  std::vector<std::string> parts;
  for (const auto& b : e.bindings) {
    if (b.role != key_role) parts.push_back(b.role + "\x1f" + b.text);
  }
  std::sort(parts.begin(), parts.end());
  return Join(parts, "\x1e");
}

}  // namespace

std::vector<Conflict> DetectConflicts(std::span<const KnowledgeElement> elements) {
  std::vector<Conflict> out;
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    groups[GroupKey(elements[i])].push_back(i);
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& [key, members] : groups) {
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        if (RestKey(elements[members[a]]) != RestKey(elements[members[b]])) {
          pairs.emplace_back(members[a], members[b]);
        }
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  for (auto [a, b] : pairs) out.push_back({elements[a].id, elements[b].id});
  return out;
}

bool Requirement::Admits(const KnowledgeElement& e) const {
  if (!pragmatics.empty() &&
      std::find(pragmatics.begin(), pragmatics.end(), e.pragmatics) ==
          pragmatics.end()) {
    return false;
  }
  if (!subjects.empty()) {
    std::string key = KeyOf(e);
    bool any = std::any_of(subjects.begin(), subjects.end(), [&](const auto& f) {
      std::string want = ToLower(NormalizeSpace(f.text));
      return f.kind == SubjectFilter::Kind::kExact ? key == want
                                                   : StartsWith(key, want);
    });
    if (!any) return false;
  }
  if (!sources.empty()) {
    bool any = std::any_of(e.sources.begin(), e.sources.end(), [&](const Source& s) {
      return std::find(sources.begin(), sources.end(), s.doc) != sources.end();
    });
    if (!any) return false;
  }
  return true;
}

std::vector<KnowledgeElement> ResolveConflicts(
    std::span<const KnowledgeElement> elements) {
  std::map<std::string, std::size_t> winner;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    auto [it, fresh] = winner.try_emplace(GroupKey(elements[i]), i);
    if (fresh) continue;
    const auto& cur = elements[it->second];
    const auto& cand = elements[i];
    // Later position wins ties: it was ingested more recently.
    if (std::tie(cand.reliability, cand.timestamp) >=
        std::tie(cur.reliability, cur.timestamp)) {
      it->second = i;
    }
  }
  std::vector<std::size_t> keep;
  for (const auto& [k, i] : winner) keep.push_back(i);
  std::sort(keep.begin(), keep.end());
  std::vector<KnowledgeElement> out;
  for (std::size_t i : keep) out.push_back(elements[i]);
  return out;
}

namespace {

void CheckDomain(std::string_view domain) {
  if (domain.empty() ||
      std::any_of(domain.begin(), domain.end(), [](char c) { return IsSpace(c); })) {
    throw Error(ErrorCode::kInvalidArgument,
                "crystal domain must be one nonempty token");
  }
}

}  // namespace

Crystal Crystallize(const Magma& magma, const Requirement& req,
                    std::string domain, std::int64_t formed_at) {
  if (req.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "requirement has no criterion");
  }
  CheckDomain(domain);
  std::vector<KnowledgeElement> admitted;
  for (const auto& e : magma.elements()) {
    if (req.Admits(e)) admitted.push_back(e);
  }
  if (admitted.empty()) {
    throw Error(ErrorCode::kEmptyCrystal,
                "no element of the magma meets the requirement for '" + domain + "'");
  }
  Crystal c;
  c.domain = std::move(domain);
  c.elements = ResolveConflicts(admitted);
  c.requirement = req;
  c.formed_at = formed_at;
  c.version = 1;
  return c;
}

Crystal Renew(const Crystal& crystal, std::span<const KnowledgeElement> fresh,
              std::int64_t now) {
  std::vector<KnowledgeElement> combined = crystal.elements;
  for (const auto& e : fresh) {
    if (!crystal.requirement.Admits(e)) {
      throw Error(ErrorCode::kRequirementViolation,
                  "element '" + e.id + "' is outside the requirement of '" +
                      crystal.domain + "'");
    }
    auto same = std::find_if(combined.begin(), combined.end(),
                             [&](const auto& x) { return SameContent(x, e); });
    if (same != combined.end()) continue;
    auto clash = std::find_if(combined.begin(), combined.end(),
                              [&](const auto& x) { return x.id == e.id; });
    if (clash != combined.end()) {
      throw Error(ErrorCode::kDuplicateId, "element id '" + e.id + "'");
    }
    combined.push_back(e);
  }
  std::vector<KnowledgeElement> resolved = ResolveConflicts(combined);
  if (resolved == crystal.elements) return crystal;
  Crystal out = crystal;
  out.elements = std::move(resolved);
  out.version = crystal.version + 1;
  out.formed_at = now;
  return out;
}

std::vector<KnowledgeElement> QueryDefine(const Crystal& crystal,
                                          std::string_view term) {
  std::vector<KnowledgeElement> out;
  for (const auto& e : crystal.elements) {
    const std::string* c = e.Find("concept");
    const std::string* s = e.Find("subject");
    if ((c && SameText(*c, term)) || (s && SameText(*s, term))) {
      out.push_back(e);
    }
  }
  return out;
}

std::vector<std::string> QueryName(const Crystal& crystal,
                                   std::string_view condition,
                                   std::string_view father) {
  std::vector<std::string> out;
  for (const auto& e : crystal.elements) {
    const std::string* cond = e.Find("condition");
    const std::string* fat = e.Find("father_concept");
    const std::string* con = e.Find("concept");
    if (cond && fat && con && SameText(*cond, condition) &&
        SameText(*fat, father)) {
      out.push_back(*con);
    }
  }
  return out;
}

std::string RenderRequirement(const Requirement& req) {
  std::string out = "require";
  for (const auto& p : req.pragmatics) out += RenderField("pragmatics", p);
  for (const auto& s : req.subjects) {
    out += RenderField(s.kind == SubjectFilter::Kind::kExact ? "subject" : "prefix",
                       s.text);
  }
  for (const auto& s : req.sources) out += RenderField("source", s);
  return out;
}

Requirement ParseRequirementLine(std::string_view line) {
  if (!StartsWith(line, "require")) {
    throw Error(ErrorCode::kParse, "expected 'require' line");
  }
  Requirement req;
  for (auto& f : ParseFields(line.substr(7))) {
    if (f.key == "pragmatics") {
      req.pragmatics.push_back(std::move(f.value));
    } else if (f.key == "subject") {
      req.subjects.push_back({SubjectFilter::Kind::kExact, std::move(f.value)});
    } else if (f.key == "prefix") {
      req.subjects.push_back({SubjectFilter::Kind::kPrefix, std::move(f.value)});
    } else if (f.key == "source") {
      req.sources.push_back(std::move(f.value));
    } else {
      throw Error(ErrorCode::kParse, "unknown requirement field '" + f.key + "'");
    }
  }
  return req;
}

std::string SerializeCrystal(const Crystal& crystal) {
  std::string out = "crystal " + crystal.domain + " " +
                    std::to_string(crystal.version) + " " +
                    std::to_string(crystal.formed_at) + "\n";
  out += RenderRequirement(crystal.requirement) + "\n";
  out += SerializeElements(crystal.elements);
  return out;
}

Crystal ParseCrystal(std::string_view text) {
  auto lines = Split(text, '\n');
  if (lines.size() < 2) throw Error(ErrorCode::kParse, "crystal too short");
  auto head = SplitWhitespace(lines[0]);
  unsigned long long version = 0;
  long long formed = 0;
  if (head.size() != 4 || head[0] != "crystal" || !ParseUint(head[2], &version) ||
      !ParseInt(head[3], &formed)) {
    throw Error(ErrorCode::kParse, "bad crystal header '" + lines[0] + "'");
  }
  Crystal c;
  c.domain = head[1];
  c.version = version;
  c.formed_at = formed;
  c.requirement = ParseRequirementLine(lines[1]);
  std::string rest;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    rest += lines[i];
    rest += '\n';
  }
  c.elements = ParseElements(rest);
  return c;
}

}  // namespace kwf
