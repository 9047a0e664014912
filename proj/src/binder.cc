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

#include "kwf/binder.h"

#include <algorithm>

#include "kwf/error.h"
#include "kwf/text.h"

namespace kwf {
namespace {

bool IsName(std::string_view s) {
  return !s.empty() && std::none_of(s.begin(), s.end(), [](char c) {
    return IsSpace(c) || c == '.' || c == '=' || c == ',' || c == '@' ||
           c == '+' || c == '"';
  });
}

bool IsId(std::string_view s) {
  return !s.empty() && std::none_of(s.begin(), s.end(), [](char c) {
    return IsSpace(c) || c == '=' || c == ',' || c == '@' || c == '"';
  });
}

std::set<std::string> OriginsOf(const MixObject& o) {
  return o.origins.empty() ? std::set<std::string>{o.id} : o.origins;
}

bool HasParent(const std::vector<ParentLink>& links, const ParentLink& l) {
  return std::find(links.begin(), links.end(), l) != links.end();
}

// Renames every member whose name is shared to "<source>.<local>".
template <typename Member>
void Disambiguate(std::vector<Member>& members, const std::string& object,
                  std::map<RenameKey, std::string>* log) {
  std::map<std::string, std::vector<std::size_t>> by_name;
  for (std::size_t i = 0; i < members.size(); ++i) {
    by_name[members[i].name].push_back(i);
  }
  for (const auto& [name, idx] : by_name) {
    if (idx.size() < 2) continue;
    std::set<std::pair<std::string, std::string>> seen;
    for (std::size_t i : idx) {
      if (!seen.emplace(members[i].source, members[i].local).second) {
        throw Error(ErrorCode::kDuplicateMemberUnresolvable,
                    "member '" + members[i].local + "' of '" + members[i].source +
                        "' appears twice in '" + object + "'");
      }
    }
    for (std::size_t i : idx) {
      std::string renamed = members[i].source + "." + members[i].local;
      if (log) (*log)[{object, members[i].source, members[i].local}] = renamed;
      members[i].name = std::move(renamed);
    }
  }
}

MixObject BuildNko(const Program& program, const MixObject& ko,
                   const std::vector<std::string>& kmos,
                   std::map<RenameKey, std::string>* log) {
  MixObject nko;
  nko.id = ko.id;
  nko.kind = ObjectKind::kBound;
  nko.origins = ko.origins;
  nko.data = ko.data;
  nko.parents = ko.parents;
  for (const auto& kmo_id : kmos) {
    // Step 1: a fresh copy per binding; members keep their source.
    MixObject copy = *program.Find(kmo_id);
    for (auto& d : copy.data) nko.data.push_back(d);
    for (auto& m : copy.methods) nko.methods.push_back(m);
    for (auto& p : copy.parents) {
      if (!HasParent(nko.parents, p)) nko.parents.push_back(p);
    }
  }
  Disambiguate(nko.data, nko.id, log);
  Disambiguate(nko.methods, nko.id, log);
  return nko;
}

const DataItem* FindLocal(const MixObject& o, std::string_view local,
                          auto&& accept) {
  for (const auto& d : o.data) {
    if (d.local == local && accept(d.source)) return &d;
  }
  return nullptr;
}

std::string Quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string_view ObjectKindName(ObjectKind kind) {
  switch (kind) {
    case ObjectKind::kSoftware: return "software";
    case ObjectKind::kKnowware: return "knowware";
    case ObjectKind::kMiddleware: return "knowledge-middleware";
    case ObjectKind::kBound: return "nko";
  }
  return "?";
}

ObjectKind ParseObjectKind(std::string_view text) {
  for (auto k : {ObjectKind::kSoftware, ObjectKind::kKnowware,
                 ObjectKind::kMiddleware, ObjectKind::kBound}) {
    if (ObjectKindName(k) == text) return k;
  }
  throw Error(ErrorCode::kParse, "unknown object kind '" + std::string(text) + "'");
}

MixObject& MixObject::AddData(std::string name, std::string value) {
  data.push_back({name, std::move(value), id, name});
  return *this;
}

MixObject& MixObject::AddMethod(std::string name, std::vector<std::string> reads,
                                std::vector<Term> output) {
  methods.push_back({name, std::move(reads), std::move(output), id, name});
  return *this;
}

MixObject& MixObject::AddParent(std::string parent) {
  parents.push_back({std::move(parent), id});
  return *this;
}

const DataItem* MixObject::FindData(std::string_view name) const {
  for (const auto& d : data) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

const Method* MixObject::FindMethod(std::string_view name) const {
  for (const auto& m : methods) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

const MixObject* Program::Find(std::string_view id) const {
  std::string target(id);
  if (auto it = aliases.find(target); it != aliases.end()) target = it->second;
  for (const auto& o : objects) {
    if (o.id == target) return &o;
  }
  return nullptr;
}

bool BindingPlan::CoUsed(std::string_view a, std::string_view b) const {
  std::pair<std::string, std::string> p{std::string(a), std::string(b)};
  return co_use.count(p) || co_use.count({p.second, p.first});
}

std::vector<Violation> ValidateProgram(const Program& program) {
  std::vector<Violation> out;
  std::set<std::string> ids;
  for (const auto& [from, to] : program.aliases) ids.insert(from);
  for (const auto& o : program.objects) {
    auto bad = [&](std::string msg) { out.push_back({o.id, std::move(msg)}); };
    if (!IsId(o.id)) bad("object id must be one token without '=', ',', '@'");
    if (!ids.insert(o.id).second) bad("duplicate object id");
    switch (o.kind) {
      case ObjectKind::kSoftware:
        if (o.data.empty()) bad("software object with empty data part");
        if (o.methods.empty()) bad("software object with empty method part");
        break;
      case ObjectKind::kKnowware:
        if (!o.methods.empty()) bad("knowware object with a method part");
        break;
      case ObjectKind::kMiddleware:
        if (o.methods.empty()) bad("middleware object with empty method part");
        break;
      case ObjectKind::kBound:
        bad("bound objects exist only after binding");
        break;
    }
    std::set<std::string> names;
    for (const auto& d : o.data) {
      if (!IsName(d.local)) bad("bad data name '" + d.local + "'");
      if (d.name != d.local && d.name != d.source + "." + d.local) {
        bad("data name '" + d.name + "' does not derive from '" + d.local + "'");
      }
      if (!names.insert(d.name).second) bad("duplicate data name '" + d.name + "'");
    }
    names.clear();
    for (const auto& m : o.methods) {
      if (!IsName(m.local)) bad("bad method name '" + m.local + "'");
      if (!names.insert(m.name).second) bad("duplicate method name '" + m.name + "'");
      if (m.output.empty()) bad("method '" + m.name + "' has no output");
      for (const auto& t : m.output) {
        if (!t.literal &&
            std::find(m.reads.begin(), m.reads.end(), t.text) == m.reads.end()) {
          bad("method '" + m.name + "' outputs '" + t.text + "' it does not read");
        }
      }
    }
    for (const auto& p : o.parents) {
      const MixObject* parent = program.Find(p.id);
      if (p.id == p.source) {
        bad("object is its own parent");
      } else if (!parent) {
        bad("parent '" + p.id + "' does not exist");
      } else if (std::any_of(parent->parents.begin(), parent->parents.end(),
                             [&](const ParentLink& l) { return l.source == p.id; })) {
        bad("parent '" + p.id + "' has parents itself; only one level is supported");
      }
    }
  }
  return out;
}

BoundProgram Bind(const Program& program, const BindingPlan& plan) {
  if (auto v = ValidateProgram(program); !v.empty()) {
    throw Error(ErrorCode::kInvalidProgram,
                "object '" + v[0].object + "': " + v[0].message);
  }
  for (const auto& [ko, kmos] : plan.bindings) {
    auto it = std::find_if(program.objects.begin(), program.objects.end(),
                           [&](const MixObject& o) { return o.id == ko; });
    if (it == program.objects.end() || it->kind != ObjectKind::kKnowware) {
      throw Error(ErrorCode::kInvalidArgument,
                  "plan binds '" + ko + "', which is not a knowware object");
    }
    for (const auto& kmo : kmos) {
      const MixObject* m = program.Find(kmo);
      if (!m || m->kind != ObjectKind::kMiddleware || program.aliases.count(kmo)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "plan binds '" + kmo + "', which is not a middleware object");
      }
    }
  }
  BoundProgram bound;
  bound.program_ = program;
  bound.plan_ = plan;
  for (const auto& o : program.objects) {
    if (o.kind != ObjectKind::kKnowware) continue;
    auto it = plan.bindings.find(o.id);
    if (it == plan.bindings.end() || it->second.empty()) {
      throw Error(ErrorCode::kUnboundKnowware,
                  "knowware object '" + o.id + "' is bound to no middleware");
    }
    MixObject nko = BuildNko(program, o, it->second, &bound.rename_log_);
    if (plan.mode == BindMode::kStatic) {
      bound.cache_->nko[o.id] = std::make_shared<const MixObject>(std::move(nko));
    }
  }
  return bound;
}

const MixObject& BoundProgram::Materialize(const std::string& id) const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  auto it = cache_->nko.find(id);
  if (it == cache_->nko.end()) {
    const MixObject* ko = program_.Find(id);
    auto nko = BuildNko(program_, *ko, plan_.bindings.at(id), nullptr);
    it = cache_->nko.emplace(id, std::make_shared<const MixObject>(std::move(nko))).first;
  }
  return *it->second;
}

std::vector<MixObject> BoundProgram::objects() const {
  std::vector<MixObject> out;
  for (const auto& o : program_.objects) {
    out.push_back(o.kind == ObjectKind::kKnowware ? Materialize(o.id) : o);
  }
  return out;
}

std::size_t BoundProgram::materialized() const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  return cache_->nko.size();
}

std::string BoundProgram::Dispatch(std::string_view id,
                                   std::string_view method_name) const {
  const MixObject* found = program_.Find(id);
  if (!found) throw Error(ErrorCode::kNotFound, "no object '" + std::string(id) + "'");
  const MixObject& obj =
      found->kind == ObjectKind::kKnowware ? Materialize(found->id) : *found;
  const Method* method = obj.FindMethod(method_name);
  if (!method) {
    throw Error(ErrorCode::kNoSuchMethod, "object '" + std::string(id) +
                                              "' has no method '" +
                                              std::string(method_name) + "'");
  }
  const std::string origin(id);
  const std::set<std::string> origins = OriginsOf(obj);
  auto foreign = [&](const std::string& src) { return !origins.count(src); };

  std::map<std::string, std::string> values;
  for (const auto& r : method->reads) {
    const DataItem* d =
        FindLocal(obj, r, [&](const std::string& s) { return s == method->source; });
    if (!d) d = FindLocal(obj, r, [&](const std::string& s) { return s == origin; });
    if (!d) d = FindLocal(obj, r, foreign);
    for (std::size_t i = 0; !d && i < obj.parents.size(); ++i) {
      const ParentLink& link = obj.parents[i];
      if (link.source != origin && !foreign(link.source)) continue;
      const MixObject* parent = program_.Find(link.id);
      if (!parent) continue;
      d = FindLocal(*parent, r, [&](const std::string& s) { return s == link.id; });
    }
    if (!d) {
      throw Error(ErrorCode::kMissingData, "method '" + method->name + "' of '" +
                                               origin + "' reads missing '" + r + "'");
    }
    values[r] = d->value;
  }
  std::string out;
  for (const auto& t : method->output) out += t.literal ? t.text : values.at(t.text);
  return out;
}

MergeResult MergeKnowware(const Program& program, std::string_view ko_a,
                          std::string_view ko_b, const BindingPlan& plan) {
  auto find_ko = [&](std::string_view id) -> const MixObject& {
    auto it = std::find_if(program.objects.begin(), program.objects.end(),
                           [&](const MixObject& o) { return o.id == id; });
    if (it == program.objects.end() || it->kind != ObjectKind::kKnowware) {
      throw Error(ErrorCode::kInvalidArgument,
                  "'" + std::string(id) + "' is not a knowware object");
    }
    return *it;
  };
  const MixObject& a = find_ko(ko_a);
  const MixObject& b = find_ko(ko_b);
  if (a.id == b.id) throw Error(ErrorCode::kInvalidArgument, "cannot merge an object with itself");
  auto kmo_set = [&](const std::string& id) {
    auto it = plan.bindings.find(id);
    return it == plan.bindings.end()
               ? std::set<std::string>{}
               : std::set<std::string>(it->second.begin(), it->second.end());
  };
  if (kmo_set(a.id) != kmo_set(b.id)) {
    throw Error(ErrorCode::kPlanMismatch, "'" + a.id + "' and '" + b.id +
                                              "' are bound to different middleware");
  }
  if (!plan.CoUsed(a.id, b.id)) {
    throw Error(ErrorCode::kNotCoUsed,
                "'" + a.id + "' and '" + b.id + "' are not marked as used together");
  }

  MixObject merged = a;
  merged.origins = OriginsOf(a);
  merged.origins.merge(OriginsOf(b));
  merged.data.insert(merged.data.end(), b.data.begin(), b.data.end());
  for (const auto& p : b.parents) {
    if (!HasParent(merged.parents, p)) merged.parents.push_back(p);
  }
  Disambiguate(merged.data, merged.id, nullptr);

  MergeResult out;
  for (const auto& o : program.objects) {
    if (o.id == b.id) continue;
    out.program.objects.push_back(o.id == a.id ? merged : o);
  }
  out.program.aliases = program.aliases;
  for (auto& [from, to] : out.program.aliases) {
    if (to == b.id) to = a.id;
  }
  out.program.aliases[b.id] = a.id;

  out.plan = plan;
  out.plan.bindings.erase(b.id);
  out.plan.co_use.clear();
  for (auto [x, y] : plan.co_use) {
    if (x == b.id) x = a.id;
    if (y == b.id) y = a.id;
    if (x != y) out.plan.co_use.emplace(x, y);
  }
  return out;
}

std::vector<Term> ParseExpression(std::string_view text) {
  std::vector<Term> out;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && IsSpace(text[i])) ++i;
  };
  while (true) {
    skip();
    if (i >= text.size()) throw Error(ErrorCode::kParse, "expression term expected");
    Term t;
    if (text[i] == '"') {
      t.literal = true;
      ++i;
      while (i < text.size() && text[i] != '"') {
        if (text[i] == '\\' && i + 1 < text.size()) ++i;
        t.text.push_back(text[i++]);
      }
      if (i >= text.size()) throw Error(ErrorCode::kParse, "unterminated literal");
      ++i;
    } else {
      std::size_t start = i;
      while (i < text.size() && !IsSpace(text[i]) && text[i] != '+') ++i;
      t.text = std::string(text.substr(start, i - start));
      if (!IsName(t.text)) {
        throw Error(ErrorCode::kParse, "bad expression term '" + t.text + "'");
      }
    }
    out.push_back(std::move(t));
    skip();
    if (i >= text.size()) break;
    if (text[i] != '+') throw Error(ErrorCode::kParse, "expected '+' in expression");
    ++i;
  }
  return out;
}

std::string RenderExpression(const std::vector<Term>& terms) {
  std::vector<std::string> parts;
  for (const auto& t : terms) parts.push_back(t.literal ? Quote(t.text) : t.text);
  return Join(parts, " + ");
}

namespace {

// "<name>" or "<name>@<source>"; the local name drops a "<source>." prefix.
template <typename Member>
void ParseMemberName(std::string_view text, const std::string& owner, Member* m) {
  auto at = text.find('@');
  m->name = std::string(text.substr(0, at));
  m->source = at == std::string_view::npos ? owner : std::string(text.substr(at + 1));
  m->local = StartsWith(m->name, m->source + ".") ? m->name.substr(m->source.size() + 1)
                                                   : m->name;
}

template <typename Member>
std::string MemberName(const Member& m, const std::string& owner) {
  return m.source == owner ? m.name : m.name + "@" + m.source;
}

}  // namespace

Program ParseProgram(std::string_view text) {
  Program program;
  MixObject* cur = nullptr;
  int lineno = 0;
  for (const auto& raw : Split(text, '\n')) {
    ++lineno;
    std::string_view line = Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto fail = [&](const std::string& why) {
      return Error(ErrorCode::kParse, "line " + std::to_string(lineno) + ": " + why);
    };
    auto sp = line.find(' ');
    std::string_view head = line.substr(0, sp);
    std::string_view rest = sp == std::string_view::npos ? "" : Trim(line.substr(sp + 1));
    if (head == "object") {
      auto w = SplitWhitespace(rest);
      if (w.size() != 2) throw fail("expected 'object <id> <kind>'");
      program.objects.push_back({});
      cur = &program.objects.back();
      cur->id = w[0];
      cur->kind = ParseObjectKind(w[1]);
      continue;
    }
    if (head == "alias") {
      auto w = SplitWhitespace(rest);
      if (w.size() != 2) throw fail("expected 'alias <id> <target>'");
      program.aliases[w[0]] = w[1];
      continue;
    }
    if (!cur) throw fail("member line before any object");
    if (head == "data") {
      auto eq = rest.find('=');
      if (eq == std::string_view::npos) throw fail("expected 'data <name>=<value>'");
      DataItem d;
      ParseMemberName(Trim(rest.substr(0, eq)), cur->id, &d);
      d.value = UnescapeLine(rest.substr(eq + 1));
      cur->data.push_back(std::move(d));
    } else if (head == "method") {
      auto arrow = rest.find("->");
      auto w = SplitWhitespace(rest.substr(0, arrow));
      if (arrow == std::string_view::npos || w.size() < 2 || w.size() > 3 ||
          w[1] != "reads") {
        throw fail("expected 'method <name> reads <a,b> -> <expr>'");
      }
      Method m;
      ParseMemberName(w[0], cur->id, &m);
      if (w.size() == 3) {
        for (auto& r : Split(w[2], ',')) {
          if (!r.empty()) m.reads.push_back(r);
        }
      }
      m.output = ParseExpression(rest.substr(arrow + 2));
      cur->methods.push_back(std::move(m));
    } else if (head == "parent") {
      auto at = rest.find('@');
      ParentLink p{std::string(rest.substr(0, at)),
                   at == std::string_view::npos ? cur->id
                                                : std::string(rest.substr(at + 1))};
      cur->parents.push_back(std::move(p));
    } else if (head == "origins") {
      for (auto& o : Split(rest, ',')) {
        if (!o.empty()) cur->origins.insert(o);
      }
    } else {
      throw fail("unknown directive '" + std::string(head) + "'");
    }
  }
  return program;
}

std::string RenderObject(const MixObject& o) {
  std::string out = "object " + o.id + " " + std::string(ObjectKindName(o.kind)) + "\n";
  for (const auto& d : o.data) {
    out += "data " + MemberName(d, o.id) + "=" + EscapeLine(d.value) + "\n";
  }
  for (const auto& m : o.methods) {
    out += "method " + MemberName(m, o.id) + " reads " + Join(m.reads, ",") + " -> " +
           RenderExpression(m.output) + "\n";
  }
  for (const auto& p : o.parents) {
    out += "parent " + (p.source == o.id ? p.id : p.id + "@" + p.source) + "\n";
  }
  if (!o.origins.empty() && o.origins != std::set<std::string>{o.id}) {
    out += "origins " +
           Join(std::vector<std::string>(o.origins.begin(), o.origins.end()), ",") + "\n";
  }
  return out;
}

std::string RenderProgram(const Program& program) {
  std::string out;
  for (const auto& o : program.objects) out += RenderObject(o);
  for (const auto& [from, to] : program.aliases) out += "alias " + from + " " + to + "\n";
  return out;
}

BindingPlan ParsePlan(std::string_view text) {
  BindingPlan plan;
  int lineno = 0;
  for (const auto& raw : Split(text, '\n')) {
    ++lineno;
    std::string_view line = Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto w = SplitWhitespace(line);
    auto fail = [&](const std::string& why) {
      return Error(ErrorCode::kParse, "line " + std::to_string(lineno) + ": " + why);
    };
    if (w[0] == "plan" && w.size() == 2) {
      if (w[1] == "static") {
        plan.mode = BindMode::kStatic;
      } else if (w[1] == "dynamic") {
        plan.mode = BindMode::kDynamic;
      } else {
        throw fail("mode must be static or dynamic");
      }
    } else if (w[0] == "bind" && w.size() == 3) {
      auto& kmos = plan.bindings[w[1]];
      for (auto& k : Split(w[2], ',')) {
        if (!k.empty()) kmos.push_back(k);
      }
    } else if (w[0] == "couse" && w.size() == 3) {
      plan.co_use.emplace(w[1], w[2]);
    } else {
      throw fail("expected 'plan <mode>', 'bind <ko> <kmos>' or 'couse <a> <b>'");
    }
  }
  return plan;
}

std::string RenderPlan(const BindingPlan& plan) {
  std::string out =
      std::string("plan ") + (plan.mode == BindMode::kStatic ? "static" : "dynamic") + "\n";
  for (const auto& [ko, kmos] : plan.bindings) {
    out += "bind " + ko + " " + Join(kmos, ",") + "\n";
  }
  for (const auto& [a, b] : plan.co_use) out += "couse " + a + " " + b + "\n";
  return out;
}

}  // namespace kwf
