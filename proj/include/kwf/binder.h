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

// Mixware objects and knowware binding.
//
// Methods are simulated: a method declares the data names it reads and an
// output expression, a '+'-separated list of read names and "literals"
// whose value is the concatenation of the terms.
//
// Every member remembers the object it came from (`source`) and its name
// there (`local`). Binding may rename a member to "<source>.<local>"; reads
// always go by local name, so renaming never changes what a method sees.

#ifndef KWF_BINDER_H_
#define KWF_BINDER_H_

#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace kwf {

enum class ObjectKind { kSoftware, kKnowware, kMiddleware, kBound };

std::string_view ObjectKindName(ObjectKind kind);
ObjectKind ParseObjectKind(std::string_view text);

struct DataItem {
  std::string name;
  std::string value;
  std::string source;
  std::string local;
  bool operator==(const DataItem&) const = default;
};

struct Term {
  bool literal = false;
  std::string text;  // data name or literal value
  bool operator==(const Term&) const = default;
};

struct Method {
  std::string name;
  std::vector<std::string> reads;
  std::vector<Term> output;
  std::string source;
  std::string local;
  bool operator==(const Method&) const = default;
};

struct ParentLink {
  std::string id;
  std::string source;  // the member object that declared the link
  bool operator==(const ParentLink&) const = default;
};

struct MixObject {
  std::string id;
  ObjectKind kind = ObjectKind::kSoftware;
  std::vector<DataItem> data;
  std::vector<Method> methods;
  std::vector<ParentLink> parents;
  // Knowware ids folded into this object (merge, bind). Empty means {id}.
  std::set<std::string> origins;

  // Helpers for building plain objects; members get source = id.
  MixObject& AddData(std::string name, std::string value);
  MixObject& AddMethod(std::string name, std::vector<std::string> reads,
                       std::vector<Term> output);
  MixObject& AddParent(std::string parent);

  const DataItem* FindData(std::string_view name) const;
  const Method* FindMethod(std::string_view name) const;
  bool operator==(const MixObject&) const = default;
};

struct Program {
  std::vector<MixObject> objects;
  std::map<std::string, std::string> aliases;  // merged-away id -> survivor

  const MixObject* Find(std::string_view id) const;  // follows aliases
  bool operator==(const Program&) const = default;
};

enum class BindMode { kStatic, kDynamic };

struct BindingPlan {
  std::map<std::string, std::vector<std::string>> bindings;  // KO -> KMOs
  BindMode mode = BindMode::kStatic;
  std::set<std::pair<std::string, std::string>> co_use;  // unordered pairs

  bool CoUsed(std::string_view a, std::string_view b) const;
  bool operator==(const BindingPlan&) const = default;
};

struct Violation {
  std::string object;
  std::string message;
  bool operator==(const Violation&) const = default;
};

// Kind invariants, id and member-name uniqueness, parent links (existing,
// not self, single level) and output terms within the read set.
std::vector<Violation> ValidateProgram(const Program& program);

struct RenameKey {
  std::string object;
  std::string source;
  std::string member;
  auto operator<=>(const RenameKey&) const = default;
};

class BoundProgram {
 public:
  BindMode mode() const { return plan_.mode; }
  const std::map<RenameKey, std::string>& rename_log() const { return rename_log_; }

  // All objects, software and middleware unchanged and every knowware
  // object replaced by its NKO. Materializes pending NKOs in dynamic mode.
  std::vector<MixObject> objects() const;
  std::size_t materialized() const;

  // Runs `method` on object `id` (an alias dispatches on the survivor with
  // the alias as origin). Throws Error{kNotFound}, Error{kNoSuchMethod} or
  // Error{kMissingData}.
  std::string Dispatch(std::string_view id, std::string_view method) const;

 private:
  friend BoundProgram Bind(const Program& program, const BindingPlan& plan);

  const MixObject& Materialize(const std::string& id) const;

  Program program_;
  BindingPlan plan_;
  std::map<RenameKey, std::string> rename_log_;
  // Shared so that copies of a bound program share one NKO cache.
  struct Cache {
    std::mutex mu;
    std::map<std::string, std::shared_ptr<const MixObject>> nko;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

// Throws Error{kInvalidProgram} when validation fails, Error{kUnboundKnowware}
// when a knowware object has no middleware, Error{kInvalidArgument} for plan
// entries that name no knowware/middleware object, and
// Error{kDuplicateMemberUnresolvable} when two members share name and
// source. Rename collisions are computed eagerly in both modes.
BoundProgram Bind(const Program& program, const BindingPlan& plan);

struct MergeResult {
  Program program;
  BindingPlan plan;
};

// Folds knowware object `ko_b` into `ko_a`. Throws Error{kPlanMismatch} if
// their middleware sets differ, Error{kNotCoUsed} if the pair is not
// annotated, Error{kInvalidArgument} if either is not a knowware object.
MergeResult MergeKnowware(const Program& program, std::string_view ko_a,
                          std::string_view ko_b, const BindingPlan& plan);

// Object blocks: "object <id> <kind>", "data <name>=<value>",
// "method <name> reads <a,b> -> <expr>", "parent <id>".
Program ParseProgram(std::string_view text);
std::string RenderProgram(const Program& program);
std::string RenderObject(const MixObject& object);

// "plan static|dynamic", "bind <ko> <kmo,kmo>", "couse <a> <b>".
BindingPlan ParsePlan(std::string_view text);
std::string RenderPlan(const BindingPlan& plan);

std::vector<Term> ParseExpression(std::string_view text);
std::string RenderExpression(const std::vector<Term>& terms);

}  // namespace kwf

#endif  // KWF_BINDER_H_
