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

#include <gtest/gtest.h>

#include <filesystem>

#include "fixtures.h"
#include "generators.h"
#include "kwf/error.h"
#include "kwf/pnlu.h"
#include "kwf/text.h"
#include "oracles.h"

namespace kwf {
namespace {

template <typename F>
ErrorCode CodeOf(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

std::vector<KnowledgeElement> SoftwareElements() {
  return Extract(testing::SoftwareKs(), testing::kSoftwareParagraph, "sw").elements;
}

KnowledgeElement ConceptDef(std::string id, std::string condition, std::string father,
                            std::string concept_name, std::int64_t at = 0, int rel = 0) {
  KnowledgeElement e;
  e.id = std::move(id);
  e.pragmatics = "concept-definition";
  e.pattern_id = "concept-def";
  e.bindings = {{"condition", std::move(condition)},
                {"father_concept", std::move(father)},
                {"concept", std::move(concept_name)}};
  e.sources.push_back({"doc", 0, 0, 1});
  e.timestamp = at;
  e.reliability = rel;
  return e;
}

Requirement Pragmatics(std::vector<std::string> tags) {
  Requirement r;
  r.pragmatics = std::move(tags);
  return r;
}

const std::vector<std::string> kSoftwareTags = {"intensional-definition", "classification",
                                                "extensional-definition"};

TEST(Magma, IngestSoftware) {
  Magma m;
  EXPECT_EQ(m.Ingest(SoftwareElements()), 5u);
  EXPECT_EQ(m.size(), 5u);
  EXPECT_NE(m.Find("sw#2"), nullptr);
  EXPECT_EQ(m.Lookup("SOFTWARE"), (std::vector<std::string>{"sw#0", "sw#1"}));
  EXPECT_EQ(m.Lookup("system   software"), std::vector<std::string>{"sw#2"});
  EXPECT_TRUE(m.Lookup("nothing").empty());
}

TEST(Magma, DuplicateContentMergesSources) {
  Magma m;
  auto a = ConceptDef("a", "c", "f", "x", 3, 0);
  auto b = ConceptDef("b", "c", "f", "x", 9, 1);
  b.sources[0].doc = "other";
  EXPECT_EQ(m.Ingest(std::vector{a}), 1u);
  EXPECT_EQ(m.Ingest(std::vector{b}), 0u);
  ASSERT_EQ(m.size(), 1u);
  const auto& stored = m.elements()[0];
  EXPECT_EQ(stored.id, "a");
  EXPECT_EQ(stored.sources.size(), 2u);
  EXPECT_EQ(stored.timestamp, 9);
  EXPECT_EQ(stored.reliability, 1);
}

TEST(Magma, DuplicateIdRejected) {
  Magma m;
  m.Ingest(std::vector{ConceptDef("a", "c", "f", "x")});
  EXPECT_EQ(CodeOf([&] { m.Ingest(std::vector{ConceptDef("a", "d", "f", "y")}); }),
            ErrorCode::kDuplicateId);
  EXPECT_EQ(CodeOf([&] {
              m.Ingest(std::vector{ConceptDef("q", "c", "f", "x"), ConceptDef("q", "d", "f", "y")});
            }),
            ErrorCode::kDuplicateId);
  EXPECT_EQ(m.size(), 1u);
}

TEST(Magma, PersistAndReload) {
  auto dir = std::filesystem::temp_directory_path() / "kwf_magma_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  std::string kel = (dir / "magma.kel").string(), idx = (dir / "magma.idx").string();
  Magma m = LoadMagma(kel);
  EXPECT_EQ(m.size(), 0u);
  auto els = SoftwareElements();
  m.Ingest(els);
  AppendMagma(kel, idx, m, els);
  Magma again = LoadMagma(kel);
  EXPECT_EQ(again.elements(), m.elements());
  EXPECT_EQ(ReadFile(idx), RenderMagmaIndex(m));
  std::filesystem::remove_all(dir);
}

TEST(DetectConflicts, Cases) {
  auto a = ConceptDef("a", "the color is red", "the blood cell", "erythrocyte");
  auto b = ConceptDef("b", "the color is blue", "the blood cell", "Erythrocyte");
  auto c = ConceptDef("c", "it is white", "the blood cell", "leukocyte");
  EXPECT_EQ(DetectConflicts(std::vector{a, b, c}), (std::vector<Conflict>{{"a", "b"}}));
  EXPECT_TRUE(DetectConflicts(std::vector{a, c}).empty());
  Magma m;
  m.Ingest(std::vector{a, ConceptDef("a2", "the color is red", "the blood cell", "erythrocyte")});
  EXPECT_TRUE(DetectConflicts(m).empty());
}

TEST(DetectConflicts, AgreesWithPairwiseOracle) {
  testing::Rng rng(31);
  const std::vector<std::string> concepts = {"x", "X", "y", "z z"};
  const std::vector<std::string> conds = {"c1", "c2"};
  for (int round = 0; round < 100; ++round) {
    std::vector<KnowledgeElement> els;
    int n = 1 + static_cast<int>(rng() % 100);
    for (int i = 0; i < n; ++i) {
      els.push_back(ConceptDef("e" + std::to_string(i), conds[rng() % 2], "f",
                               concepts[rng() % concepts.size()]));
      if (rng() % 4 == 0) els.back().pragmatics = "other";
    }
    std::vector<std::pair<std::string, std::string>> got;
    for (const auto& c : DetectConflicts(els)) got.emplace_back(c.first, c.second);
    auto want = testing::ConflictPairsOracle(els);
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    EXPECT_EQ(got, want);
  }
}

TEST(Crystallize, SoftwareRequirements) {
  Magma m;
  m.Ingest(SoftwareElements());
  auto all = Crystallize(m, Pragmatics(kSoftwareTags), "software", 10);
  EXPECT_EQ(all.elements.size(), 5u);
  EXPECT_EQ(all.version, 1u);
  EXPECT_EQ(all.formed_at, 10);
  auto one = Crystallize(m, Pragmatics({"classification"}), "software", 10);
  ASSERT_EQ(one.elements.size(), 1u);
  EXPECT_EQ(one.elements[0].id, "sw#1");
  EXPECT_EQ(CodeOf([&] { Crystallize(m, Pragmatics({"concept-definition"}), "s", 0); }),
            ErrorCode::kEmptyCrystal);
  EXPECT_EQ(CodeOf([&] { Crystallize(m, {}, "s", 0); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { Crystallize(m, Pragmatics(kSoftwareTags), "two words", 0); }),
            ErrorCode::kInvalidArgument);
}

TEST(Crystallize, SubjectAndSourceFilters) {
  Magma m;
  m.Ingest(SoftwareElements());
  Requirement r;
  r.subjects.push_back({SubjectFilter::Kind::kPrefix, "SYSTEM"});
  EXPECT_EQ(Crystallize(m, r, "d", 0).elements.size(), 1u);
  r.subjects = {{SubjectFilter::Kind::kExact, "software"}};
  EXPECT_EQ(Crystallize(m, r, "d", 0).elements.size(), 2u);
  Requirement s;
  s.sources = {"sw"};
  EXPECT_EQ(Crystallize(m, s, "d", 0).elements.size(), 5u);
  s.sources = {"elsewhere"};
  EXPECT_EQ(CodeOf([&] { Crystallize(m, s, "d", 0); }), ErrorCode::kEmptyCrystal);
}

TEST(Crystallize, ResolvesByReliabilityThenTimestamp) {
  Magma m;
  m.Ingest(std::vector{ConceptDef("old", "c1", "f", "x", 5, 1),
                       ConceptDef("new", "c2", "f", "x", 9, 0),
                       ConceptDef("mid", "c3", "f", "x", 7, 1)});
  auto c = Crystallize(m, Pragmatics({"concept-definition"}), "d", 0);
  ASSERT_EQ(c.elements.size(), 1u);
  EXPECT_EQ(c.elements[0].id, "mid");
  EXPECT_TRUE(DetectConflicts(c.elements).empty());
}

// Crystallization never leaves a conflict and only keeps admitted elements.
TEST(Crystallize, ConflictFreeProperty) {
  testing::Rng rng(41);
  for (int round = 0; round < 200; ++round) {
    Magma m;
    std::vector<KnowledgeElement> els;
    int n = 1 + static_cast<int>(rng() % 30);
    for (int i = 0; i < n; ++i) {
      els.push_back(ConceptDef("e" + std::to_string(i), "c" + std::to_string(rng() % 3), "f",
                               "k" + std::to_string(rng() % 4),
                               static_cast<std::int64_t>(rng() % 5), static_cast<int>(rng() % 2)));
    }
    m.Ingest(els);
    auto c = Crystallize(m, Pragmatics({"concept-definition"}), "d", 0);
    EXPECT_TRUE(DetectConflicts(c.elements).empty());
    for (const auto& e : c.elements) EXPECT_NE(m.Find(e.id), nullptr);
    // Every group key of the magma survives exactly once.
    std::set<std::string> keys;
    for (const auto& e : m.elements()) keys.insert(KeyOf(e));
    EXPECT_EQ(c.elements.size(), keys.size());
  }
}

TEST(Renew, NewerDefinitionReplacesOld) {
  Magma m;
  m.Ingest(std::vector{ConceptDef("a", "old cond", "f", "x", 1)});
  auto c = Crystallize(m, Pragmatics({"concept-definition"}), "d", 1);
  auto r = Renew(c, std::vector{ConceptDef("b", "new cond", "f", "x", 2)}, 50);
  ASSERT_EQ(r.elements.size(), 1u);
  EXPECT_EQ(r.elements[0].id, "b");
  EXPECT_EQ(r.version, 2u);
  EXPECT_EQ(r.formed_at, 50);
}

TEST(Renew, ErrorsAndIdentity) {
  Magma m;
  m.Ingest(SoftwareElements());
  auto c = Crystallize(m, Pragmatics({"classification"}), "d", 1);
  EXPECT_EQ(CodeOf([&] { Renew(c, std::vector{ConceptDef("z", "a", "b", "c")}, 2); }),
            ErrorCode::kRequirementViolation);
  auto same = Renew(c, {}, 99);
  EXPECT_EQ(same, c);
  // Content already present changes nothing either.
  auto dup = c.elements[0];
  dup.id = "copy";
  EXPECT_EQ(Renew(c, std::vector{dup}, 99), c);
}

// Renewal agrees with forming the crystal again over the grown magma.
TEST(Renew, KidneyEqualsRecrystallization) {
  testing::Rng rng(43);
  auto req = Pragmatics({"concept-definition"});
  for (int round = 0; round < 200; ++round) {
    Magma m;
    std::vector<KnowledgeElement> base, fresh;
    std::set<std::string> seen;
    int counter = 0;
    auto make = [&] {
      while (true) {
        auto e = ConceptDef("e" + std::to_string(counter), "c" + std::to_string(rng() % 4), "f",
                            "k" + std::to_string(rng() % 3),
                            static_cast<std::int64_t>(rng() % 6), static_cast<int>(rng() % 2));
        if (seen.insert(e.bindings[0].text + "|" + e.bindings[2].text).second) {
          ++counter;
          return e;
        }
      }
    };
    int nb = 1 + static_cast<int>(rng() % 6), nf = static_cast<int>(rng() % 5);
    for (int i = 0; i < nb; ++i) base.push_back(make());
    for (int i = 0; i < nf; ++i) fresh.push_back(make());
    m.Ingest(base);
    auto crystal = Crystallize(m, req, "d", 0);
    auto renewed = Renew(crystal, fresh, 1);
    m.Ingest(fresh);
    auto again = Crystallize(m, req, "d", 1);
    ASSERT_EQ(renewed.elements.size(), again.elements.size());
    for (std::size_t i = 0; i < again.elements.size(); ++i) {
      EXPECT_TRUE(SameContent(renewed.elements[i], again.elements[i]));
    }
    for (const char* k : {"k0", "k1", "k2"}) {
      auto a = QueryDefine(renewed, k);
      auto b = QueryDefine(again, k);
      ASSERT_EQ(a.size(), b.size());
      for (std::size_t i = 0; i < a.size(); ++i) EXPECT_TRUE(SameContent(a[i], b[i]));
    }
    // Version moves exactly when the element set does.
    EXPECT_EQ(renewed.version != crystal.version, renewed.elements != crystal.elements);
  }
}

TEST(Query, Erythrocyte) {
  Magma m;
  m.Ingest(Extract(testing::ErythrocyteKs(), testing::kErythrocyteSentence, "blood").elements);
  auto c = Crystallize(m, Pragmatics({"concept-definition"}), "blood", 0);
  auto def = QueryDefine(c, "erythrocyte");
  ASSERT_EQ(def.size(), 1u);
  EXPECT_EQ(*def[0].Find("concept"), "erythrocyte");
  EXPECT_TRUE(QueryDefine(c, "leukocyte").empty());
  EXPECT_EQ(QueryName(c, "the color of the blood cell is red", "the blood cell"),
            std::vector<std::string>{"erythrocyte"});
  EXPECT_EQ(QueryName(c, "The  color of the blood cell is RED", "the blood cell"),
            std::vector<std::string>{"erythrocyte"});
  EXPECT_TRUE(QueryName(c, "the color is green", "the blood cell").empty());
}

TEST(Query, SoftwareDefineAndSharedCondition) {
  Magma m;
  m.Ingest(SoftwareElements());
  auto c = Crystallize(m, Pragmatics(kSoftwareTags), "software", 0);
  auto def = QueryDefine(c, "software");
  ASSERT_EQ(def.size(), 2u);
  EXPECT_EQ(def[0].pattern_id, "is-a");
  EXPECT_EQ(def[1].pattern_id, "classified-in");

  Crystal two;
  two.elements = {ConceptDef("a", "c", "f", "alpha"), ConceptDef("b", "c", "f", "beta")};
  EXPECT_EQ(QueryName(two, "c", "f"), (std::vector<std::string>{"alpha", "beta"}));
}

// Answers are always drawn from the crystal.
TEST(Query, DefineIsSound) {
  testing::Rng rng(47);
  for (int round = 0; round < 200; ++round) {
    auto c = testing::RandomCrystal(rng);
    for (const auto& e : c.elements) {
      for (const auto& b : e.bindings) {
        for (const auto& hit : QueryDefine(c, b.text)) {
          EXPECT_NE(std::find(c.elements.begin(), c.elements.end(), hit), c.elements.end());
        }
      }
    }
  }
}

TEST(CrystalFormat, RoundTrip) {
  testing::Rng rng(53);
  for (int round = 0; round < 200; ++round) {
    auto c = testing::RandomCrystal(rng);
    auto text = SerializeCrystal(c);
    EXPECT_EQ(ParseCrystal(text), c) << text;
    EXPECT_EQ(SerializeCrystal(ParseCrystal(text)), text);
  }
}

TEST(CrystalFormat, HeaderAndErrors) {
  Crystal c;
  c.domain = "blood";
  c.version = 3;
  c.formed_at = 7;
  c.requirement = Pragmatics({"concept-definition"});
  c.elements = {ConceptDef("a", "c", "f", "x")};
  auto text = SerializeCrystal(c);
  EXPECT_EQ(text.substr(0, text.find('\n')), "crystal blood 3 7");
  EXPECT_EQ(CodeOf([] { ParseCrystal("crystal x\n"); }), ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] { ParseCrystal("crystal x 1 0\nnope\n"); }), ErrorCode::kParse);
}

TEST(ElementFormat, RoundTripWithAwkwardText) {
  testing::Rng rng(59);
  for (int round = 0; round < 200; ++round) {
    auto els = testing::RandomElements(rng, 1 + rng() % 10);
    auto text = SerializeElements(els);
    EXPECT_EQ(ParseElements(text), els) << text;
  }
}

}  // namespace
}  // namespace kwf
