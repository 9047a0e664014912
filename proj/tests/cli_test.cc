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


#include "kwf/cli.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "fixtures.h"
#include "kwf/binder.h"
#include "kwf/crystallizer.h"
#include "kwf/error.h"
#include "kwf/knowware.h"
#include "kwf/middleware.h"
#include "kwf/pump.h"
#include "kwf/text.h"

namespace kwf {
namespace {

using testing::ScratchDir;
using testing::TestData;

namespace fs = std::filesystem;

constexpr const char* kSoftwarePragmatics =
    "intensional-definition,classification,extensional-definition";

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome Kwf(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = Run(args, out, err);
  return {code, out.str(), err.str()};
}

// Pumps both examples into `dir`, ingests them and crystallizes per domain.
void Prepare(const ScratchDir& dir) {
  ASSERT_EQ(Kwf({"pump", "--doc", TestData("software.txt"), "--tag", "SOFTWARE", "--ks",
                 TestData("software.ksl"), "--out", dir / "sw", "--timestamp", "3"})
                .code,
            kExitOk);
  ASSERT_EQ(Kwf({"pump", "--doc", TestData("erythrocyte.txt"), "--tag", "BLOOD", "--ks",
                 TestData("erythrocyte.ksl"), "--out", dir / "blood"})
                .code,
            kExitOk);
  ASSERT_EQ(Kwf({"--data", dir / "data", "ingest", dir / "sw/elements.kel",
                 dir / "blood/elements.kel"})
                .code,
            kExitOk);
  ASSERT_EQ(Kwf({"--data", dir / "data", "crystallize", "--domain", "blood", "--pragmatics",
                 "concept-definition", "--out", dir / "blood.crystal"})
                .code,
            kExitOk);
  ASSERT_EQ(Kwf({"--data", dir / "data", "crystallize", "--domain", "software", "--pragmatics",
                 kSoftwarePragmatics, "--out", dir / "software.crystal"})
                .code,
            kExitOk);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(Kwf({}).code, kExitUsage);
  EXPECT_EQ(Kwf({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(Kwf({"pump", "--tag", "X"}).code, kExitUsage);
  EXPECT_EQ(Kwf({"verify", "/nonexistent/file"}).code, kExitUsage);
  EXPECT_EQ(Kwf({"register", "wizard", "x"}).code, kExitUsage);
  Outcome help = Kwf({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("pump"), std::string::npos);
}

TEST(Cli, PumpWritesThreeFiles) {
  ScratchDir dir;
  Outcome o = Kwf({"pump", "--doc", TestData("software.txt"), "--tag", "SOFTWARE", "--ks",
                   TestData("software.ksl"), "--out", dir / "out", "--doc-id", "sw"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_EQ(o.out, "elements 5\ngroups 3\n");

  PumpResult r = Pump(ReadFile(TestData("software.txt")),
                      PumpSpec("SOFTWARE", testing::SoftwareKs()), "sw");
  EXPECT_EQ(ReadFile(dir / "out/marked.txt"), r.marked_text);
  EXPECT_EQ(ReadFile(dir / "out/elements.kel"), SerializeElements(r.elements));
  EXPECT_EQ(ReadFile(dir / "out/hierarchy.txt"), RenderHierarchy(r.hierarchy));
  EXPECT_EQ(r.marked_text, testing::kSoftwareMarked);
}

TEST(Cli, PumpUsesConfiguredKeyStructure) {
  ScratchDir dir;
  Outcome none = Kwf({"--data", dir.str(), "pump", "--doc", TestData("software.txt"),
                      "--tag", "SOFTWARE", "--out", dir / "out"});
  EXPECT_EQ(none.code, kExitUsage);

  WriteFile(dir / "config", "# defaults\nks = " + TestData("software.ksl") + "\n");
  Outcome o = Kwf({"--data", dir.str(), "pump", "--doc", TestData("software.txt"), "--tag",
                   "SOFTWARE", "--out", dir / "out"});
  EXPECT_EQ(o.code, kExitOk) << o.err;
  EXPECT_EQ(o.out, "elements 5\ngroups 3\n");
}

TEST(Cli, DomainErrorsExitTwo) {
  ScratchDir dir;
  WriteFile(dir / "doc.txt", "<A>unclosed");
  Outcome o = Kwf({"pump", "--doc", dir / "doc.txt", "--tag", "A", "--ks",
                   TestData("software.ksl"), "--out", dir / "out"});
  EXPECT_EQ(o.code, kExitDomain);
  EXPECT_EQ(o.err.rfind("kwf: unbalanced-tag:", 0), 0u) << o.err;

  WriteFile(dir / "config", "colour = red\n");
  EXPECT_EQ(Kwf({"--data", dir.str(), "ingest", TestData("software.txt")}).code, kExitDomain);
}

TEST(Cli, Config) {
  ScratchDir dir;
  CliConfig plain = LoadCliConfig(dir.str());
  EXPECT_EQ(plain.data_dir, dir.str());
  EXPECT_EQ(plain.default_ks, "");
  WriteFile(dir / "config", "ks = a.ksl\n\n  verbosity = 2\n");
  CliConfig c = LoadCliConfig(dir.str());
  EXPECT_EQ(c.default_ks, "a.ksl");
  EXPECT_EQ(c.verbosity, 2);
  WriteFile(dir / "config", "verbosity = loud\n");
  EXPECT_THROW(LoadCliConfig(dir.str()), kwf::Error);
  WriteFile(dir / "config", "just words\n");
  EXPECT_THROW(LoadCliConfig(dir.str()), kwf::Error);
}

TEST(Cli, IngestAndCrystallizeMatchLibrary) {
  ScratchDir dir;
  Prepare(dir);
  Magma m = LoadMagma(dir / "data/magma.kel");
  EXPECT_EQ(m.size(), 6u);
  EXPECT_EQ(ReadFile(dir / "data/magma.idx"), RenderMagmaIndex(m));

  Requirement req;
  req.pragmatics = {"intensional-definition", "classification", "extensional-definition"};
  EXPECT_EQ(ReadFile(dir / "software.crystal"),
            SerializeCrystal(Crystallize(m, req, "software", 0)));

  // The same ids again are rejected and leave the magma alone.
  Outcome again = Kwf({"--data", dir / "data", "ingest", dir / "sw/elements.kel"});
  EXPECT_EQ(again.code, kExitDomain);
  EXPECT_EQ(LoadMagma(dir / "data/magma.kel").size(), 6u);
}

TEST(Cli, Queries) {
  ScratchDir dir;
  Prepare(dir);
  Crystal blood = ParseCrystal(ReadFile(dir / "blood.crystal"));
  ASSERT_EQ(blood.elements.size(), 1u);
  Outcome d = Kwf({"query", "define", "erythrocyte", "--crystal", dir / "blood.crystal"});
  EXPECT_EQ(d.code, kExitOk);
  EXPECT_EQ(d.out, SerializeElement(blood.elements[0]) + "\n");

  Outcome n = Kwf({"query", "name", "--condition", "the color of the blood cell is red",
                   "--father", "the blood cell", "--crystal", dir / "blood.crystal"});
  EXPECT_EQ(n.code, kExitOk);
  EXPECT_EQ(n.out, "erythrocyte\n");

  Outcome none = Kwf({"query", "define", "leukocyte", "--crystal", dir / "blood.crystal"});
  EXPECT_EQ(none.code, kExitOk);
  EXPECT_EQ(none.out, "");
}

TEST(Cli, PackageVerifyInspect) {
  ScratchDir dir;
  Prepare(dir);
  Outcome p = Kwf({"package", "--crystal", dir / "software.crystal", "--name", "sw",
                   "--version", "1.0", "--license", "CC-BY-4.0", "--out", dir / "sw.kw"});
  ASSERT_EQ(p.code, kExitOk) << p.err;
  std::string bytes = ReadFile(dir / "sw.kw");
  KnowwarePackage pkg = Open(bytes);
  EXPECT_EQ(p.out, "watermark " + pkg.manifest().watermark + "\n");

  EXPECT_EQ(Kwf({"verify", dir / "sw.kw"}).out, "ok\n");
  Outcome ins = Kwf({"inspect", dir / "sw.kw"});
  EXPECT_EQ(ins.code, kExitOk);
  EXPECT_EQ(ins.out, RenderManifest(InterfaceOf(pkg)) + "verify = ok\n");

  bytes.back() = static_cast<char>(bytes.back() ^ 0x01);
  WriteFile(dir / "bad.kw", bytes);
  Outcome v = Kwf({"verify", dir / "bad.kw"});
  EXPECT_EQ(v.code, kExitDomain);
  EXPECT_EQ(v.out, "fail watermark\n");
  EXPECT_EQ(Kwf({"inspect", dir / "bad.kw"}).out.find("verify = fail watermark"),
            RenderManifest(InterfaceOf(Open(bytes))).size());
  EXPECT_EQ(Kwf({"view", "--package", dir / "bad.kw"}).code, kExitDomain);

  Outcome auth = Kwf({"package", "--crystal", dir / "blood.crystal", "--name", "b",
                      "--version", "1", "--authentication", "sig:abc", "--out", dir / "b.kw"});
  ASSERT_EQ(auth.code, kExitOk);
  EXPECT_EQ(Kwf({"verify", dir / "b.kw"}).out, "ok authenticated\n");

  EXPECT_EQ(Kwf({"package", "--crystal", dir / "blood.crystal", "--name", "two words",
                 "--version", "1", "--out", dir / "c.kw"})
                .code,
            kExitDomain);
}

TEST(Cli, InspectOtherFiles) {
  ScratchDir dir;
  Prepare(dir);
  Crystal c = ParseCrystal(ReadFile(dir / "software.crystal"));
  EXPECT_EQ(Kwf({"inspect", dir / "software.crystal"}).out, RenderSummary(Summarize(c)));
  auto elements = ParseElements(ReadFile(dir / "sw/elements.kel"));
  EXPECT_EQ(Kwf({"inspect", dir / "sw/elements.kel"}).out,
            "elements 5\n" + RenderHierarchy(BuildHierarchy(elements)));
  EXPECT_EQ(Kwf({"inspect", TestData("software.ksl")}).out,
            RenderKeyStructureFile(testing::SoftwareKs()));
}

TEST(Cli, Views) {
  ScratchDir dir;
  Prepare(dir);
  Crystal c = ParseCrystal(ReadFile(dir / "software.crystal"));
  EXPECT_EQ(Kwf({"view", "--crystal", dir / "software.crystal"}).out, SerializeCrystal(c));
  EXPECT_EQ(Kwf({"view", "--crystal", dir / "software.crystal", "--summary"}).out,
            RenderSummary(Summarize(c)));

  std::vector<Triple> triples;
  for (const auto& e : c.elements) {
    for (auto& t : ToTriples(e)) triples.push_back(t);
  }
  EXPECT_EQ(Kwf({"view", "--crystal", dir / "software.crystal", "--triples"}).out,
            RenderTriplesTsv(triples));

  ViewSpec v;
  v.pragmatics = std::set<std::string>{"extensional-definition"};
  WriteFile(dir / "ext.view", RenderViewFile(v));
  EXPECT_EQ(Kwf({"view", "--crystal", dir / "software.crystal", "--view", dir / "ext.view"}).out,
            SerializeCrystal(ApplyView(c, v)));
  EXPECT_EQ(Kwf({"view"}).code, kExitUsage);
}

TEST(Cli, RenewFromFiles) {
  ScratchDir dir;
  Prepare(dir);
  ASSERT_EQ(Kwf({"crystallize", "--domain", "all", "--prefix", "", "--magma",
                 dir / "sw/elements.kel", "--out", dir / "all.crystal"})
                .out,
            "crystal all 1 5\n");
  Outcome o = Kwf({"crystallize", "--crystal", dir / "all.crystal", "--renew-with",
                   dir / "blood/elements.kel", "--at", "9", "--out", dir / "renewed"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  Crystal want = Renew(ParseCrystal(ReadFile(dir / "all.crystal")),
                       ParseElements(ReadFile(dir / "blood/elements.kel")), 9);
  EXPECT_EQ(ReadFile(dir / "renewed"), SerializeCrystal(want));
  EXPECT_EQ(o.out, "crystal all 2 6\n");

  // Fresh elements outside the crystal's requirement are refused.
  Outcome outside = Kwf({"crystallize", "--crystal", dir / "software.crystal", "--renew-with",
                         dir / "blood/elements.kel", "--out", dir / "x"});
  EXPECT_EQ(outside.code, kExitDomain);
  EXPECT_EQ(outside.err.rfind("kwf: requirement-violation:", 0), 0u);
  EXPECT_EQ(Kwf({"crystallize", "--crystal", dir / "software.crystal", "--out", dir / "x"}).code,
            kExitUsage);
}

MixObject RunKmo(const std::string& id) {
  MixObject kmo;
  kmo.id = id;
  kmo.kind = ObjectKind::kMiddleware;
  kmo.AddMethod("run", {"songs"}, {{true, id + " plays "}, {false, "songs"}});
  return kmo;
}

TEST(Cli, BindAndCall) {
  ScratchDir dir;
  MixObject ko;
  ko.id = "mp3";
  ko.kind = ObjectKind::kKnowware;
  ko.AddData("songs", "s1;s2");
  Program p;
  p.objects = {ko, RunKmo("kmo1"), RunKmo("kmo2")};
  BindingPlan plan;
  plan.bindings["mp3"] = {"kmo1", "kmo2"};
  WriteFile(dir / "prog", RenderProgram(p));
  WriteFile(dir / "plan", RenderPlan(plan));

  Outcome o = Kwf({"bind", "--program", dir / "prog", "--plan", dir / "plan", "--call",
                   "mp3.kmo1.run", "--call", "mp3.kmo2.run"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  BoundProgram bound = Bind(p, plan);
  std::string want;
  for (const auto& obj : bound.objects()) want += RenderObject(obj);
  want += "renamed mp3 kmo1 run kmo1.run\n";
  want += "renamed mp3 kmo2 run kmo2.run\n";
  want += "call mp3.kmo1.run = kmo1 plays s1;s2\n";
  want += "call mp3.kmo2.run = kmo2 plays s1;s2\n";
  EXPECT_EQ(o.out, want);

  Outcome missing = Kwf({"bind", "--program", dir / "prog", "--plan", dir / "plan", "--call",
                         "mp3.run"});
  EXPECT_EQ(missing.code, kExitDomain);
  EXPECT_EQ(missing.err.rfind("kwf: no-such-method:", 0), 0u) << missing.err;
  EXPECT_EQ(Kwf({"bind", "--program", dir / "prog", "--plan", dir / "plan", "--call", "mp3"})
                .code,
            kExitUsage);
  EXPECT_EQ(Kwf({"bind", "--program", dir / "prog", "--plan", dir / "plan", "--merge", "mp3"})
                .code,
            kExitUsage);
}

TEST(Cli, RegisterGoesThroughTheJournal) {
  ScratchDir dir;
  Outcome a = Kwf({"--data", dir.str(), "register", "provider", "p1", "lab"});
  EXPECT_EQ(a.code, kExitOk);
  EXPECT_EQ(a.out, "OK\n");
  Outcome b = Kwf({"--data", dir.str(), "register", "provider", "p1"});
  EXPECT_EQ(b.code, kExitDomain);
  EXPECT_EQ(b.out, "ERR 409 duplicate-id\n");
  EXPECT_EQ(Kwf({"--data", dir.str(), "register", "middleware", "m", "service"}).code,
            kExitOk);
  EXPECT_EQ(ReadFile(dir / "journal"),
            "REGISTER provider p1 lab\nREGISTER middleware m service\n");
}

}  // namespace
}  // namespace kwf
