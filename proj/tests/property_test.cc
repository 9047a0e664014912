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


// Cross-module properties: the CLI adds nothing to library results, and the
// server rebuilds the same state from its journal whatever the request mix.

#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.h"
#include "generators.h"
#include "kwf/binder.h"
#include "kwf/cli.h"
#include "kwf/crystallizer.h"
#include "kwf/error.h"
#include "kwf/knowware.h"
#include "kwf/middleware.h"
#include "kwf/server.h"
#include "kwf/text.h"

namespace kwf {
namespace {

using testing::Rng;
using testing::ScratchDir;

std::string CliOut(std::vector<std::string> args, int* code = nullptr) {
  std::ostringstream out, err;
  int c = Run(args, out, err);
  if (code) *code = c;
  return out.str();
}

TEST(Property, CliViewIsLibraryView) {
  ScratchDir dir;
  Rng rng(41);
  for (int i = 0; i < 60; ++i) {
    Crystal c = testing::RandomCrystal(rng);
    ViewSpec v = testing::RandomView(rng);
    WriteFile(dir / "c", SerializeCrystal(c));
    WriteFile(dir / "v", RenderViewFile(v));
    SCOPED_TRACE(SerializeCrystal(c) + RenderViewFile(v));
    EXPECT_EQ(CliOut({"view", "--crystal", dir / "c", "--view", dir / "v"}),
              SerializeCrystal(ApplyView(c, v)));
    EXPECT_EQ(CliOut({"view", "--crystal", dir / "c", "--summary"}),
              RenderSummary(Summarize(c)));
    std::vector<Triple> triples;
    for (const auto& e : c.elements) {
      for (auto& t : ToTriples(e)) triples.push_back(t);
    }
    EXPECT_EQ(CliOut({"view", "--crystal", dir / "c", "--triples"}), RenderTriplesTsv(triples));
  }
}

TEST(Property, CliPackageIsLibraryPackage) {
  ScratchDir dir;
  Rng rng(43);
  for (int i = 0; i < 40; ++i) {
    Crystal c = testing::RandomCrystal(rng);
    WriteFile(dir / "c", SerializeCrystal(c));
    PackageMeta meta;
    meta.name = "k" + std::to_string(i);
    meta.version = "1." + std::to_string(i);
    meta.license_declaration = "CC0";
    std::string out = CliOut({"package", "--crystal", dir / "c", "--name", meta.name,
                              "--version", meta.version, "--license", "CC0", "--out",
                              dir / "k"});
    std::string bytes = Package(c, meta).Serialize();
    EXPECT_EQ(ReadFile(dir / "k"), bytes);
    EXPECT_EQ(CliOut({"verify", dir / "k"}), "ok\n");
    // A package viewed through the CLI equals the crystal it was made from.
    EXPECT_EQ(CliOut({"view", "--package", dir / "k"}), SerializeCrystal(c));
  }
}

TEST(Property, CliBindIsLibraryBind) {
  ScratchDir dir;
  Rng rng(47);
  for (int i = 0; i < 80; ++i) {
    auto mix = testing::RandomProgram(rng);
    WriteFile(dir / "prog", RenderProgram(mix.program));
    WriteFile(dir / "plan", RenderPlan(mix.plan));
    BoundProgram bound = Bind(mix.program, mix.plan);
    std::string header;
    for (const auto& o : bound.objects()) header += RenderObject(o);
    for (const auto& [key, name] : bound.rename_log()) {
      header += "renamed " + key.object + " " + key.source + " " + key.member + " " + name + "\n";
    }
    for (const auto& [obj, method] : testing::AllCalls(bound)) {
      std::string call = obj + "." + method;
      int code = 0;
      std::string out =
          CliOut({"bind", "--program", dir / "prog", "--plan", dir / "plan", "--call", call},
                 &code);
      std::string want = testing::DispatchAll(bound, {{obj, method}})[0];
      if (want.rfind("ERR:", 0) == 0) {
        EXPECT_EQ(code, kExitDomain) << call;
        EXPECT_EQ(out, header) << call;
      } else {
        EXPECT_EQ(code, kExitOk) << call;
        EXPECT_EQ(out, header + "call " + call + " = " + want + "\n");
      }
    }
  }
}

// A random mix of registrations, uploads and external entries, with
// repeated ids so that some requests fail.
std::vector<std::pair<std::string, std::string>> RandomRequests(Rng& rng) {
  std::vector<std::pair<std::string, std::string>> out;
  std::uniform_int_distribution<int> kind(0, 6), id(0, 4), len(0, 20);
  const char* kinds[] = {"PROVIDER", "REQUESTER", "SOURCE", "MIDDLEWARE"};
  const char* cats[] = {"extraction", "service", "bogus"};
  for (int i = 0; i < 30; ++i) {
    std::string n = std::to_string(id(rng));
    switch (kind(rng)) {
      case 0:
      case 1: {
        std::string body;
        for (int k = len(rng); k > 0; --k) body.push_back("ab \n<>X"[id(rng)]);
        out.push_back({"PUT ORE d" + n + " " + std::to_string(body.size()), body});
        break;
      }
      case 2:
        out.push_back({"PUT EXTERNAL e" + n + " 1 u" + n, ""});
        break;
      case 3:
        out.push_back({"REGISTER MIDDLEWARE m" + n + " " + cats[id(rng) % 3], ""});
        break;
      case 4:
        out.push_back({"LIST ORE", ""});
        break;
      default:
        out.push_back({std::string("REGISTER ") + kinds[id(rng) % 4] + " x" + n + " meta " + n,
                       ""});
    }
  }
  return out;
}

TEST(Property, JournalReplayIsExact) {
  Rng rng(53);
  const char* lists[] = {"ORE",       "KNOWWARE",   "SOURCES",   "PROVIDERS",
                         "REQUESTERS", "MIDDLEWARE", "PROTOCOLS", "KS"};
  for (int i = 0; i < 40; ++i) {
    ScratchDir dir;
    auto requests = RandomRequests(rng);
    std::string first;
    std::uint64_t clock = 0;
    std::size_t ok = 0;
    {
      Server s(dir.str());
      for (const auto& [line, body] : requests) {
        std::string reply = s.Handle(line, body);
        if (IsMutating(line) && reply.rfind("OK", 0) == 0) ++ok;
      }
      for (const char* l : lists) first += s.Handle(std::string("LIST ") + l);
      clock = s.clock();
    }
    EXPECT_EQ(clock, ok);
    Server again(dir.str());
    std::string second;
    for (const char* l : lists) second += again.Handle(std::string("LIST ") + l);
    EXPECT_EQ(second, first);
    EXPECT_EQ(again.clock(), clock);
    EXPECT_EQ(again.warehouse().ore, Server(dir.str()).warehouse().ore);
  }
}

TEST(Property, StreamEqualsHandle) {
  Rng rng(59);
  for (int i = 0; i < 40; ++i) {
    auto requests = RandomRequests(rng);
    std::string input, want;
    Server direct;
    for (const auto& [line, body] : requests) {
      input += line + "\n" + body;
      want += direct.Handle(line, body);
    }
    std::istringstream in(input);
    std::ostringstream out;
    Server streamed;
    streamed.ServeStream(in, out);
    EXPECT_EQ(out.str(), want);
  }
}

}  // namespace
}  // namespace kwf
