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

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "kwf/binder.h"
#include "kwf/crystallizer.h"
#include "kwf/error.h"
#include "kwf/keystructure.h"
#include "kwf/knowware.h"
#include "kwf/middleware.h"
#include "kwf/pump.h"
#include "kwf/server.h"
#include "kwf/text.h"

namespace kwf {
namespace {

namespace fs = std::filesystem;

std::atomic<bool> g_stop{false};

void OnSignal(int) { g_stop.store(true); }

std::string DefaultDataDir() {
  const char* env = std::getenv("KWF_DATA_DIR");
  return env && *env ? env : "kwf-data";
}

std::vector<std::string> CommaList(const std::string& s) {
  std::vector<std::string> out;
  for (auto& v : Split(s, ',')) {
    if (!Trim(v).empty()) out.emplace_back(Trim(v));
  }
  return out;
}

std::string Stem(const std::string& path) { return fs::path(path).stem().string(); }

}  // namespace

CliConfig LoadCliConfig(const std::string& data_dir) {
  CliConfig cfg;
  cfg.data_dir = data_dir.empty() ? DefaultDataDir() : data_dir;
  std::string path = cfg.data_dir + "/config";
  if (!fs::exists(path)) return cfg;
  int lineno = 0;
  for (const auto& raw : Split(ReadFile(path), '\n')) {
    ++lineno;
    std::string_view line = Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kParse, path + ":" + std::to_string(lineno) +
                                         ": expected 'key = value'");
    }
    std::string key(Trim(line.substr(0, eq)));
    std::string value(Trim(line.substr(eq + 1)));
    if (key == "ks") {
      cfg.default_ks = value;
    } else if (key == "verbosity") {
      long long v = 0;
      if (!ParseInt(value, &v)) throw Error(ErrorCode::kParse, "bad verbosity");
      cfg.verbosity = static_cast<int>(v);
    } else {
      throw Error(ErrorCode::kParse, path + ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"knowware toolkit: pump, crystallize, package and serve knowledge", "kwf"};
  app.require_subcommand(1);
  std::string data_flag;
  app.add_option("--data", data_flag, "warehouse/data directory (default $KWF_DATA_DIR)");

  // pump
  auto* pump = app.add_subcommand("pump", "extract elements from tagged regions");
  std::string pump_doc, pump_tag, pump_ks, pump_out, pump_id;
  std::int64_t pump_ts = 0;
  pump->add_option("--doc", pump_doc)->required()->check(CLI::ExistingFile);
  pump->add_option("--tag", pump_tag)->required();
  pump->add_option("--ks", pump_ks, "key structure (default: ks in config)");
  pump->add_option("--out", pump_out)->required();
  pump->add_option("--doc-id", pump_id, "document id (default: file stem)");
  pump->add_option("--timestamp", pump_ts);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "add element files to the magma");
  std::vector<std::string> ingest_files;
  ingest->add_option("files", ingest_files)->required()->check(CLI::ExistingFile);

  // crystallize
  auto* cryst = app.add_subcommand("crystallize", "form or renew a crystal");
  std::string cr_domain, cr_out, cr_prag, cr_crystal, cr_renew, cr_magma;
  std::vector<std::string> cr_subjects, cr_prefixes, cr_sources;
  std::int64_t cr_at = 0;
  cryst->add_option("--domain", cr_domain);
  cryst->add_option("--pragmatics", cr_prag, "comma-separated tags");
  cryst->add_option("--subject", cr_subjects);
  cryst->add_option("--prefix", cr_prefixes);
  cryst->add_option("--source", cr_sources);
  cryst->add_option("--at", cr_at, "formation time");
  cryst->add_option("--magma", cr_magma, "element file (default: data dir magma)");
  cryst->add_option("--crystal", cr_crystal, "crystal to renew");
  cryst->add_option("--renew-with", cr_renew, "element file of new elements");
  cryst->add_option("--out", cr_out)->required();

  // package
  auto* package = app.add_subcommand("package", "package a crystal as knowware");
  std::string pk_crystal, pk_out;
  PackageMeta meta;
  std::string pk_adapter, pk_auth;
  package->add_option("--crystal", pk_crystal)->required()->check(CLI::ExistingFile);
  package->add_option("--name", meta.name)->required();
  package->add_option("--version", meta.version)->required();
  package->add_option("--license", meta.license_declaration);
  package->add_option("--application", meta.applications);
  package->add_option("--middleware", meta.middleware_compat);
  package->add_option("--adapter", pk_adapter);
  package->add_option("--authentication", pk_auth);
  package->add_option("--out", pk_out)->required();

  // verify
  auto* verify = app.add_subcommand("verify", "check a package's watermark and content list");
  std::string vf_file;
  verify->add_option("package", vf_file)->required()->check(CLI::ExistingFile);

  // inspect
  auto* inspect = app.add_subcommand("inspect", "describe a package, crystal, element or key-structure file");
  std::string in_file;
  inspect->add_option("file", in_file)->required()->check(CLI::ExistingFile);

  // view
  auto* view = app.add_subcommand("view", "apply a view, summary or triple export");
  std::string vw_crystal, vw_package, vw_spec;
  bool vw_summary = false, vw_triples = false;
  auto* vw_src = view->add_option_group("source");
  vw_src->add_option("--crystal", vw_crystal)->check(CLI::ExistingFile);
  vw_src->add_option("--package", vw_package)->check(CLI::ExistingFile);
  vw_src->require_option(1);
  view->add_option("--view", vw_spec, "view file")->check(CLI::ExistingFile);
  view->add_flag("--summary", vw_summary);
  view->add_flag("--triples", vw_triples);

  // query
  auto* query = app.add_subcommand("query", "ask a crystal");
  query->require_subcommand(1);
  auto* q_define = query->add_subcommand("define", "what is <term>?");
  auto* q_name = query->add_subcommand("name", "what is called <concept>?");
  std::string q_term, q_crystal, q_cond, q_father;
  q_define->add_option("term", q_term)->required();
  q_define->add_option("--crystal", q_crystal)->required()->check(CLI::ExistingFile);
  q_name->add_option("--condition", q_cond)->required();
  q_name->add_option("--father", q_father)->required();
  q_name->add_option("--crystal", q_crystal)->required()->check(CLI::ExistingFile);

  // bind
  auto* bind = app.add_subcommand("bind", "bind knowware objects and dispatch methods");
  std::string bd_program, bd_plan;
  std::vector<std::string> bd_calls, bd_merges;
  bind->add_option("--program", bd_program)->required()->check(CLI::ExistingFile);
  bind->add_option("--plan", bd_plan)->required()->check(CLI::ExistingFile);
  bind->add_option("--merge", bd_merges, "a,b: merge knowware b into a first");
  bind->add_option("--call", bd_calls, "object.method");

  // serve
  auto* serve = app.add_subcommand("serve", "run the knowledge server");
  int sv_port = 0;
  bool sv_stdio = false;
  serve->add_option("--port", sv_port);
  serve->add_flag("--stdio", sv_stdio, "serve standard input/output instead of TCP");

  // register
  auto* reg = app.add_subcommand("register", "register with the data-dir server");
  std::string rg_kind, rg_id, rg_meta;
  reg->add_option("kind", rg_kind)
      ->required()
      ->check(CLI::IsMember({"provider", "requester", "middleware", "protocol", "source"}));
  reg->add_option("id", rg_id)->required();
  reg->add_option("meta", rg_meta, "metadata, category, 'from to' or locator");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    CliConfig cfg = LoadCliConfig(data_flag);
    auto magma_paths = [&] {
      return std::pair{cfg.data_dir + "/magma.kel", cfg.data_dir + "/magma.idx"};
    };

    if (*pump) {
      std::string ks_path = pump_ks.empty() ? cfg.default_ks : pump_ks;
      if (ks_path.empty()) {
        err << "pump: --ks is required (no ks in config)\n";
        return kExitUsage;
      }
      PumpSpec spec(pump_tag, LoadKeyStructure(ks_path));
      std::string doc = ReadFile(pump_doc);
      PumpResult r = Pump(doc, spec, pump_id.empty() ? Stem(pump_doc) : pump_id,
                          {pump_ts, 0});
      fs::create_directories(pump_out);
      WriteFile(pump_out + "/marked.txt", r.marked_text);
      WriteFile(pump_out + "/elements.kel", SerializeElements(r.elements));
      WriteFile(pump_out + "/hierarchy.txt", RenderHierarchy(r.hierarchy));
      out << "elements " << r.elements.size() << "\n";
      out << "groups " << r.hierarchy.groups.size() << "\n";
      return kExitOk;
    }

    if (*ingest) {
      fs::create_directories(cfg.data_dir);
      auto [kel, idx] = magma_paths();
      Magma magma = LoadMagma(kel);
      std::vector<KnowledgeElement> batch;
      for (const auto& f : ingest_files) {
        for (auto& e : ParseElements(ReadFile(f))) batch.push_back(std::move(e));
      }
      std::size_t added = magma.Ingest(batch);
      AppendMagma(kel, idx, magma, batch);
      out << "added " << added << "\n" << "total " << magma.size() << "\n";
      return kExitOk;
    }

    if (*cryst) {
      Crystal c;
      if (!cr_crystal.empty() || !cr_renew.empty()) {
        if (cr_crystal.empty() || cr_renew.empty()) {
          err << "crystallize: --crystal and --renew-with go together\n";
          return kExitUsage;
        }
        auto fresh = ParseElements(ReadFile(cr_renew));
        c = Renew(ParseCrystal(ReadFile(cr_crystal)), fresh, cr_at);
      } else {
        if (cr_domain.empty()) {
          err << "crystallize: --domain is required\n";
          return kExitUsage;
        }
        Requirement req;
        req.pragmatics = CommaList(cr_prag);
        for (auto& s : cr_subjects) req.subjects.push_back({SubjectFilter::Kind::kExact, s});
        for (auto& s : cr_prefixes) req.subjects.push_back({SubjectFilter::Kind::kPrefix, s});
        req.sources = cr_sources;
        Magma magma = LoadMagma(cr_magma.empty() ? magma_paths().first : cr_magma);
        c = Crystallize(magma, req, cr_domain, cr_at);
      }
      WriteFile(cr_out, SerializeCrystal(c));
      out << "crystal " << c.domain << " " << c.version << " " << c.elements.size()
          << "\n";
      return kExitOk;
    }

    if (*package) {
      if (!pk_adapter.empty()) meta.adapter = pk_adapter;
      if (!pk_auth.empty()) meta.authentication = pk_auth;
      KnowwarePackage pkg = Package(ParseCrystal(ReadFile(pk_crystal)), meta);
      WriteFile(pk_out, pkg.Serialize());
      out << "watermark " << pkg.manifest().watermark << "\n";
      return kExitOk;
    }

    if (*verify) {
      VerifyResult v = Verify(Open(ReadFile(vf_file)));
      if (!v.ok) {
        out << "fail " << v.reason << "\n";
        return kExitDomain;
      }
      out << (v.authenticated ? "ok authenticated\n" : "ok\n");
      return kExitOk;
    }

    if (*inspect) {
      std::string bytes = ReadFile(in_file);
      if (StartsWith(bytes, "KNOWWARE ")) {
        KnowwarePackage pkg = Open(bytes);
        out << RenderManifest(InterfaceOf(pkg));
        VerifyResult v = Verify(pkg);
        out << "verify = " << (v.ok ? "ok" : "fail " + v.reason) << "\n";
      } else if (StartsWith(bytes, "crystal ")) {
        out << RenderSummary(Summarize(ParseCrystal(bytes)));
      } else if (StartsWith(bytes, "elem ")) {
        auto elements = ParseElements(bytes);
        out << "elements " << elements.size() << "\n"
            << RenderHierarchy(BuildHierarchy(elements));
      } else {
        out << RenderKeyStructureFile(ParseKeyStructureFile(bytes, Stem(in_file)));
      }
      return kExitOk;
    }

    if (*view) {
      Crystal c;
      if (!vw_spec.empty()) {
        ViewSpec spec = ParseViewFile(ReadFile(vw_spec));
        c = vw_package.empty() ? ApplyView(ParseCrystal(ReadFile(vw_crystal)), spec)
                               : ApplyView(Open(ReadFile(vw_package)), spec);
      } else if (!vw_package.empty()) {
        KnowwarePackage pkg = Open(ReadFile(vw_package));
        if (VerifyResult v = Verify(pkg); !v.ok) {
          throw Error(ErrorCode::kVerifyFailed, "package fails verify: " + v.reason);
        }
        c = CrystalOf(pkg);
      } else {
        c = ParseCrystal(ReadFile(vw_crystal));
      }
      if (vw_summary) {
        out << RenderSummary(Summarize(c));
      } else if (vw_triples) {
        std::vector<Triple> triples;
        for (const auto& e : c.elements) {
          for (auto& t : ToTriples(e)) triples.push_back(std::move(t));
        }
        out << RenderTriplesTsv(triples);
      } else {
        out << SerializeCrystal(c);
      }
      return kExitOk;
    }

    if (*query) {
      Crystal c = ParseCrystal(ReadFile(q_crystal));
      if (*q_define) {
        for (const auto& e : QueryDefine(c, q_term)) out << SerializeElement(e) << "\n";
      } else {
        for (const auto& n : QueryName(c, q_cond, q_father)) out << n << "\n";
      }
      return kExitOk;
    }

    if (*bind) {
      Program program = ParseProgram(ReadFile(bd_program));
      BindingPlan plan = ParsePlan(ReadFile(bd_plan));
      for (const auto& m : bd_merges) {
        auto ids = CommaList(m);
        if (ids.size() != 2) {
          err << "bind: --merge takes 'a,b'\n";
          return kExitUsage;
        }
        MergeResult r = MergeKnowware(program, ids[0], ids[1], plan);
        program = std::move(r.program);
        plan = std::move(r.plan);
      }
      BoundProgram bound = Bind(program, plan);
      for (const auto& o : bound.objects()) out << RenderObject(o);
      for (const auto& [key, name] : bound.rename_log()) {
        out << "renamed " << key.object << " " << key.source << " " << key.member
            << " " << name << "\n";
      }
      for (const auto& call : bd_calls) {
        auto dot = call.rfind('.');
        if (dot == std::string::npos) {
          err << "bind: --call takes object.method\n";
          return kExitUsage;
        }
        // The method part may itself be a renamed "<source>.<member>".
        std::string obj = call.substr(0, call.find('.'));
        std::string method = call.substr(obj.size() + 1);
        std::string value = bound.Dispatch(obj, method);
        out << "call " << call << " = " << value << "\n";
      }
      return kExitOk;
    }

    if (*serve) {
      Server server(cfg.data_dir);
      if (sv_stdio) {
        server.ServeStream(std::cin, out);
        return kExitOk;
      }
      std::signal(SIGINT, OnSignal);
      std::signal(SIGTERM, OnSignal);
      server.ServeTcp(sv_port, g_stop, [&](int port) {
        out << "listening " << port << "\n" << std::flush;
      });
      return kExitOk;
    }

    if (*reg) {
      Server server(cfg.data_dir);
      std::string line = "REGISTER " + rg_kind + " " + rg_id;
      if (!rg_meta.empty()) line += " " + rg_meta;
      std::string reply = server.Handle(line);
      out << reply;
      return StartsWith(reply, "OK") ? kExitOk : kExitDomain;
    }
  } catch (const Error& e) {
    err << "kwf: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "kwf: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace kwf
