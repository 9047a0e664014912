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

#include "kwf/server.h"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <streambuf>
#include <thread>

#include "kwf/error.h"
#include "kwf/keystructure.h"
#include "kwf/knowware.h"
#include "kwf/middleware.h"
#include "kwf/pump.h"
#include "kwf/text.h"

namespace kwf {
namespace {

constexpr std::array<std::string_view, 7> kCategories = {
    "extraction", "transformation", "crystallization", "production",
    "operating",  "combination",    "service"};

constexpr std::array<std::string_view, 4> kLayers = {"ORE", "MAGMA", "CRYSTAL",
                                                      "KNOWWARE"};

// Whitespace-separated words; double quotes group (and are dropped), with
// backslash escapes inside them.
std::vector<std::string> Tokens(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (true) {
    while (i < s.size() && IsSpace(s[i])) ++i;
    if (i >= s.size()) break;
    std::string tok;
    bool quoted = false;
    for (; i < s.size() && (quoted || !IsSpace(s[i])); ++i) {
      if (s[i] == '"') {
        quoted = !quoted;
      } else if (quoted && s[i] == '\\' && i + 1 < s.size()) {
        tok.push_back(s[++i]);
      } else {
        tok.push_back(s[i]);
      }
    }
    if (quoted) throw Error(ErrorCode::kParse, "unterminated quote");
    out.push_back(std::move(tok));
  }
  return out;
}

// What follows the first `n` words of `line`, trimmed.
std::string_view RestAfter(std::string_view line, int n) {
  std::size_t i = 0;
  for (int w = 0; w < n; ++w) {
    while (i < line.size() && IsSpace(line[i])) ++i;
    while (i < line.size() && !IsSpace(line[i])) ++i;
  }
  return Trim(line.substr(i));
}

std::string OkLines(const std::vector<std::string>& lines) {
  std::string out = "OK " + std::to_string(lines.size()) + "\n";
  for (const auto& l : lines) out += l + "\n";
  return out;
}

std::string OkBytes(std::string_view bytes) {
  return "OK " + std::to_string(bytes.size()) + "\n" + std::string(bytes);
}

int StatusOf(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kIncompleteMeta:
    case ErrorCode::kAdjacentSlots:
    case ErrorCode::kNoKeyword:
    case ErrorCode::kRoleCountMismatch:
    case ErrorCode::kDuplicatePragmatics:
    case ErrorCode::kUnknownTag:
      return 400;
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kWrongLayer:
    case ErrorCode::kDuplicateId:
      return 409;
    case ErrorCode::kIo:
      return 500;
    default:
      return 422;
  }
}

std::string Err(int status, std::string_view token) {
  return "ERR " + std::to_string(status) + " " + std::string(token) + "\n";
}

Error Usage(const std::string& form) {
  return Error(ErrorCode::kParse, "usage: " + form);
}

std::uint64_t ParseVersion(const std::string& s) {
  unsigned long long v = 0;
  if (!ParseUint(s, &v)) throw Error(ErrorCode::kParse, "bad version '" + s + "'");
  return v;
}

std::pair<std::string, std::string> KeyValue(const std::string& tok) {
  auto eq = tok.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorCode::kParse, "expected key=value, got '" + tok + "'");
  }
  return {tok.substr(0, eq), tok.substr(eq + 1)};
}

std::vector<std::string> CommaList(const std::string& s) {
  std::vector<std::string> out;
  for (auto& v : Split(s, ',')) {
    if (!v.empty()) out.push_back(v);
  }
  return out;
}

std::string Upper(std::string s) {
  for (char& c : s) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return s;
}

// std::streambuf over a connected socket.
class SocketBuf : public std::streambuf {
 public:
  explicit SocketBuf(int fd) : fd_(fd) {
    setg(in_, in_, in_);
    setp(out_, out_ + sizeof(out_));
  }

 protected:
  int_type underflow() override {
    ssize_t n;
    do {
      n = ::recv(fd_, in_, sizeof(in_), 0);
    } while (n < 0 && errno == EINTR);
    if (n <= 0) return traits_type::eof();
    setg(in_, in_, in_ + n);
    return traits_type::to_int_type(*gptr());
  }

  int_type overflow(int_type c) override {
    if (sync() != 0) return traits_type::eof();
    if (!traits_type::eq_int_type(c, traits_type::eof())) {
      *pptr() = traits_type::to_char_type(c);
      pbump(1);
    }
    return traits_type::not_eof(c);
  }

  int sync() override {
    char* p = pbase();
    while (p < pptr()) {
      ssize_t n = ::send(fd_, p, static_cast<std::size_t>(pptr() - p), MSG_NOSIGNAL);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) return -1;
      p += n;
    }
    setp(out_, out_ + sizeof(out_));
    return 0;
  }

 private:
  int fd_;
  char in_[4096];
  char out_[4096];
};

}  // namespace

bool IsMiddlewareCategory(std::string_view category) {
  return std::find(kCategories.begin(), kCategories.end(), category) !=
         kCategories.end();
}

bool IsMutating(std::string_view line) {
  auto w = SplitWhitespace(line);
  if (w.empty()) return false;
  std::string verb = Upper(w[0]);
  return verb == "PUT" || verb == "PROMOTE" || verb == "REGISTER";
}

std::optional<std::size_t> BodyLength(std::string_view line) {
  auto w = SplitWhitespace(line);
  if (w.size() != 4 || Upper(w[0]) != "PUT") return std::nullopt;
  std::string what = Upper(w[1]);
  if (what != "ORE" && what != "KS") return std::nullopt;
  unsigned long long n = 0;
  if (!ParseUint(w[3], &n)) return std::nullopt;
  return static_cast<std::size_t>(n);
}

Server::Server(std::string data_dir) : data_dir_(std::move(data_dir)) {
  reg_.middleware = {{"kwf-pump", "extraction"},
                     {"kwf-crystallizer", "crystallization"},
                     {"kwf-triples", "transformation"},
                     {"kwf-view", "operating"},
                     {"kwf-summary", "operating"}};
  reg_.protocols["kel-tsv"] = {std::string(kRepresentationFormat), "tsv-triples"};
  if (!data_dir_.empty()) {
    std::filesystem::create_directories(data_dir_);
    Replay();
  }
}

void Server::Replay() {
  std::string path = data_dir_ + "/journal";
  if (!std::filesystem::exists(path)) return;
  std::string journal = ReadFile(path);
  std::size_t pos = 0;
  while (pos < journal.size()) {
    auto nl = journal.find('\n', pos);
    if (nl == std::string::npos) throw Error(ErrorCode::kIo, "journal ends mid-record");
    std::string_view line = std::string_view(journal).substr(pos, nl - pos);
    pos = nl + 1;
    std::string_view body;
    if (auto n = BodyLength(line)) {
      if (*n > journal.size() - pos) throw Error(ErrorCode::kIo, "journal body truncated");
      body = std::string_view(journal).substr(pos, *n);
      pos += *n;
    }
    bool mutated = false;
    std::string reply = Dispatch(line, body, &mutated);
    if (!mutated) {
      throw Error(ErrorCode::kIo, "journal record '" + std::string(line) +
                                      "' no longer applies: " + reply);
    }
    ++clock_;
  }
}

std::string Server::Handle(std::string_view line, std::string_view body) {
  if (!IsMutating(line)) {
    std::shared_lock lock(mu_);
    bool mutated = false;
    return Dispatch(line, body, &mutated);
  }
  std::unique_lock lock(mu_);
  bool mutated = false;
  std::string reply = Dispatch(line, body, &mutated);
  if (mutated) {
    ++clock_;
    if (!data_dir_.empty()) {
      std::ofstream out(data_dir_ + "/journal", std::ios::binary | std::ios::app);
      out << line << '\n' << body;
      out.flush();
      if (!out) return Err(500, "io");
    }
  }
  return reply;
}

std::string Server::Dispatch(std::string_view line, std::string_view body,
                             bool* mutated) {
  *mutated = false;
  try {
    auto t = Tokens(line);
    if (t.empty()) throw Error(ErrorCode::kParse, "empty request");
    const std::string verb = Upper(t[0]);
    const std::int64_t now = static_cast<std::int64_t>(clock_ + 1);
    auto crystal_at = [&](const std::string& d, const std::string& v) -> const Crystal& {
      auto it = wh_.crystals.find({d, ParseVersion(v)});
      if (it == wh_.crystals.end()) {
        throw Error(ErrorCode::kNotFound, "crystal " + d + " " + v);
      }
      return it->second;
    };

    if (verb == "LIST") {
      if (t.size() != 2) throw Usage("LIST <what>");
      const std::string what = Upper(t[1]);
      std::vector<std::string> lines;
      auto with_meta = [&](const std::map<std::string, std::string>& m) {
        for (const auto& [id, meta] : m) lines.push_back(meta.empty() ? id : id + " " + meta);
      };
      if (what == "ORE") {
        for (const auto& [id, doc] : wh_.ore) lines.push_back(id);
      } else if (what == "MAGMA") {
        for (const auto& e : wh_.magma.elements()) lines.push_back(SerializeElement(e));
      } else if (what == "CRYSTALS") {
        for (const auto& [key, c] : wh_.crystals) {
          lines.push_back(key.first + " " + std::to_string(key.second) + " " +
                          std::to_string(c.elements.size()));
        }
      } else if (what == "KNOWWARE") {
        for (const auto& [key, e] : wh_.knowware) {
          lines.push_back(key.first + " " + key.second + " " +
                          (e.external.empty() ? std::to_string(e.bytes.size()) : e.external));
        }
      } else if (what == "SOURCES") {
        with_meta(wh_.sources);
      } else if (what == "PROVIDERS") {
        with_meta(reg_.providers);
      } else if (what == "REQUESTERS") {
        with_meta(reg_.requesters);
      } else if (what == "MIDDLEWARE") {
        with_meta(reg_.middleware);
      } else if (what == "PROTOCOLS") {
        for (const auto& [id, p] : reg_.protocols) {
          lines.push_back(id + " " + p.first + " " + p.second);
        }
      } else if (what == "KS") {
        for (const auto& [id, text] : wh_.key_structures) lines.push_back(id);
      } else {
        throw Error(ErrorCode::kParse, "cannot list '" + t[1] + "'");
      }
      return OkLines(lines);
    }

    if (verb == "GET") {
      if (t.size() < 3) throw Usage("GET <what> <id> [version]");
      const std::string what = Upper(t[1]);
      auto lookup = [&](const std::map<std::string, std::string>& m) {
        if (t.size() != 3) throw Usage("GET " + what + " <id>");
        auto it = m.find(t[2]);
        if (it == m.end()) throw Error(ErrorCode::kNotFound, what + " " + t[2]);
        return OkBytes(it->second);
      };
      if (what == "ORE") return lookup(wh_.ore);
      if (what == "KS") return lookup(wh_.key_structures);
      if (t.size() != 4) throw Usage("GET " + what + " <id> <version>");
      if (what == "CRYSTAL") return OkBytes(SerializeCrystal(crystal_at(t[2], t[3])));
      if (what == "KNOWWARE") {
        auto it = wh_.knowware.find({t[2], t[3]});
        if (it == wh_.knowware.end()) throw Error(ErrorCode::kNotFound, "knowware " + t[2]);
        if (!it->second.external.empty()) return "OK " + it->second.external + "\n";
        return OkBytes(it->second.bytes);
      }
      throw Error(ErrorCode::kParse, "cannot get '" + t[1] + "'");
    }

    if (verb == "PUT") {
      if (t.size() < 2) throw Usage("PUT <what> ...");
      const std::string what = Upper(t[1]);
      if (what == "ORE" || what == "KS") {
        auto n = BodyLength(line);
        if (!n || t.size() != 4) throw Usage("PUT " + what + " <id> <length>");
        if (body.size() != *n) throw Error(ErrorCode::kParse, "body length mismatch");
        auto& store = what == "ORE" ? wh_.ore : wh_.key_structures;
        if (store.count(t[2])) throw Error(ErrorCode::kDuplicateId, what + " " + t[2]);
        if (what == "KS") ParseKeyStructureFile(body, t[2]);
        store[t[2]] = std::string(body);
        *mutated = true;
        return "OK\n";
      }
      if (what == "EXTERNAL") {
        if (t.size() != 5) throw Usage("PUT EXTERNAL <name> <version> <uri>");
        if (wh_.knowware.count({t[2], t[3]})) {
          throw Error(ErrorCode::kDuplicateId, "knowware " + t[2] + " " + t[3]);
        }
        std::string uri = StartsWith(t[4], "external:") ? t[4] : "external:" + t[4];
        wh_.knowware[{t[2], t[3]}] = {"", uri};
        *mutated = true;
        return "OK\n";
      }
      if (what == "MAGMA" || what == "CRYSTAL" || what == "KNOWWARE") {
        throw Error(ErrorCode::kWrongLayer, what + " is filled only by PROMOTE");
      }
      throw Error(ErrorCode::kParse, "cannot put '" + t[1] + "'");
    }

    if (verb == "PROMOTE") {
      auto to = std::find_if(t.begin(), t.end(),
                             [](const std::string& w) { return Upper(w) == "TO"; });
      if (t.size() < 4 || to == t.end() || to + 1 == t.end()) {
        throw Usage("PROMOTE <layer> ... TO <layer> ...");
      }
      auto layer_of = [](const std::string& w) {
        auto it = std::find(kLayers.begin(), kLayers.end(), Upper(w));
        if (it == kLayers.end()) throw Error(ErrorCode::kParse, "unknown layer '" + w + "'");
        return it - kLayers.begin();
      };
      auto from = layer_of(t[1]);
      auto target = layer_of(*(to + 1));
      if (target != from + 1) {
        throw Error(ErrorCode::kWrongLayer,
                    t[1] + " promotes only to " +
                        (from + 1 < 4 ? std::string(kLayers[from + 1]) : "nothing"));
      }
      std::vector<std::string> before(t.begin() + 2, to);
      std::vector<std::string> after(to + 2, t.end());

      if (from == 0) {
        if (before.size() != 1 || after.size() != 2) {
          throw Usage("PROMOTE ORE <doc> TO MAGMA <tag> <ks>");
        }
        auto doc = wh_.ore.find(before[0]);
        if (doc == wh_.ore.end()) throw Error(ErrorCode::kNotFound, "ore " + before[0]);
        auto ks = wh_.key_structures.find(after[1]);
        if (ks == wh_.key_structures.end()) {
          throw Error(ErrorCode::kNotFound, "key structure " + after[1]);
        }
        PumpSpec spec(after[0], ParseKeyStructureFile(ks->second, ks->first));
        PumpResult r = Pump(doc->second, spec, doc->first, {now, 0});
        std::size_t added = wh_.magma.Ingest(r.elements);
        *mutated = true;
        return "OK " + std::to_string(added) + "\n";
      }

      if (from == 1) {
        if (!before.empty() || after.empty()) {
          throw Usage("PROMOTE MAGMA TO CRYSTAL <domain> [key=value ...]");
        }
        Requirement req;
        for (std::size_t i = 1; i < after.size(); ++i) {
          auto [k, v] = KeyValue(after[i]);
          if (k == "pragmatics") {
            for (auto& p : CommaList(v)) req.pragmatics.push_back(p);
          } else if (k == "subject") {
            req.subjects.push_back({SubjectFilter::Kind::kExact, v});
          } else if (k == "prefix") {
            req.subjects.push_back({SubjectFilter::Kind::kPrefix, v});
          } else if (k == "source") {
            for (auto& s : CommaList(v)) req.sources.push_back(s);
          } else {
            throw Error(ErrorCode::kParse, "unknown requirement '" + k + "'");
          }
        }
        Crystal c = Crystallize(wh_.magma, req, after[0], now);
        std::uint64_t version = 1;
        for (const auto& [key, existing] : wh_.crystals) {
          if (key.first == c.domain) version = std::max(version, key.second + 1);
        }
        c.version = version;
        std::string reply = "OK " + c.domain + " " + std::to_string(version) + " " +
                            std::to_string(c.elements.size()) + "\n";
        wh_.crystals[{c.domain, version}] = std::move(c);
        *mutated = true;
        return reply;
      }

      // Crystal to knowware.
      if (before.size() != 2 || after.size() < 2) {
        throw Usage("PROMOTE CRYSTAL <domain> <version> TO KNOWWARE <name> <version> [key=value ...]");
      }
      const Crystal& c = crystal_at(before[0], before[1]);
      PackageMeta meta;
      meta.name = after[0];
      meta.version = after[1];
      for (std::size_t i = 2; i < after.size(); ++i) {
        auto [k, v] = KeyValue(after[i]);
        if (k == "license") {
          meta.license_declaration = v;
        } else if (k == "application") {
          meta.applications.push_back(v);
        } else if (k == "middleware") {
          meta.middleware_compat.push_back(v);
        } else if (k == "adapter") {
          meta.adapter = v;
        } else if (k == "authentication") {
          meta.authentication = v;
        } else {
          throw Error(ErrorCode::kParse, "unknown package field '" + k + "'");
        }
      }
      if (meta.middleware_compat.empty()) {
        meta.middleware_compat = {"kwf-summary", "kwf-triples", "kwf-view"};
      }
      if (wh_.knowware.count({meta.name, meta.version})) {
        throw Error(ErrorCode::kDuplicateId, "knowware " + meta.name + " " + meta.version);
      }
      std::string bytes = Package(c, meta).Serialize();
      std::string reply = "OK " + meta.name + " " + meta.version + " " +
                          std::to_string(bytes.size()) + "\n";
      wh_.knowware[{meta.name, meta.version}] = {std::move(bytes), ""};
      *mutated = true;
      return reply;
    }

    if (verb == "VERIFY") {
      if (t.size() != 3) throw Usage("VERIFY <name> <version>");
      auto it = wh_.knowware.find({t[1], t[2]});
      if (it == wh_.knowware.end()) throw Error(ErrorCode::kNotFound, "knowware " + t[1]);
      if (!it->second.external.empty()) return "OK external\n";
      VerifyResult v = Verify(Open(it->second.bytes));
      if (!v.ok) return Err(422, v.reason);
      return v.authenticated ? "OK verified authenticated\n" : "OK verified\n";
    }

    if (verb == "QUERY") {
      if (t.size() < 5) throw Usage("QUERY DEFINE|NAME <domain> <version> ...");
      const Crystal& c = crystal_at(t[2], t[3]);
      std::string rest(RestAfter(line, 4));
      const std::string form = Upper(t[1]);
      if (form == "DEFINE") {
        std::vector<std::string> lines;
        for (const auto& e : QueryDefine(c, rest)) lines.push_back(SerializeElement(e));
        return OkLines(lines);
      }
      if (form == "NAME") {
        auto bar = rest.find(" | ");
        if (bar == std::string::npos) {
          throw Usage("QUERY NAME <domain> <version> <condition> | <father>");
        }
        return OkLines(QueryName(c, Trim(std::string_view(rest).substr(0, bar)),
                                 Trim(std::string_view(rest).substr(bar + 3))));
      }
      throw Error(ErrorCode::kParse, "unknown query form '" + t[1] + "'");
    }

    if (verb == "SUMMARY") {
      if (t.size() != 3) throw Usage("SUMMARY <domain> <version>");
      std::string text = RenderSummary(Summarize(crystal_at(t[1], t[2])));
      auto lines = Split(text, '\n');
      lines.pop_back();
      return OkLines(lines);
    }

    if (verb == "REGISTER") {
      if (t.size() < 3) throw Usage("REGISTER <kind> <id> ...");
      const std::string kind = Upper(t[1]);
      const std::string& id = t[2];
      std::string meta(RestAfter(line, 3));
      auto put = [&](std::map<std::string, std::string>& m, std::string value) {
        if (m.count(id)) throw Error(ErrorCode::kDuplicateId, kind + " " + id);
        m[id] = std::move(value);
      };
      if (kind == "PROVIDER") {
        put(reg_.providers, meta);
      } else if (kind == "REQUESTER") {
        put(reg_.requesters, meta);
      } else if (kind == "SOURCE") {
        if (meta.empty()) throw Usage("REGISTER SOURCE <id> <locator>");
        put(wh_.sources, meta);
      } else if (kind == "MIDDLEWARE") {
        if (t.size() != 4 || !IsMiddlewareCategory(t[3])) {
          throw Usage("REGISTER MIDDLEWARE <id> <category>");
        }
        put(reg_.middleware, t[3]);
      } else if (kind == "PROTOCOL") {
        if (t.size() != 5) throw Usage("REGISTER PROTOCOL <id> <from> <to>");
        if (reg_.protocols.count(id)) throw Error(ErrorCode::kDuplicateId, "PROTOCOL " + id);
        reg_.protocols[id] = {t[3], t[4]};
      } else {
        throw Error(ErrorCode::kParse, "cannot register '" + t[1] + "'");
      }
      *mutated = true;
      return "OK\n";
    }

    if (verb == "QUIT") return "OK bye\n";
    throw Error(ErrorCode::kParse, "unknown command '" + t[0] + "'");
  } catch (const Error& e) {
    *mutated = false;
    return Err(StatusOf(e.code()), ErrorCodeName(e.code()));
  }
}

void Server::ServeStream(std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    std::string body;
    if (auto n = BodyLength(line)) {
      body.resize(*n);
      in.read(body.data(), static_cast<std::streamsize>(*n));
      if (static_cast<std::size_t>(in.gcount()) != *n) {
        out << Err(400, "parse") << std::flush;
        return;
      }
    }
    out << Handle(line, body) << std::flush;
    if (Upper(std::string(Trim(line))) == "QUIT") return;
  }
}

void Server::ServeTcp(int port, const std::atomic<bool>& stop,
                      const std::function<void(int)>& on_ready) {
  int lfd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (lfd < 0) throw Error(ErrorCode::kIo, std::string("socket: ") + std::strerror(errno));
  int one = 1;
  ::setsockopt(lfd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::bind(lfd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(lfd, 16) != 0) {
    std::string why = std::strerror(errno);
    ::close(lfd);
    throw Error(ErrorCode::kIo, "cannot listen on port " + std::to_string(port) + ": " + why);
  }
  socklen_t len = sizeof(addr);
  ::getsockname(lfd, reinterpret_cast<sockaddr*>(&addr), &len);
  if (on_ready) on_ready(ntohs(addr.sin_port));

  std::mutex conn_mu;
  std::set<int> open;
  std::vector<std::thread> workers;
  while (!stop.load()) {
    pollfd p{lfd, POLLIN, 0};
    int r = ::poll(&p, 1, 50);
    if (r <= 0) continue;
    int fd = ::accept(lfd, nullptr, nullptr);
    if (fd < 0) continue;
    {
      std::lock_guard<std::mutex> lock(conn_mu);
      open.insert(fd);
    }
    workers.emplace_back([this, fd, &conn_mu, &open] {
      SocketBuf buf(fd);
      std::istream in(&buf);
      std::ostream out(&buf);
      ServeStream(in, out);
      std::lock_guard<std::mutex> lock(conn_mu);
      open.erase(fd);
      ::close(fd);
    });
  }
  {
    std::lock_guard<std::mutex> lock(conn_mu);
    for (int fd : open) ::shutdown(fd, SHUT_RDWR);
  }
  for (auto& w : workers) w.join();
  ::close(lfd);
}

std::uint64_t Server::clock() const {
  std::shared_lock lock(mu_);
  return clock_;
}

Warehouse Server::warehouse() const {
  std::shared_lock lock(mu_);
  return wh_;
}

Registry Server::registry() const {
  std::shared_lock lock(mu_);
  return reg_;
}

void Server::CorruptKnowwareForTesting(const std::string& name,
                                       const std::string& version,
                                       std::size_t offset) {
  std::unique_lock lock(mu_);
  auto& bytes = wh_.knowware.at({name, version}).bytes;
  bytes.at(offset) = static_cast<char>(bytes.at(offset) ^ 0x01);
}

}  // namespace kwf
