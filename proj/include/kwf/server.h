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

// Knowledge server: a four-layer warehouse (ore, magma, crystals, knowware),
// the service registry and a line protocol. The wire format is in
// docs/formats.md.
//
// Mutating requests are serialized and appended to `<data_dir>/journal`
// after they succeed; a server opened on the same directory replays the
// journal. Timestamps come from a logical clock (the number of journaled
// requests), so replay rebuilds identical state.

#ifndef KWF_SERVER_H_
#define KWF_SERVER_H_

#include <atomic>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kwf/crystallizer.h"

namespace kwf {

struct KnowwareEntry {
  std::string bytes;     // container bytes; empty for external entries
  std::string external;  // "external:<uri>" locator, or empty
  bool operator==(const KnowwareEntry&) const = default;
};

struct Warehouse {
  std::map<std::string, std::string> ore;
  Magma magma;
  std::map<std::pair<std::string, std::uint64_t>, Crystal> crystals;
  std::map<std::pair<std::string, std::string>, KnowwareEntry> knowware;
  std::map<std::string, std::string> sources;         // id -> locator
  std::map<std::string, std::string> key_structures;  // id -> .ksl text
};

struct Registry {
  std::map<std::string, std::string> providers;   // id -> metadata
  std::map<std::string, std::string> requesters;  // id -> metadata
  std::map<std::string, std::string> middleware;  // id -> category
  std::map<std::string, std::pair<std::string, std::string>> protocols;
};

// The seven middleware classes a MIDDLEWARE registration may name.
bool IsMiddlewareCategory(std::string_view category);

class Server {
 public:
  // An empty `data_dir` keeps everything in memory.
  explicit Server(std::string data_dir = "");

  // Handles one request line; `body` is the payload announced by PUT ORE
  // and PUT KS. Returns the complete response.
  std::string Handle(std::string_view line, std::string_view body = {});

  // Request/response loop until end of input or QUIT.
  void ServeStream(std::istream& in, std::ostream& out);

  // Serves TCP connections on 127.0.0.1:`port` (0 picks one) until `stop`
  // is set. `on_ready` receives the bound port.
  void ServeTcp(int port, const std::atomic<bool>& stop,
                const std::function<void(int)>& on_ready = {});

  std::uint64_t clock() const;
  Warehouse warehouse() const;
  Registry registry() const;

  // Flips one byte of a stored package without going through the journal.
  void CorruptKnowwareForTesting(const std::string& name, const std::string& version,
                                 std::size_t offset);

 private:
  std::string Dispatch(std::string_view line, std::string_view body, bool* mutated);
  void Replay();

  std::string data_dir_;
  mutable std::shared_mutex mu_;
  Warehouse wh_;
  Registry reg_;
  std::uint64_t clock_ = 0;
};

// Whether a request changes server state (and so is journaled).
bool IsMutating(std::string_view line);

// Body length announced by a PUT ORE/KS request line, if any.
std::optional<std::size_t> BodyLength(std::string_view line);

}  // namespace kwf

#endif  // KWF_SERVER_H_
