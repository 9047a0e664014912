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

// Knowware packages: a serialized crystal (the payload) sealed together with
// its manifest, the knowledge interface. A package has no mutating
// operation; it is produced by Package() or Open() and only read after.

#ifndef KWF_KNOWWARE_H_
#define KWF_KNOWWARE_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kwf/crystallizer.h"

namespace kwf {

inline constexpr std::string_view kRepresentationFormat = "kel-1";

// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view bytes);

struct ManifestDocs {
  std::string functions;
  std::string use;
  std::string maintenance;
  bool operator==(const ManifestDocs&) const = default;
};

struct Manifest {
  std::string name;
  std::string version;
  std::map<std::string, std::size_t> content_list;  // pragmatics -> count
  std::string representation_format{kRepresentationFormat};
  std::vector<std::string> applications;
  std::string license_declaration;
  std::vector<std::string> middleware_compat;
  // Transformation middleware that adapts this package's representation.
  std::optional<std::string> adapter;
  std::string watermark;
  std::optional<std::string> authentication;
  ManifestDocs docs;
  // Keys this version does not know, kept in file order.
  std::vector<std::pair<std::string, std::string>> extra;

  bool operator==(const Manifest&) const = default;
};

// `key = value` lines; see docs/formats.md.
std::string RenderManifest(const Manifest& m);
Manifest ParseManifest(std::string_view text);

// What the packager supplies; the rest of the manifest is computed.
struct PackageMeta {
  std::string name;
  std::string version;
  std::vector<std::string> applications;
  std::string license_declaration;
  std::vector<std::string> middleware_compat;
  std::optional<std::string> adapter;
  std::optional<std::string> authentication;
  ManifestDocs docs;
};

class KnowwarePackage {
 public:
  const Manifest& manifest() const { return manifest_; }
  const std::string& payload() const { return payload_; }
  // Container bytes; identical to what Open() was given.
  std::string Serialize() const;

  bool operator==(const KnowwarePackage&) const = default;

 private:
  friend KnowwarePackage Package(const Crystal&, const PackageMeta&);
  friend KnowwarePackage Open(std::string_view);
  KnowwarePackage() = default;

  Manifest manifest_;
  std::string manifest_text_;
  std::string payload_;
};

// Throws Error{kIncompleteMeta} without name or version (or when either is
// not a single token), Error{kInvalidArgument} if the crystal still holds
// conflicts.
KnowwarePackage Package(const Crystal& crystal, const PackageMeta& meta);

// Throws Error{kMalformedContainer}. The payload is not checked here.
KnowwarePackage Open(std::string_view bytes);

struct VerifyResult {
  bool ok = false;
  std::string reason;          // "watermark", "payload" or "content-list"
  bool authenticated = false;  // token present; not validated
};

VerifyResult Verify(const KnowwarePackage& pkg);

// Knowledge interface: a copy of the manifest.
inline Manifest InterfaceOf(const KnowwarePackage& pkg) { return pkg.manifest(); }

// Parses the payload back into a crystal.
Crystal CrystalOf(const KnowwarePackage& pkg);

}  // namespace kwf

#endif  // KWF_KNOWWARE_H_
