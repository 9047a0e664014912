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

#include "kwf/knowware.h"

#include <openssl/evp.h>

#include <algorithm>

#include "kwf/error.h"
#include "kwf/text.h"

namespace kwf {
namespace {

constexpr std::string_view kMagic = "KNOWWARE 1\n";

bool IsToken(std::string_view s) {
  return !s.empty() && std::none_of(s.begin(), s.end(), [](char c) {
    return IsSpace(c) || c == '=' || c == '\\';
  });
}

std::map<std::string, std::size_t> CountPragmatics(
    const std::vector<KnowledgeElement>& elements) {
  std::map<std::string, std::size_t> out;
  for (const auto& e : elements) ++out[e.pragmatics];
  return out;
}

void Line(std::string& out, std::string_view key, std::string_view value) {
  out.append(key);
  out.append(" = ");
  out.append(EscapeLine(value));
  out.push_back('\n');
}

}  // namespace

std::string Sha256Hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw Error(ErrorCode::kIo, "sha256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    unsigned char b = digest[i];
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0xf]);
  }
  return out;
}

std::string RenderManifest(const Manifest& m) {
  std::string out;
  Line(out, "name", m.name);
  Line(out, "version", m.version);
  Line(out, "format", m.representation_format);
  for (const auto& [tag, n] : m.content_list) {
    Line(out, "content." + tag, std::to_string(n));
  }
  for (const auto& a : m.applications) Line(out, "application", a);
  Line(out, "license", m.license_declaration);
  for (const auto& mw : m.middleware_compat) Line(out, "middleware", mw);
  if (m.adapter) Line(out, "adapter", *m.adapter);
  if (m.authentication) Line(out, "authentication", *m.authentication);
  Line(out, "docs.functions", m.docs.functions);
  Line(out, "docs.use", m.docs.use);
  Line(out, "docs.maintenance", m.docs.maintenance);
  Line(out, "watermark", m.watermark);
  for (const auto& [k, v] : m.extra) Line(out, k, v);
  return out;
}

Manifest ParseManifest(std::string_view text) {
  Manifest m;
  m.representation_format.clear();
  bool has_name = false, has_version = false, has_format = false,
       has_watermark = false;
  auto lines = Split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  for (const auto& line : lines) {
    auto eq = line.find(" = ");
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorCode::kParse, "manifest line '" + line + "' is not 'key = value'");
    }
    std::string key = line.substr(0, eq);
    std::string value = UnescapeLine(std::string_view(line).substr(eq + 3));
    if (key == "name") {
      m.name = value;
      has_name = true;
    } else if (key == "version") {
      m.version = value;
      has_version = true;
    } else if (key == "format") {
      m.representation_format = value;
      has_format = true;
    } else if (StartsWith(key, "content.")) {
      unsigned long long n = 0;
      if (!ParseUint(value, &n)) {
        throw Error(ErrorCode::kParse, "bad count for " + key);
      }
      m.content_list[key.substr(8)] = n;
    } else if (key == "application") {
      m.applications.push_back(value);
    } else if (key == "license") {
      m.license_declaration = value;
    } else if (key == "middleware") {
      m.middleware_compat.push_back(value);
    } else if (key == "adapter") {
      m.adapter = value;
    } else if (key == "authentication") {
      m.authentication = value;
    } else if (key == "docs.functions") {
      m.docs.functions = value;
    } else if (key == "docs.use") {
      m.docs.use = value;
    } else if (key == "docs.maintenance") {
      m.docs.maintenance = value;
    } else if (key == "watermark") {
      m.watermark = value;
      has_watermark = true;
    } else {
      m.extra.emplace_back(std::move(key), std::move(value));
    }
  }
  if (!has_name || !has_version || !has_format || !has_watermark) {
    throw Error(ErrorCode::kParse,
                "manifest lacks one of name, version, format, watermark");
  }
  return m;
}

std::string KnowwarePackage::Serialize() const {
  std::string out(kMagic);
  out += "MANIFEST " + std::to_string(manifest_text_.size()) + "\n";
  out += manifest_text_;
  out += "PAYLOAD " + std::to_string(payload_.size()) + "\n";
  out += payload_;
  return out;
}

KnowwarePackage Package(const Crystal& crystal, const PackageMeta& meta) {
  if (!IsToken(meta.name) || !IsToken(meta.version)) {
    throw Error(ErrorCode::kIncompleteMeta,
                "package needs a one-token name and version");
  }
  if (auto conflicts = DetectConflicts(crystal.elements); !conflicts.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "crystal holds conflicting elements " + conflicts[0].first +
                    " and " + conflicts[0].second);
  }
  KnowwarePackage pkg;
  pkg.payload_ = SerializeCrystal(crystal);

  Manifest& m = pkg.manifest_;
  m.name = meta.name;
  m.version = meta.version;
  m.content_list = CountPragmatics(crystal.elements);
  m.applications = meta.applications;
  m.license_declaration = meta.license_declaration;
  m.middleware_compat = meta.middleware_compat;
  m.adapter = meta.adapter;
  m.authentication = meta.authentication;
  m.docs = meta.docs;
  if (m.docs.functions.empty()) {
    m.docs.functions = "Knowledge crystal '" + crystal.domain + "' version " +
                       std::to_string(crystal.version) + ", " +
                       std::to_string(crystal.elements.size()) + " elements";
  }
  if (m.docs.use.empty()) {
    m.docs.use = "Read through a middleware listed under 'middleware'";
  }
  if (m.docs.maintenance.empty()) {
    m.docs.maintenance = "Renew the crystal and repackage under a new version";
  }
  m.watermark = Sha256Hex(pkg.payload_);
  pkg.manifest_text_ = RenderManifest(m);
  return pkg;
}

KnowwarePackage Open(std::string_view bytes) {
  auto malformed = [](const std::string& why) {
    return Error(ErrorCode::kMalformedContainer, why);
  };
  std::size_t pos = 0;
  if (bytes.substr(0, kMagic.size()) != kMagic) throw malformed("bad magic");
  pos = kMagic.size();

  auto section = [&](std::string_view name) -> std::string_view {
    std::string head = std::string(name) + " ";
    if (bytes.substr(pos, head.size()) != head) {
      throw malformed("expected " + std::string(name) + " section");
    }
    pos += head.size();
    auto nl = bytes.find('\n', pos);
    unsigned long long len = 0;
    if (nl == std::string_view::npos || !ParseUint(bytes.substr(pos, nl - pos), &len)) {
      throw malformed("bad " + std::string(name) + " length");
    }
    pos = nl + 1;
    if (len > bytes.size() - pos) throw malformed(std::string(name) + " truncated");
    std::string_view body = bytes.substr(pos, len);
    pos += len;
    return body;
  };

  KnowwarePackage pkg;
  pkg.manifest_text_ = std::string(section("MANIFEST"));
  pkg.payload_ = std::string(section("PAYLOAD"));
  if (pos != bytes.size()) throw malformed("trailing bytes after payload");
  try {
    pkg.manifest_ = ParseManifest(pkg.manifest_text_);
  } catch (const Error& e) {
    throw malformed(e.what());
  }
  return pkg;
}

VerifyResult Verify(const KnowwarePackage& pkg) {
  VerifyResult r;
  r.authenticated = pkg.manifest().authentication.has_value() &&
                    !pkg.manifest().authentication->empty();
  if (Sha256Hex(pkg.payload()) != pkg.manifest().watermark) {
    r.reason = "watermark";
    return r;
  }
  Crystal c;
  try {
    c = ParseCrystal(pkg.payload());
  } catch (const Error&) {
    r.reason = "payload";
    return r;
  }
  if (CountPragmatics(c.elements) != pkg.manifest().content_list) {
    r.reason = "content-list";
    return r;
  }
  r.ok = true;
  return r;
}

Crystal CrystalOf(const KnowwarePackage& pkg) {
  return ParseCrystal(pkg.payload());
}

}  // namespace kwf
