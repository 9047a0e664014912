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

#include "kwf/element.h"

#include <algorithm>
#include <map>

#include "kwf/error.h"
#include "kwf/text.h"

namespace kwf {
namespace {

constexpr std::string_view kOpen = "\xC2\xAB";   // «
constexpr std::string_view kClose = "\xC2\xBB";  // »
constexpr std::string_view kSep = " | ";

Error ParseError(std::string_view line, const std::string& why) {
  return Error(ErrorCode::kParse,
               why + " in element line '" + std::string(line.substr(0, 80)) + "'");
}

std::string RenderRange(std::size_t b, std::size_t e) {
  return std::to_string(b) + "-" + std::to_string(e);
}

bool ParseRange(std::string_view s, std::size_t* b, std::size_t* e) {
  auto dash = s.find('-');
  unsigned long long x = 0, y = 0;
  if (dash == std::string_view::npos || !ParseUint(s.substr(0, dash), &x) ||
      !ParseUint(s.substr(dash + 1), &y)) {
    return false;
  }
  *b = x;
  *e = y;
  return true;
}

}  // namespace

const std::string* KnowledgeElement::Find(std::string_view role) const {
  for (const auto& b : bindings) {
    if (b.role == role) return &b.text;
  }
  return nullptr;
}

bool SameContent(const KnowledgeElement& a, const KnowledgeElement& b) {
  if (a.pragmatics != b.pragmatics || a.bindings.size() != b.bindings.size()) {
    return false;
  }
  std::map<std::string_view, std::string_view> ma, mb;
  for (const auto& x : a.bindings) ma[x.role] = x.text;
  for (const auto& x : b.bindings) mb[x.role] = x.text;
  return ma == mb;
}

std::string KeyRoleOf(const KnowledgeElement& e) {
  if (e.Find("concept")) return "concept";
  if (e.Find("subject")) return "subject";
  return e.bindings.empty() ? std::string() : e.bindings.front().role;
}

const std::string* KeyBinding(const KnowledgeElement& e) {
  std::string role = KeyRoleOf(e);
  return role.empty() ? nullptr : e.Find(role);
}

std::string KeyOf(const KnowledgeElement& e) {
  const std::string* k = KeyBinding(e);
  return k ? ToLower(NormalizeSpace(*k)) : std::string();
}

std::string RenderField(std::string_view key, std::string_view value) {
  std::string out(kSep);
  out.append(key);
  out.push_back('=');
  out.append(kOpen);
  out.append(EscapeSpan(value));
  out.append(kClose);
  return out;
}

std::vector<Field> ParseFields(std::string_view text) {
  std::vector<Field> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text.substr(i, kSep.size()) != kSep) {
      throw Error(ErrorCode::kParse, "expected ' | ' before field");
    }
    i += kSep.size();
    auto eq = text.find('=', i);
    if (eq == std::string_view::npos || text.substr(eq + 1, kOpen.size()) != kOpen) {
      throw Error(ErrorCode::kParse, "expected key=«value»");
    }
    Field f;
    f.key = std::string(text.substr(i, eq - i));
    if (f.key.empty()) throw Error(ErrorCode::kParse, "empty field key");
    i = eq + 1 + kOpen.size();
    bool closed = false;
    while (i < text.size()) {
      if (text[i] == '\\' && i + 1 < text.size()) {
        std::size_t n = (text.substr(i + 1, 2) == kOpen ||
                         text.substr(i + 1, 2) == kClose)
                            ? 2
                            : 1;
        f.value.append(text.substr(i + 1, n));
        i += 1 + n;
        continue;
      }
      if (text.substr(i, kClose.size()) == kClose) {
        i += kClose.size();
        closed = true;
        break;
      }
      f.value.push_back(text[i++]);
    }
    if (!closed) throw Error(ErrorCode::kParse, "unterminated «value»");
    out.push_back(std::move(f));
  }
  return out;
}

std::string SerializeElement(const KnowledgeElement& e) {
  std::string out = "elem " + e.id + " " + e.pragmatics + " " +
                    (e.pattern_id.empty() ? "-" : e.pattern_id) + " ";
  if (e.sources.empty()) {
    out += "-:0";
  } else {
    out += e.sources.front().doc + ":" + std::to_string(e.sources.front().sentence);
  }
  for (const auto& b : e.bindings) out += RenderField(b.role, b.text);
  out += RenderField("@at", std::to_string(e.timestamp));
  out += RenderField("@rel", std::to_string(e.reliability));
  if (!e.sources.empty()) {
    const auto& s = e.sources.front();
    out += RenderField("@bytes", RenderRange(s.begin, s.end));
    for (std::size_t i = 1; i < e.sources.size(); ++i) {
      const auto& x = e.sources[i];
      out += RenderField("@src", x.doc + ":" + std::to_string(x.sentence) + ":" +
                                     RenderRange(x.begin, x.end));
    }
  }
  return out;
}

KnowledgeElement ParseElementLine(std::string_view line) {
  auto bar = line.find(kSep);
  std::string_view head = line.substr(0, bar);
  auto words = SplitWhitespace(head);
  if (words.size() != 5 || words[0] != "elem") {
    throw ParseError(line, "expected 'elem <id> <pragmatics> <pattern> <doc>:<n>'");
  }
  KnowledgeElement e;
  e.id = words[1];
  e.pragmatics = words[2];
  e.pattern_id = words[3] == "-" ? "" : words[3];
  auto colon = words[4].rfind(':');
  unsigned long long sentence = 0;
  if (colon == std::string::npos ||
      !ParseUint(std::string_view(words[4]).substr(colon + 1), &sentence)) {
    throw ParseError(line, "bad source");
  }
  std::string doc = words[4].substr(0, colon);
  bool has_source = doc != "-";
  if (has_source) e.sources.push_back({doc, sentence, 0, 0});

  std::vector<Field> fields;
  if (bar != std::string_view::npos) {
    try {
      fields = ParseFields(line.substr(bar));
    } catch (const Error& err) {
      throw ParseError(line, err.what());
    }
  }
  for (auto& f : fields) {
    if (f.key.front() != '@') {
      e.bindings.push_back({std::move(f.key), std::move(f.value)});
      continue;
    }
    long long n = 0;
    if (f.key == "@at" && ParseInt(f.value, &n)) {
      e.timestamp = n;
    } else if (f.key == "@rel" && ParseInt(f.value, &n)) {
      e.reliability = static_cast<int>(n);
    } else if (f.key == "@bytes" && has_source &&
               ParseRange(f.value, &e.sources.front().begin,
                          &e.sources.front().end)) {
    } else if (f.key == "@src") {
      // doc:sentence:b-e, doc may itself contain ':'.
      auto last = f.value.rfind(':');
      auto mid = last == std::string::npos ? last : f.value.rfind(':', last - 1);
      Source s;
      unsigned long long sn = 0;
      if (mid == std::string::npos ||
          !ParseUint(std::string_view(f.value).substr(mid + 1, last - mid - 1), &sn) ||
          !ParseRange(std::string_view(f.value).substr(last + 1), &s.begin, &s.end)) {
        throw ParseError(line, "bad @src");
      }
      s.doc = f.value.substr(0, mid);
      s.sentence = sn;
      e.sources.push_back(std::move(s));
    } else {
      throw ParseError(line, "bad metadata field " + f.key);
    }
  }
  return e;
}

std::string SerializeElements(std::span<const KnowledgeElement> elements) {
  std::string out;
  for (const auto& e : elements) {
    out += SerializeElement(e);
    out.push_back('\n');
  }
  return out;
}

std::vector<KnowledgeElement> ParseElements(std::string_view text) {
  std::vector<KnowledgeElement> out;
  for (const auto& raw : Split(text, '\n')) {
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (Trim(line).empty() || line.front() == '#') continue;
    out.push_back(ParseElementLine(line));
  }
  return out;
}

}  // namespace kwf
