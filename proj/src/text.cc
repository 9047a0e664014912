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

#include "kwf/text.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "kwf/error.h"

namespace kwf {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kAdjacentSlots: return "adjacent-slots";
    case ErrorCode::kNoKeyword: return "no-keyword";
    case ErrorCode::kRoleCountMismatch: return "role-count-mismatch";
    case ErrorCode::kDuplicatePragmatics: return "duplicate-pragmatics";
    case ErrorCode::kDuplicateId: return "duplicate-id";
    case ErrorCode::kUnknownTag: return "unknown-tag";
    case ErrorCode::kUnbalancedTag: return "unbalanced-tag";
    case ErrorCode::kNestedSameTag: return "nested-same-tag";
    case ErrorCode::kEmptyCrystal: return "empty-crystal";
    case ErrorCode::kRequirementViolation: return "requirement-violation";
    case ErrorCode::kIncompleteMeta: return "incomplete-meta";
    case ErrorCode::kMalformedContainer: return "malformed-container";
    case ErrorCode::kVerifyFailed: return "verify-failed";
    case ErrorCode::kNoKeyRole: return "no-key-role";
    case ErrorCode::kMixedSubjects: return "mixed-subjects";
    case ErrorCode::kMixedPragmatics: return "mixed-pragmatics";
    case ErrorCode::kInvalidProgram: return "invalid-program";
    case ErrorCode::kUnboundKnowware: return "unbound-knowware";
    case ErrorCode::kDuplicateMemberUnresolvable:
      return "duplicate-member-unresolvable";
    case ErrorCode::kNoSuchMethod: return "no-such-method";
    case ErrorCode::kMissingData: return "missing-data";
    case ErrorCode::kPlanMismatch: return "plan-mismatch";
    case ErrorCode::kNotCoUsed: return "not-co-used";
    case ErrorCode::kWrongLayer: return "wrong-layer";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

std::string ToLower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string_view Trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && IsSpace(s[b])) ++b;
  while (e > b && IsSpace(s[e - 1])) --e;
  return s.substr(b, e - b);
}

bool HasNonSpace(std::string_view s) {
  for (char c : s) {
    if (!IsSpace(c)) return true;
  }
  return false;
}

std::string NormalizeSpace(std::string_view s) {
  return NormalizeWithMap(s).text;
}

NormalizedText NormalizeWithMap(std::string_view s) {
  NormalizedText out;
  out.text.reserve(s.size());
  out.origin.reserve(s.size() + 1);
  bool pending_space = false;
  std::size_t last_end = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (IsSpace(s[i])) {
      if (!out.text.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      out.text.push_back(' ');
      out.origin.push_back(last_end);
      pending_space = false;
    }
    out.text.push_back(s[i]);
    out.origin.push_back(i);
    last_end = i + 1;
  }
  out.origin.push_back(last_end);
  return out;
}

bool SameText(std::string_view a, std::string_view b) {
  return ToLower(NormalizeSpace(a)) == ToLower(NormalizeSpace(b));
}

std::vector<std::string> Split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string> SplitWhitespace(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && IsSpace(s[i])) ++i;
    std::size_t b = i;
    while (i < s.size() && !IsSpace(s[i])) ++i;
    if (i > b) out.emplace_back(s.substr(b, i - b));
  }
  return out;
}

std::string Join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

bool StartsWith(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

std::string EscapeSpan(std::string_view s) {
  static constexpr std::string_view kOpen = "\xC2\xAB";   // «
  static constexpr std::string_view kClose = "\xC2\xBB";  // »
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\') {
      out.append("\\\\");
    } else if (s.substr(i, 2) == kOpen || s.substr(i, 2) == kClose) {
      out.push_back('\\');
      out.append(s.substr(i, 2));
      ++i;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

std::string EscapeLine(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '\\') {
      out.append("\\\\");
    } else if (c == '\n') {
      out.append("\\n");
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string UnescapeLine(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      ++i;
      out.push_back(s[i] == 'n' ? '\n' : s[i]);
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

bool ParseUint(std::string_view s, unsigned long long* out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool ParseInt(std::string_view s, long long* out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path);
}

}  // namespace kwf
