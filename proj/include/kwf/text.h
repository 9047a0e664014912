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

// Small string helpers shared by the parsers and serializers.

#ifndef KWF_TEXT_H_
#define KWF_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace kwf {

inline bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Bytes >= 0x80 count as word characters so UTF-8 letters never form a
// keyword boundary.
inline bool IsWordChar(char c) {
  auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || (u >= '0' && u <= '9') || (u >= 'a' && u <= 'z') ||
         (u >= 'A' && u <= 'Z') || u == '_';
}

inline bool IsTerminator(char c) { return c == '.' || c == '?' || c == '!'; }

std::string ToLower(std::string_view s);
std::string_view Trim(std::string_view s);
bool HasNonSpace(std::string_view s);

// Whitespace runs collapsed to one space, ends trimmed.
std::string NormalizeSpace(std::string_view s);

// NormalizeSpace plus an offset map back into the source text.
struct NormalizedText {
  std::string text;
  // origin[i] is the source offset of text[i]; origin has text.size() + 1
  // entries, the last one being one past the final source byte used.
  std::vector<std::size_t> origin;
};
NormalizedText NormalizeWithMap(std::string_view s);

// Case-insensitive, whitespace-insensitive equality.
bool SameText(std::string_view a, std::string_view b);

std::vector<std::string> Split(std::string_view s, char sep);
std::vector<std::string> SplitWhitespace(std::string_view s);
std::string Join(const std::vector<std::string>& parts, std::string_view sep);

bool StartsWith(std::string_view s, std::string_view prefix);

// Escapes '\\', '«', '»' with a backslash so a value can sit inside «...».
std::string EscapeSpan(std::string_view s);

// Backslash-escapes '\\' and newline for single-line `key = value` files.
std::string EscapeLine(std::string_view s);
std::string UnescapeLine(std::string_view s);

// Parses a non-negative decimal; false on any other input.
bool ParseUint(std::string_view s, unsigned long long* out);
bool ParseInt(std::string_view s, long long* out);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view bytes);

}  // namespace kwf

#endif  // KWF_TEXT_H_
