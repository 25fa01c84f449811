// Copyright 2026 The DialogForge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small UTF-8 aware string helpers shared by the parsers and metrics.

#ifndef DIALOGFORGE_TEXT_H_
#define DIALOGFORGE_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace dialogforge::text {

std::string_view Trim(std::string_view s);
bool IsBlank(std::string_view s);

// ASCII-only lowercase; bytes >= 0x80 are left untouched.
std::string AsciiLower(std::string_view s);

// Lowercase with simple case folding for Latin-1, Latin Extended-A, Greek
// and Cyrillic capitals.
std::string FoldCase(std::string_view s);

// Lowercase, trim, and collapse every whitespace run to a single space.
std::string NormalizeSpaces(std::string_view s);

// Number of code points; invalid bytes count as one each.
std::size_t CodePointCount(std::string_view s);

std::u32string ToCodePoints(std::string_view s);

bool StartsWithIgnoreCase(std::string_view s, std::string_view prefix);

std::vector<std::string> SplitLines(std::string_view s);

// A word token: a maximal run of letters/digits, case-folded, with its byte
// range in the source text.
struct WordToken {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Splits on any run of non-alphanumeric code points. Non-ASCII letters are
// treated as word characters; Unicode punctuation and symbol blocks are not.
std::vector<WordToken> WordTokens(std::string_view s);

// Convenience: just the folded token strings.
std::vector<std::string> Words(std::string_view s);

std::string Join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace dialogforge::text

#endif  // DIALOGFORGE_TEXT_H_
