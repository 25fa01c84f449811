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

#include "dialogforge/segmenter.h"

#include <algorithm>
#include <cstring>

#include "dialogforge/text.h"

namespace dialogforge {

namespace {

// ASCII punctuation that may decorate a header line: "**Plan:**",
// "- ALLERGIES -", "### Exam", "[LABS]".
bool IsDecoration(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
         c == '\v' || (std::strchr("!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~", c) &&
                       c != '\0');
}

}  // namespace

std::string NormalizeHeader(std::string_view line) {
  std::size_t b = 0, e = line.size();
  while (b < e && IsDecoration(line[b])) ++b;
  while (e > b && IsDecoration(line[e - 1])) --e;
  return text::NormalizeSpaces(line.substr(b, e - b));
}

std::size_t Levenshtein(std::string_view a, std::string_view b) {
  const std::u32string x = text::ToCodePoints(a);
  const std::u32string y = text::ToCodePoints(b);
  std::vector<std::size_t> prev(y.size() + 1), cur(y.size() + 1);
  for (std::size_t j = 0; j <= y.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= y.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[y.size()];
}

double HeaderSimilarity(std::string_view a, std::string_view b) {
  const std::size_t longest =
      std::max(text::CodePointCount(a), text::CodePointCount(b));
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(Levenshtein(a, b)) /
                   static_cast<double>(longest);
}

std::optional<HeaderMatch> MatchHeader(std::string_view line, double threshold,
                                       std::size_t line_cap) {
  const std::string normalized = NormalizeHeader(line);
  if (normalized.empty() || text::CodePointCount(normalized) > line_cap) {
    return std::nullopt;
  }
  const auto& names = SectionHeader::Canonical();
  std::size_t best = names.size();
  double best_sim = -1.0;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double sim = HeaderSimilarity(normalized, names[i]);
    if (sim > best_sim) {
      best_sim = sim;
      best = i;
    }
  }
  // 1 - 3/20 must clear a 0.85 threshold despite rounding.
  constexpr double kEps = 1e-12;
  if (best == names.size() || best_sim + kEps < threshold) return std::nullopt;
  return HeaderMatch{std::string(line), SectionHeader::FromName(names[best]),
                     best_sim};
}

std::vector<NoteSection> SegmentNote(const ClinicalNote& note, double threshold,
                                     std::size_t line_cap) {
  Validate(note);
  const std::string& src = note.text;
  std::vector<NoteSection> sections;

  auto close_current = [&](std::size_t end) {
    if (sections.empty()) return;
    NoteSection& s = sections.back();
    const std::size_t body_begin = s.begin + s.header_line.size();
    s.body = src.substr(body_begin, end - body_begin);
    s.end = end;
  };

  std::size_t pos = 0;
  while (pos < src.size()) {
    const std::size_t nl = src.find('\n', pos);
    const std::size_t line_end = nl == std::string::npos ? src.size() : nl + 1;
    std::string_view line(src.data() + pos,
                          (nl == std::string::npos ? src.size() : nl) - pos);
    if (auto match = MatchHeader(line, threshold, line_cap)) {
      if (sections.empty() && pos > 0) {
        NoteSection preamble;
        preamble.begin = 0;
        sections.push_back(std::move(preamble));
      }
      close_current(pos);
      NoteSection s;
      s.header = match->canonical;
      s.header_line = src.substr(pos, line_end - pos);
      s.begin = pos;
      sections.push_back(std::move(s));
    }
    pos = line_end;
  }

  if (sections.empty()) {
    NoteSection preamble;
    preamble.body = src;
    preamble.begin = 0;
    preamble.end = src.size();
    sections.push_back(std::move(preamble));
    return sections;
  }
  close_current(src.size());
  return sections;
}

}  // namespace dialogforge
