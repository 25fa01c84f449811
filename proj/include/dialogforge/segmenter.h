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

// Splits clinical notes into sections by fuzzy-matching whole lines against
// the canonical heading vocabulary.

#ifndef DIALOGFORGE_SEGMENTER_H_
#define DIALOGFORGE_SEGMENTER_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dialogforge/model.h"

namespace dialogforge {

struct HeaderMatch {
  std::string raw_line;
  SectionHeader canonical = SectionHeader::Preamble();
  double similarity = 0.0;
};

inline constexpr std::size_t kDefaultHeaderLineCap = 60;

/// Lowercases, strips surrounding punctuation (including a trailing colon)
/// and collapses whitespace runs.
std::string NormalizeHeader(std::string_view line);

/// Edit distance over code points.
std::size_t Levenshtein(std::string_view a, std::string_view b);

/// 1 - dist / max(len_a, len_b); 1.0 for two empty strings.
double HeaderSimilarity(std::string_view a, std::string_view b);

/// Best canonical heading for `line`, or nullopt when the best similarity is
/// below `threshold` or the normalized line is longer than `line_cap`
/// characters. Ties go to the earlier canonical heading.
std::optional<HeaderMatch> MatchHeader(
    std::string_view line, double threshold,
    std::size_t line_cap = kDefaultHeaderLineCap);

/// Sections in note order. Text before the first heading becomes a
/// `preamble` section; a note without headings is a single preamble.
/// Concatenating header_line + body over the result reproduces note.text.
std::vector<NoteSection> SegmentNote(
    const ClinicalNote& note, double threshold,
    std::size_t line_cap = kDefaultHeaderLineCap);

}  // namespace dialogforge

#endif  // DIALOGFORGE_SEGMENTER_H_
