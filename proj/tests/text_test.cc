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

#include "dialogforge/text.h"

#include <gtest/gtest.h>

namespace dialogforge::text {
namespace {

TEST(TrimTest, StripsAsciiWhitespaceBothEnds) {
  EXPECT_EQ(Trim("  a b\t\n"), "a b");
  EXPECT_EQ(Trim(""), "");
  EXPECT_EQ(Trim(" \r\n "), "");
  EXPECT_TRUE(IsBlank("\t "));
  EXPECT_FALSE(IsBlank(" x "));
}

TEST(FoldCaseTest, FoldsLatinGreekAndCyrillic) {
  EXPECT_EQ(FoldCase("ABC xyz"), "abc xyz");
  EXPECT_EQ(FoldCase("\xC3\x89T\xC3\x89"), "\xC3\xA9t\xC3\xA9");  // ÉTÉ
  EXPECT_EQ(FoldCase("\xC5\x81\xC3\x93" "D\xC5\xB9"),
            "\xC5\x82\xC3\xB3" "d\xC5\xBA");  // ŁÓDŹ
  EXPECT_EQ(FoldCase("\xC5\xB8"), "\xC3\xBF");  // Ÿ -> ÿ
  EXPECT_EQ(FoldCase("\xCE\x94"), "\xCE\xB4");  // Δ -> δ
  EXPECT_EQ(FoldCase("\xD0\x96"), "\xD0\xB6");  // Ж -> ж
  EXPECT_EQ(FoldCase("\xC3\x97"), "\xC3\x97");  // × unchanged
}

TEST(FoldCaseTest, PassesInvalidBytesThrough) {
  const std::string bad = "A\xFF" "B";
  EXPECT_EQ(FoldCase(bad), "a\xFF" "b");
}

TEST(NormalizeSpacesTest, CollapsesAndFolds) {
  EXPECT_EQ(NormalizeSpaces("  Past   Medical\tHistory "), "past medical history");
  EXPECT_EQ(NormalizeSpaces(""), "");
}

TEST(CodePointTest, CountsMultiByteSequencesOnce) {
  EXPECT_EQ(CodePointCount("abc"), 3u);
  EXPECT_EQ(CodePointCount("\xC3\xA9t\xC3\xA9"), 3u);
  EXPECT_EQ(CodePointCount("\xF0\x9F\x98\x80"), 1u);
  EXPECT_EQ(ToCodePoints("\xC3\xA9").size(), 1u);
  EXPECT_EQ(ToCodePoints("\xC3\xA9")[0], U'é');
}

TEST(SplitLinesTest, KeepsEmptyLinesAndDropsCarriageReturns) {
  const auto lines = SplitLines("a\r\n\nb");
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "a");
  EXPECT_EQ(lines[1], "");
  EXPECT_EQ(lines[2], "b");
  EXPECT_EQ(SplitLines("").size(), 1u);
}

TEST(WordTokensTest, SplitsOnNonAlphanumericRuns) {
  EXPECT_EQ(Words("The cat sat."), (std::vector<std::string>{"the", "cat", "sat"}));
  EXPECT_EQ(Words("20 mg, BID"), (std::vector<std::string>{"20", "mg", "bid"}));
  EXPECT_EQ(Words("mri-scan"), (std::vector<std::string>{"mri", "scan"}));
  EXPECT_TRUE(Words("").empty());
  EXPECT_TRUE(Words(" ,.;-- ").empty());
}

TEST(WordTokensTest, TreatsAccentedLettersAsWordCharacters) {
  EXPECT_EQ(Words("Caf\xC3\xA9 \xE2\x80\x94 na\xC3\xAFve"),
            (std::vector<std::string>{"caf\xC3\xA9", "na\xC3\xAFve"}));
}

TEST(WordTokensTest, ReportsByteOffsets) {
  const auto tokens = WordTokens("  ab, CD");
  ASSERT_EQ(tokens.size(), 2u);
  EXPECT_EQ(tokens[0].begin, 2u);
  EXPECT_EQ(tokens[0].end, 4u);
  EXPECT_EQ(tokens[1].text, "cd");
  EXPECT_EQ(tokens[1].begin, 6u);
  EXPECT_EQ(tokens[1].end, 8u);
}

TEST(StartsWithIgnoreCaseTest, Basic) {
  EXPECT_TRUE(StartsWithIgnoreCase("Doctor: hi", "doctor:"));
  EXPECT_FALSE(StartsWithIgnoreCase("Doc", "doctor"));
}

TEST(JoinTest, Basic) {
  EXPECT_EQ(Join({"a", "b", "c"}, ", "), "a, b, c");
  EXPECT_EQ(Join({}, ","), "");
}

}  // namespace
}  // namespace dialogforge::text
