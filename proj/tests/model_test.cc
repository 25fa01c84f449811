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

#include "dialogforge/model.h"

#include <gtest/gtest.h>

#include <set>

#include "dialogforge/error.h"

namespace dialogforge {
namespace {

TEST(SectionHeaderTest, CanonicalListHasTwentyOneDistinctNames) {
  const auto& names = SectionHeader::Canonical();
  EXPECT_EQ(names.size(), 21u);
  EXPECT_EQ(std::set<std::string_view>(names.begin(), names.end()).size(), 21u);
  EXPECT_EQ(names.front(), "history of present illness");
  EXPECT_EQ(names.back(), "social history");
}

TEST(SectionHeaderTest, FromNameNormalizesAndRejectsUnknown) {
  EXPECT_EQ(SectionHeader::FromName("  Chief   Complaint ").name(),
            "chief complaint");
  EXPECT_TRUE(SectionHeader::FromName("preamble").is_preamble());
  EXPECT_THROW(SectionHeader::FromName("vitals"), ValidationError);
}

TEST(ClinicalNoteTest, ValidateRejectsBlankIdOrText) {
  try {
    Validate(ClinicalNote{"", "text"});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.code(), ValidationError::Code::kEmptyId);
  }
  try {
    Validate(ClinicalNote{"n1", " \n\t"});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.code(), ValidationError::Code::kEmptyNote);
  }
  EXPECT_NO_THROW(Validate(ClinicalNote{"n1", "ok"}));
}

TEST(SpeakerTest, NamesRoundTrip) {
  for (Speaker s : {Speaker::kDoctor, Speaker::kPatient}) {
    EXPECT_EQ(ParseSpeaker(SpeakerName(s)), s);
    EXPECT_EQ(ParseSpeaker(SpeakerLabel(s)), s);
  }
  EXPECT_FALSE(ParseSpeaker("nurse").has_value());
}

TEST(SemanticGroupTest, ParsesLongAndShortNames) {
  EXPECT_EQ(ParseGroup("Disease"), SemanticGroup::kDisease);
  EXPECT_EQ(ParseGroup("DISO"), SemanticGroup::kDisease);
  EXPECT_EQ(ParseGroup("chem"), SemanticGroup::kDrug);
  EXPECT_EQ(ParseGroup("devi"), SemanticGroup::kDevice);
  EXPECT_EQ(ParseGroup("proc"), SemanticGroup::kProcedure);
  EXPECT_EQ(ParseGroup("food"), SemanticGroup::kOther);
  EXPECT_EQ(GroupName(SemanticGroup::kDrug), "drug");
}

TEST(ChecklistTest, CoverageIsMonotone) {
  Checklist c({{"aspirin", "C1", SemanticGroup::kDrug},
               {"asthma", "C2", SemanticGroup::kDisease}});
  EXPECT_EQ(c.uncovered_count(), 2u);
  EXPECT_TRUE(c.mark(1));
  EXPECT_FALSE(c.mark(1));
  EXPECT_TRUE(c.is_covered(1));
  EXPECT_EQ(c.covered_count(), 1u);
  ASSERT_EQ(c.uncovered().size(), 1u);
  EXPECT_EQ(c.uncovered()[0].surface, "aspirin");
  EXPECT_EQ(c.uncovered_indices(), std::vector<std::size_t>{0});
  EXPECT_THROW(c.mark(5), std::out_of_range);
}

TEST(DialogueTest, Alternation) {
  Dialogue d;
  EXPECT_TRUE(d.alternates());
  d.turns = {{Speaker::kDoctor, "q", 0}, {Speaker::kPatient, "a", 0}};
  EXPECT_TRUE(d.alternates());
  d.turns.push_back({Speaker::kPatient, "again", 0});
  EXPECT_FALSE(d.alternates());
  d.turns = {{Speaker::kPatient, "a", 0}};
  EXPECT_FALSE(d.alternates());
}

TEST(GenerationConfigTest, ModeDefaults) {
  EXPECT_EQ(GenerationConfig::ForMode(GenerationMode::kShort).max_rounds, 15);
  EXPECT_EQ(GenerationConfig::ForMode(GenerationMode::kLong).max_rounds, 25);
  const GenerationConfig cfg;
  EXPECT_EQ(cfg.keywords_per_turn, 4);
  EXPECT_DOUBLE_EQ(cfg.similarity_threshold, 0.85);
  EXPECT_DOUBLE_EQ(cfg.token_budget(), 0.8 * 4096);
  EXPECT_EQ(ParseMode("LONG"), GenerationMode::kLong);
  EXPECT_THROW(ParseMode("medium"), ValidationError);
}

TEST(GenerationConfigTest, ValidateRejectsOutOfRangeFields) {
  EXPECT_NO_THROW(Validate(GenerationConfig{}));
  auto expect_invalid = [](auto mutate) {
    GenerationConfig cfg;
    mutate(cfg);
    EXPECT_THROW(Validate(cfg), ValidationError);
  };
  expect_invalid([](GenerationConfig& c) { c.max_rounds = 0; });
  expect_invalid([](GenerationConfig& c) { c.keywords_per_turn = 0; });
  expect_invalid([](GenerationConfig& c) { c.context_fill_ratio = 1.5; });
  expect_invalid([](GenerationConfig& c) { c.similarity_threshold = 0; });
  expect_invalid([](GenerationConfig& c) { c.concept_threshold = 1.01; });
  expect_invalid([](GenerationConfig& c) { c.chars_per_token = 0; });
  expect_invalid([](GenerationConfig& c) { c.polish_passes = -1; });
}

TEST(HarmonicMeanTest, ZeroWhenEitherSideIsZero) {
  EXPECT_DOUBLE_EQ(HarmonicMean(0.5, 1.0), 2.0 / 3.0);
  EXPECT_EQ(HarmonicMean(0.0, 1.0), 0.0);
  EXPECT_EQ(HarmonicMean(1.0, 1.0), 1.0);
}

}  // namespace
}  // namespace dialogforge
