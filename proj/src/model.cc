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

#include <algorithm>

#include "dialogforge/error.h"
#include "dialogforge/text.h"

namespace dialogforge {

const std::array<std::string_view, SectionHeader::kCanonicalCount>&
SectionHeader::Canonical() {
  static constexpr std::array<std::string_view, kCanonicalCount> kNames = {
      "history of present illness",
      "review of systems",
      "past medical history",
      "medications",
      "chief complaint",
      "past surgical history",
      "disposition",
      "diagnosis",
      "emergency department course",
      "plan",
      "labs",
      "assessment",
      "allergy",
      "gynecologic history",
      "exam",
      "other history",
      "procedures",
      "imaging",
      "immunizations",
      "family history",
      "social history",
  };
  return kNames;
}

SectionHeader SectionHeader::FromName(std::string_view name) {
  std::string normalized = text::NormalizeSpaces(name);
  if (normalized == "preamble") return Preamble();
  const auto& names = Canonical();
  if (std::find(names.begin(), names.end(), normalized) == names.end()) {
    throw ValidationError(ValidationError::Code::kInvalidValue,
                          "unknown section header '" + std::string(name) + "'");
  }
  return SectionHeader(std::move(normalized));
}

SectionHeader SectionHeader::Preamble() { return SectionHeader("preamble"); }

void Validate(const ClinicalNote& note) {
  if (text::IsBlank(note.id)) {
    throw ValidationError(ValidationError::Code::kEmptyId,
                          "clinical note has an empty id");
  }
  if (text::IsBlank(note.text)) {
    throw ValidationError(ValidationError::Code::kEmptyNote,
                          "clinical note '" + note.id + "' has no text");
  }
}

std::string NoteSection::content() const {
  return std::string(text::Trim(body));
}

std::string_view SpeakerName(Speaker s) {
  return s == Speaker::kDoctor ? "doctor" : "patient";
}

std::string_view SpeakerLabel(Speaker s) {
  return s == Speaker::kDoctor ? "Doctor" : "Patient";
}

std::optional<Speaker> ParseSpeaker(std::string_view name) {
  const std::string n = text::AsciiLower(text::Trim(name));
  if (n == "doctor") return Speaker::kDoctor;
  if (n == "patient") return Speaker::kPatient;
  return std::nullopt;
}

std::string_view GroupName(SemanticGroup g) {
  switch (g) {
    case SemanticGroup::kDisease:
      return "disease";
    case SemanticGroup::kDrug:
      return "drug";
    case SemanticGroup::kDevice:
      return "device";
    case SemanticGroup::kProcedure:
      return "procedure";
    case SemanticGroup::kOther:
      break;
  }
  return "other";
}

SemanticGroup ParseGroup(std::string_view name) {
  const std::string n = text::AsciiLower(text::Trim(name));
  if (n == "disease" || n == "diseases" || n == "diso" || n == "disorder" ||
      n == "disorders") {
    return SemanticGroup::kDisease;
  }
  if (n == "drug" || n == "drugs" || n == "chem" || n == "chemicals") {
    return SemanticGroup::kDrug;
  }
  if (n == "device" || n == "devices" || n == "devi") {
    return SemanticGroup::kDevice;
  }
  if (n == "procedure" || n == "procedures" || n == "proc") {
    return SemanticGroup::kProcedure;
  }
  return SemanticGroup::kOther;
}

Checklist::Checklist(std::vector<ConceptEntry> entries)
    : entries_(std::move(entries)), covered_(entries_.size(), false) {}

bool Checklist::mark(std::size_t i) {
  if (covered_.at(i)) return false;
  covered_[i] = true;
  return true;
}

std::size_t Checklist::covered_count() const {
  return static_cast<std::size_t>(
      std::count(covered_.begin(), covered_.end(), true));
}

std::vector<ConceptEntry> Checklist::uncovered() const {
  std::vector<ConceptEntry> out;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!covered_[i]) out.push_back(entries_[i]);
  }
  return out;
}

std::vector<std::size_t> Checklist::uncovered_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!covered_[i]) out.push_back(i);
  }
  return out;
}

std::string_view ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kRaw:
      return "raw";
    case Provenance::kPolished:
      return "polished";
    case Provenance::kChecked:
      return "checked";
    case Provenance::kCombined:
      return "combined";
  }
  return "raw";
}

std::string_view TerminationName(Termination t) {
  switch (t) {
    case Termination::kNone:
      return "none";
    case Termination::kChecklistEmpty:
      return "checklist_empty";
    case Termination::kMaxRounds:
      return "max_rounds";
    case Termination::kTokenBudget:
      return "token_budget";
  }
  return "none";
}

bool Dialogue::alternates() const {
  for (std::size_t i = 0; i < turns.size(); ++i) {
    const Speaker expected = i % 2 == 0 ? Speaker::kDoctor : Speaker::kPatient;
    if (turns[i].speaker != expected) return false;
  }
  return true;
}

std::string_view PromptFileName(PromptName n) {
  switch (n) {
    case PromptName::kDoctor:
      return "doctor";
    case PromptName::kPatient:
      return "patient";
    case PromptName::kPolish:
      return "polish";
    case PromptName::kHallucination:
      return "hallucination";
    case PromptName::kPostediting:
      return "postediting";
    case PromptName::kFactuality:
      return "factuality";
  }
  return "doctor";
}

std::string_view ModeName(GenerationMode m) {
  return m == GenerationMode::kLong ? "long" : "short";
}

GenerationMode ParseMode(std::string_view name) {
  const std::string n = text::AsciiLower(text::Trim(name));
  if (n == "short") return GenerationMode::kShort;
  if (n == "long") return GenerationMode::kLong;
  throw ValidationError(ValidationError::Code::kInvalidValue,
                        "unknown mode '" + std::string(name) +
                            "' (expected short or long)");
}

GenerationConfig GenerationConfig::ForMode(GenerationMode mode) {
  GenerationConfig cfg;
  cfg.mode = mode;
  cfg.max_rounds = mode == GenerationMode::kLong ? 25 : 15;
  return cfg;
}

void Validate(const GenerationConfig& cfg) {
  auto fail = [](const std::string& what) {
    throw ValidationError(ValidationError::Code::kInvalidConfig, what);
  };
  if (cfg.max_rounds < 1) fail("max_rounds must be positive");
  if (cfg.keywords_per_turn < 1) fail("keywords_per_turn must be positive");
  if (cfg.max_context_tokens < 1) fail("max_context_tokens must be positive");
  if (!(cfg.context_fill_ratio > 0.0 && cfg.context_fill_ratio <= 1.0)) {
    fail("context_fill_ratio must lie in (0, 1]");
  }
  if (!(cfg.similarity_threshold > 0.0 && cfg.similarity_threshold <= 1.0)) {
    fail("similarity_threshold must lie in (0, 1]");
  }
  if (!(cfg.concept_threshold > 0.0 && cfg.concept_threshold <= 1.0)) {
    fail("concept_threshold must lie in (0, 1]");
  }
  if (cfg.header_line_cap < 1) fail("header_line_cap must be positive");
  if (!(cfg.chars_per_token > 0.0)) fail("chars_per_token must be positive");
  if (cfg.temperature < 0.0) fail("temperature must be non-negative");
  if (cfg.doctor_reply_tokens < 1 || cfg.patient_reply_tokens < 1) {
    fail("reply token limits must be positive");
  }
  if (cfg.polish_passes < 0) fail("polish_passes must be non-negative");
}

double HarmonicMean(double a, double b) {
  if (a <= 0.0 || b <= 0.0) return 0.0;
  return 2.0 * a * b / (a + b);
}

}  // namespace dialogforge
