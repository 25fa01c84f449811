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

// Domain types shared across the note-to-dialogue pipeline and the
// evaluation suite.

#ifndef DIALOGFORGE_MODEL_H_
#define DIALOGFORGE_MODEL_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dialogforge {

/// One of the 21 canonical clinical note headings, or the `preamble`
/// sentinel for text that precedes the first detected heading.
class SectionHeader {
 public:
  static constexpr std::size_t kCanonicalCount = 21;
  static const std::array<std::string_view, kCanonicalCount>& Canonical();

  /// Accepts any spelling that normalizes to a canonical name or
  /// "preamble"; throws ValidationError otherwise.
  static SectionHeader FromName(std::string_view name);
  static SectionHeader Preamble();

  const std::string& name() const { return name_; }
  bool is_preamble() const { return name_ == "preamble"; }

  friend bool operator==(const SectionHeader&, const SectionHeader&) = default;

 private:
  explicit SectionHeader(std::string name) : name_(std::move(name)) {}
  std::string name_;
};

struct ClinicalNote {
  std::string id;
  std::string text;
};

/// Throws ValidationError (kEmptyId / kEmptyNote) when the note is unusable.
void Validate(const ClinicalNote& note);

/// A header-labelled slice of a note. `header_line` holds the raw header
/// line including its newline (empty for the preamble); `header_line + body`
/// is exactly the note text in [begin, end).
struct NoteSection {
  SectionHeader header = SectionHeader::Preamble();
  std::string header_line;
  std::string body;
  std::size_t begin = 0;
  std::size_t end = 0;

  /// Body with surrounding whitespace removed.
  std::string content() const;
};

enum class Speaker { kDoctor, kPatient };

std::string_view SpeakerName(Speaker s);   // "doctor" / "patient"
std::string_view SpeakerLabel(Speaker s);  // "Doctor" / "Patient"
std::optional<Speaker> ParseSpeaker(std::string_view name);

struct Utterance {
  Speaker speaker = Speaker::kDoctor;
  std::string text;
  int round_index = 0;

  friend bool operator==(const Utterance&, const Utterance&) = default;
};

enum class SemanticGroup { kDisease, kDrug, kDevice, kProcedure, kOther };

std::string_view GroupName(SemanticGroup g);
/// Accepts the long names ("disease", "drugs", ...) and the UMLS group
/// abbreviations (DISO, CHEM, DEVI, PROC); anything else maps to kOther.
SemanticGroup ParseGroup(std::string_view name);

struct ConceptEntry {
  std::string surface;
  std::string cui;
  SemanticGroup group = SemanticGroup::kOther;

  friend bool operator==(const ConceptEntry&, const ConceptEntry&) = default;
};

/// Ordered keyword list that a dialogue has to cover. Entry order is fixed
/// at construction and coverage flags only ever go from false to true.
class Checklist {
 public:
  Checklist() = default;
  explicit Checklist(std::vector<ConceptEntry> entries);

  const std::vector<ConceptEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  bool is_covered(std::size_t i) const { return covered_.at(i); }
  /// Returns true if the flag flipped.
  bool mark(std::size_t i);

  std::size_t covered_count() const;
  std::size_t uncovered_count() const { return size() - covered_count(); }
  std::vector<ConceptEntry> uncovered() const;
  std::vector<std::size_t> uncovered_indices() const;

 private:
  std::vector<ConceptEntry> entries_;
  std::vector<bool> covered_;
};

enum class Provenance { kRaw, kPolished, kChecked, kCombined };
std::string_view ProvenanceName(Provenance p);

enum class Termination { kNone, kChecklistEmpty, kMaxRounds, kTokenBudget };
std::string_view TerminationName(Termination t);

/// Bookkeeping the generator attaches to a dialogue.
struct DialogueMeta {
  std::vector<ConceptEntry> keywords;  // checklist the dialogue was built for
  std::vector<ConceptEntry> missing;   // checklist entries left uncovered
  // Keywords handed to the doctor, one list per doctor turn in order.
  std::vector<std::vector<ConceptEntry>> assignments;
  int rounds = 0;
  Termination termination = Termination::kNone;
  bool extra_round = false;
  // Number of trailing turns forming the most recent combine segment.
  std::size_t tail_turns = 0;
  std::vector<std::string> warnings;
};

struct Dialogue {
  std::string note_id;
  std::vector<Utterance> turns;
  Provenance provenance = Provenance::kRaw;
  DialogueMeta meta;

  bool empty() const { return turns.empty(); }
  /// True if turns go doctor, patient, doctor, ... from the first turn.
  bool alternates() const;
};

enum class PromptName {
  kDoctor,
  kPatient,
  kPolish,
  kHallucination,
  kPostediting,
  kFactuality,
};

std::string_view PromptFileName(PromptName n);

struct PromptTemplate {
  PromptName name = PromptName::kDoctor;
  std::string body;
};

enum class GenerationMode { kShort, kLong };
std::string_view ModeName(GenerationMode m);
GenerationMode ParseMode(std::string_view name);

struct GenerationConfig {
  int max_rounds = 15;
  int keywords_per_turn = 4;
  int max_context_tokens = 4096;
  double context_fill_ratio = 0.8;
  GenerationMode mode = GenerationMode::kShort;
  double similarity_threshold = 0.85;
  double concept_threshold = 0.7;

  // Segmenter: longest normalized line still considered as a header.
  std::size_t header_line_cap = 60;
  double chars_per_token = 4.0;
  double temperature = 0.7;
  int doctor_reply_tokens = 200;
  int patient_reply_tokens = 100;
  int polish_passes = 1;
  bool llm_factuality_check = true;

  /// Short mode defaults to 15 rounds, long mode to 25.
  static GenerationConfig ForMode(GenerationMode mode);

  double token_budget() const {
    return context_fill_ratio * static_cast<double>(max_context_tokens);
  }
};

/// Throws ValidationError(kInvalidConfig) naming the offending field.
void Validate(const GenerationConfig& cfg);

struct EvalReport {
  double r1 = 0;
  double r2 = 0;
  double rl = 0;
  double rlsum = 0;
  double bleu = 0;
  double sbleu = 0;
  double concept_recall = 0;
  double concept_precision = 0;
  double concept_f1 = 0;
  double len = 0;
  std::size_t pairs = 0;
};

double HarmonicMean(double a, double b);

}  // namespace dialogforge

#endif  // DIALOGFORGE_MODEL_H_
