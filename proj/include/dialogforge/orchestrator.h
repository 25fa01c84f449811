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

// The doctor-patient loop.
//
// For one note section, the loop extracts a keyword checklist and then runs
// rounds: the doctor agent is prompted with the section text, the dialogue
// so far and up to `keywords_per_turn` uncovered keywords; the patient agent
// answers from the same section text. After each round the checklist is
// updated from the two new utterances. The loop stops when every keyword is
// covered, after `max_rounds`, or when the rendered context no longer fits
// the token budget. A factuality check then looks for gaps and may run one
// extra targeted round.

#ifndef DIALOGFORGE_ORCHESTRATOR_H_
#define DIALOGFORGE_ORCHESTRATOR_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dialogforge/backend.h"
#include "dialogforge/concepts.h"
#include "dialogforge/model.h"
#include "dialogforge/prompts.h"

namespace dialogforge {

struct LoopState {
  Dialogue history;
  Checklist checklist;
  int round = 0;
  std::size_t token_spend = 0;
};

/// Chooses the keywords for the next doctor turn.
using KeywordPlanner = std::function<std::vector<ConceptEntry>(
    const LoopState&, const GenerationConfig&)>;

/// Everything a pipeline stage needs besides its inputs. The referenced
/// objects must outlive the context.
struct PipelineContext {
  const Lexicon& lexicon;
  ChatBackend& backend;
  const PromptSet& prompts;
  GenerationConfig cfg;
  KeywordPlanner planner;  // SelectKeywords when empty
};

/// First min(keywords_per_turn, uncovered) uncovered entries, in checklist
/// order.
std::vector<ConceptEntry> SelectKeywords(const LoopState& state,
                                         const GenerationConfig& cfg);

struct TerminationCheck {
  bool stop = false;
  Termination reason = Termination::kNone;
};

TerminationCheck ShouldTerminate(const LoopState& state,
                                 const GenerationConfig& cfg);

/// Text bound to the {{note}} slot for a section: its header line and body.
std::string SectionPromptText(const NoteSection& section);

/// Drops whole rounds, oldest first but never round 0, until
/// `fits(history)` holds or only round 0 is left.
std::vector<Utterance> TrimHistory(
    const std::vector<Utterance>& turns,
    const std::function<bool(const std::vector<Utterance>&)>& fits);

/// One doctor turn and one patient turn. `keywords` overrides the planner.
/// Backend errors are rethrown with the round index attached.
void RunRound(LoopState& state, const NoteSection& section,
              const PipelineContext& ctx,
              std::optional<std::vector<ConceptEntry>> keywords = std::nullopt);

struct FactualityResult {
  bool complete = true;
  std::vector<ConceptEntry> missing;
  std::optional<bool> llm_verdict;
  std::vector<std::string> warnings;
};

/// Uncovered checklist entries make the result incomplete without a backend
/// call. Otherwise, when cfg.llm_factuality_check is set, one factuality
/// prompt is sent and a "no" verdict marks the result incomplete. An
/// unreadable verdict counts as complete and is reported as a warning.
FactualityResult FactualityCheck(const Dialogue& dialogue,
                                 const NoteSection& section,
                                 const Checklist& checklist,
                                 const PipelineContext& ctx);

/// Builds the checklist, runs rounds until termination, then the factuality
/// check with at most one remediation round. Returns a raw dialogue; empty
/// when the section has no clinically relevant keywords.
Dialogue RunSectionLoop(const NoteSection& section, const PipelineContext& ctx);

/// Strips a leading speaker tag and anything from the first line tagged for
/// the other speaker. Throws MalformedResponse when nothing is left.
std::string CleanReply(const std::string& reply, Speaker speaker);

}  // namespace dialogforge

#endif  // DIALOGFORGE_ORCHESTRATOR_H_
