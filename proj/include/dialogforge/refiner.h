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

#ifndef DIALOGFORGE_REFINER_H_
#define DIALOGFORGE_REFINER_H_

#include <string>
#include <vector>

#include "dialogforge/model.h"
#include "dialogforge/orchestrator.h"

namespace dialogforge {

/// Rewrites the dialogue for fluency. The rewrite is rejected, and the input
/// returned with a warning, when it cannot be parsed or loses a keyword the
/// input covered.
Dialogue Polish(const Dialogue& dialogue, const std::string& note_body,
                const Checklist& checklist, const PipelineContext& ctx);

/// Removes content that the note does not support, with the same safeguard
/// as Polish.
Dialogue HallucinationCheck(const Dialogue& dialogue,
                            const std::string& note_body,
                            const Checklist& checklist,
                            const PipelineContext& ctx);

/// Merges two dialogues through the postediting prompt. Short mode binds the
/// whole left dialogue; long mode binds only its most recent segment
/// (meta.tail_turns) and keeps the older turns verbatim in front. An
/// unparseable reply falls back to plain concatenation.
Dialogue PosteditCombine(const Dialogue& left, const Dialogue& right,
                         const std::string& note_body,
                         const Checklist& checklist,
                         const PipelineContext& ctx);

/// Indices of `checklist` entries that `turns` cover, judged from scratch.
std::vector<std::size_t> CoveredIndices(const Checklist& checklist,
                                        const std::vector<Utterance>& turns,
                                        const PipelineContext& ctx);

/// Union by CUI, first occurrence wins.
std::vector<ConceptEntry> MergeKeywords(const std::vector<ConceptEntry>& a,
                                        const std::vector<ConceptEntry>& b);

/// Segment, loop per section, polish and check each section dialogue, then
/// fold the section dialogues together left to right. meta.keywords holds
/// the union checklist and meta.missing what the final dialogue leaves out.
/// Backend errors abort the whole note.
Dialogue RunFullPipeline(const ClinicalNote& note, const PipelineContext& ctx);

}  // namespace dialogforge

#endif  // DIALOGFORGE_REFINER_H_
