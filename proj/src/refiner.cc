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

#include "dialogforge/refiner.h"

#include <algorithm>
#include <unordered_set>

#include "dialogforge/concepts.h"
#include "dialogforge/error.h"
#include "dialogforge/segmenter.h"
#include "dialogforge/transcript.h"

namespace dialogforge {

namespace {

// Whatever the context window has left after the prompt.
int ReplyBudget(const std::string& prompt, const GenerationConfig& cfg) {
  const auto used =
      static_cast<long>(EstimateTokens(prompt, cfg.chars_per_token));
  return static_cast<int>(std::max<long>(1, cfg.max_context_tokens - used));
}

ChatRequest RewriteRequest(std::string prompt, const GenerationConfig& cfg,
                           const char* task) {
  ChatRequest req;
  req.max_reply_tokens = ReplyBudget(prompt, cfg);
  req.messages.push_back(ChatMessage{Role::kUser, std::move(prompt)});
  req.temperature = cfg.temperature;
  req.task = task;
  return req;
}

void RefreshMissing(Dialogue& d, const PipelineContext& ctx) {
  Checklist fresh(d.meta.keywords);
  MarkCovered(fresh, d.turns, ctx.lexicon, ctx.cfg);
  d.meta.missing = fresh.uncovered();
}

Dialogue RewritePass(const Dialogue& dialogue, const std::string& note_body,
                     const Checklist& checklist, const PipelineContext& ctx,
                     PromptName prompt_name, Provenance provenance,
                     const char* task) {
  if (dialogue.empty()) return dialogue;
  PromptBindings bindings;
  bindings.note = note_body;
  bindings.keywords = Surfaces(checklist.entries());
  bindings.conversation = dialogue.turns;
  const std::string prompt =
      RenderPrompt(ctx.prompts.get(prompt_name), bindings);
  const std::string reply =
      ctx.backend.Complete(RewriteRequest(prompt, ctx.cfg, task));

  Dialogue rejected = dialogue;
  std::vector<Utterance> turns;
  try {
    turns = ParseTranscript(reply);
  } catch (const TranscriptError& e) {
    rejected.meta.warnings.push_back(std::string(task) +
                                     " reply rejected: " + e.what());
    return rejected;
  }

  const auto before = CoveredIndices(checklist, dialogue.turns, ctx);
  const auto after = CoveredIndices(checklist, turns, ctx);
  std::vector<std::string> lost;
  for (std::size_t i : before) {
    if (std::find(after.begin(), after.end(), i) == after.end()) {
      lost.push_back(checklist.entries()[i].surface);
    }
  }
  if (!lost.empty()) {
    std::string names;
    for (const auto& s : lost) names += (names.empty() ? "" : ", ") + s;
    rejected.meta.warnings.push_back(std::string(task) +
                                     " reply rejected: drops keyword(s) " +
                                     names);
    return rejected;
  }

  Dialogue out = dialogue;
  out.turns = std::move(turns);
  out.provenance = provenance;
  out.meta.tail_turns = out.turns.size();
  RefreshMissing(out, ctx);
  return out;
}

}  // namespace

std::vector<std::size_t> CoveredIndices(const Checklist& checklist,
                                        const std::vector<Utterance>& turns,
                                        const PipelineContext& ctx) {
  Checklist fresh(checklist.entries());
  MarkCovered(fresh, turns, ctx.lexicon, ctx.cfg);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    if (fresh.is_covered(i)) out.push_back(i);
  }
  return out;
}

std::vector<ConceptEntry> MergeKeywords(const std::vector<ConceptEntry>& a,
                                        const std::vector<ConceptEntry>& b) {
  std::vector<ConceptEntry> out;
  std::unordered_set<std::string> seen;
  for (const auto* list : {&a, &b}) {
    for (const auto& e : *list) {
      if (seen.insert(e.cui).second) out.push_back(e);
    }
  }
  return out;
}

Dialogue Polish(const Dialogue& dialogue, const std::string& note_body,
                const Checklist& checklist, const PipelineContext& ctx) {
  return RewritePass(dialogue, note_body, checklist, ctx, PromptName::kPolish,
                     Provenance::kPolished, "polish");
}

Dialogue HallucinationCheck(const Dialogue& dialogue,
                            const std::string& note_body,
                            const Checklist& checklist,
                            const PipelineContext& ctx) {
  return RewritePass(dialogue, note_body, checklist, ctx,
                     PromptName::kHallucination, Provenance::kChecked,
                     "hallucination");
}

Dialogue PosteditCombine(const Dialogue& left, const Dialogue& right,
                         const std::string& note_body,
                         const Checklist& checklist,
                         const PipelineContext& ctx) {
  if (left.empty() && right.empty()) {
    throw std::invalid_argument("PosteditCombine needs a non-empty dialogue");
  }
  if (left.empty()) return right;
  if (right.empty()) return left;

  std::vector<Utterance> prefix;
  std::vector<Utterance> tail = left.turns;
  if (ctx.cfg.mode == GenerationMode::kLong) {
    std::size_t n = left.meta.tail_turns;
    if (n == 0 || n > left.turns.size()) n = left.turns.size();
    const auto split = left.turns.end() - static_cast<std::ptrdiff_t>(n);
    prefix.assign(left.turns.begin(), split);
    tail.assign(split, left.turns.end());
  }

  PromptBindings bindings;
  bindings.note = note_body;
  bindings.keywords = Surfaces(checklist.entries());
  bindings.conversation = tail;
  bindings.conversation2 = right.turns;
  const std::string prompt =
      RenderPrompt(ctx.prompts.get(PromptName::kPostediting), bindings);
  const std::string reply =
      ctx.backend.Complete(RewriteRequest(prompt, ctx.cfg, "postediting"));

  Dialogue out;
  out.note_id = left.note_id.empty() ? right.note_id : left.note_id;
  out.provenance = Provenance::kCombined;
  out.meta.keywords = MergeKeywords(left.meta.keywords, right.meta.keywords);
  out.meta.warnings = left.meta.warnings;
  out.meta.warnings.insert(out.meta.warnings.end(),
                           right.meta.warnings.begin(),
                           right.meta.warnings.end());
  out.meta.rounds = left.meta.rounds + right.meta.rounds;

  std::vector<Utterance> merged;
  try {
    merged = ParseTranscript(reply);
  } catch (const TranscriptError& e) {
    out.meta.warnings.push_back(std::string("postediting reply rejected, "
                                            "concatenating instead: ") +
                                e.what());
    merged = tail;
    merged.insert(merged.end(), right.turns.begin(), right.turns.end());
  }
  out.meta.tail_turns = std::min(right.turns.size(), merged.size());
  out.turns = std::move(prefix);
  out.turns.insert(out.turns.end(), merged.begin(), merged.end());
  RefreshMissing(out, ctx);
  return out;
}

Dialogue RunFullPipeline(const ClinicalNote& note, const PipelineContext& ctx) {
  Validate(ctx.cfg);
  const auto sections =
      SegmentNote(note, ctx.cfg.similarity_threshold, ctx.cfg.header_line_cap);

  std::vector<Dialogue> parts;
  for (const NoteSection& section : sections) {
    Dialogue d = RunSectionLoop(section, ctx);
    if (d.empty()) continue;
    d.note_id = note.id;
    const Checklist checklist(d.meta.keywords);
    const std::string body = SectionPromptText(section);
    for (int pass = 0; pass < ctx.cfg.polish_passes; ++pass) {
      d = Polish(d, body, checklist, ctx);
    }
    d = HallucinationCheck(d, body, checklist, ctx);
    parts.push_back(std::move(d));
  }

  if (parts.empty()) {
    Dialogue empty;
    empty.note_id = note.id;
    return empty;
  }
  Dialogue acc = std::move(parts.front());
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const Checklist merged(MergeKeywords(acc.meta.keywords, parts[i].meta.keywords));
    acc = PosteditCombine(acc, parts[i], note.text, merged, ctx);
  }
  acc.note_id = note.id;
  RefreshMissing(acc, ctx);
  return acc;
}

}  // namespace dialogforge
