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

#include "dialogforge/orchestrator.h"

#include <algorithm>

#include "dialogforge/error.h"
#include "dialogforge/text.h"
#include "dialogforge/transcript.h"

namespace dialogforge {

namespace {

ChatRequest MakeRequest(std::string prompt, int max_reply_tokens,
                        const GenerationConfig& cfg, std::string task) {
  ChatRequest req;
  req.messages.push_back(ChatMessage{Role::kUser, std::move(prompt)});
  req.max_reply_tokens = std::max(1, max_reply_tokens);
  req.temperature = cfg.temperature;
  req.task = std::move(task);
  return req;
}

// Renders `tmpl` with `bindings` plus a history trimmed to the token budget.
std::string RenderWithHistory(const PromptTemplate& tmpl,
                              PromptBindings bindings,
                              const std::vector<Utterance>& history,
                              const GenerationConfig& cfg) {
  const double budget = cfg.token_budget();
  auto render = [&](const std::vector<Utterance>& h) {
    bindings.history = h;
    return RenderPrompt(tmpl, bindings);
  };
  const auto trimmed = TrimHistory(history, [&](const auto& h) {
    return static_cast<double>(EstimateTokens(render(h), cfg.chars_per_token)) <
           budget;
  });
  return render(trimmed);
}

}  // namespace

std::vector<ConceptEntry> SelectKeywords(const LoopState& state,
                                         const GenerationConfig& cfg) {
  auto uncovered = state.checklist.uncovered();
  const auto cap = static_cast<std::size_t>(std::max(0, cfg.keywords_per_turn));
  if (uncovered.size() > cap) uncovered.resize(cap);
  return uncovered;
}

TerminationCheck ShouldTerminate(const LoopState& state,
                                 const GenerationConfig& cfg) {
  if (state.checklist.uncovered_count() == 0) {
    return {true, Termination::kChecklistEmpty};
  }
  if (state.round >= cfg.max_rounds) return {true, Termination::kMaxRounds};
  if (static_cast<double>(state.token_spend) >= cfg.token_budget()) {
    return {true, Termination::kTokenBudget};
  }
  return {false, Termination::kNone};
}

std::string SectionPromptText(const NoteSection& section) {
  return std::string(text::Trim(section.header_line + section.body));
}

std::vector<Utterance> TrimHistory(
    const std::vector<Utterance>& turns,
    const std::function<bool(const std::vector<Utterance>&)>& fits) {
  std::vector<Utterance> kept = turns;
  while (!fits(kept)) {
    const auto victim = std::find_if(kept.begin(), kept.end(),
                                     [](const Utterance& u) {
                                       return u.round_index > 0;
                                     });
    if (victim == kept.end()) break;
    const int round = victim->round_index;
    std::erase_if(kept, [round](const Utterance& u) {
      return u.round_index == round;
    });
  }
  return kept;
}

std::string CleanReply(const std::string& reply, Speaker speaker) {
  std::vector<std::string> kept;
  bool first = true;
  for (const std::string& line : text::SplitLines(reply)) {
    std::string rest;
    const auto tag = SpeakerTag(line, &rest);
    if (tag && *tag != speaker && !first) break;
    if (first && text::IsBlank(line)) continue;
    kept.push_back(tag ? rest : line);
    first = false;
  }
  std::string out = text::Join(kept, "\n");
  out = std::string(text::Trim(out));
  if (out.empty()) {
    throw BackendError(BackendError::Kind::kMalformedResponse,
                       std::string("empty ") + std::string(SpeakerName(speaker)) +
                           " reply");
  }
  return out;
}

void RunRound(LoopState& state, const NoteSection& section,
              const PipelineContext& ctx,
              std::optional<std::vector<ConceptEntry>> keywords) {
  const GenerationConfig& cfg = ctx.cfg;
  const int round = state.round;
  std::vector<ConceptEntry> assigned;
  if (keywords) {
    assigned = std::move(*keywords);
  } else if (ctx.planner) {
    assigned = ctx.planner(state, cfg);
  } else {
    assigned = SelectKeywords(state, cfg);
  }

  PromptBindings bindings;
  bindings.note = SectionPromptText(section);
  bindings.keywords = Surfaces(assigned);

  try {
    const std::string doctor_prompt =
        RenderWithHistory(ctx.prompts.get(PromptName::kDoctor), bindings,
                          state.history.turns, cfg);
    const std::string doctor_text = CleanReply(
        ctx.backend.Complete(MakeRequest(doctor_prompt, cfg.doctor_reply_tokens,
                                         cfg, "doctor")),
        Speaker::kDoctor);
    state.history.turns.push_back(Utterance{Speaker::kDoctor, doctor_text, round});

    const std::string patient_prompt =
        RenderWithHistory(ctx.prompts.get(PromptName::kPatient), bindings,
                          state.history.turns, cfg);
    const std::string patient_text = CleanReply(
        ctx.backend.Complete(MakeRequest(
            patient_prompt, cfg.patient_reply_tokens, cfg, "patient")),
        Speaker::kPatient);
    state.history.turns.push_back(
        Utterance{Speaker::kPatient, patient_text, round});

    state.token_spend =
        std::max(EstimateTokens(doctor_prompt, cfg.chars_per_token),
                 EstimateTokens(patient_prompt, cfg.chars_per_token));
  } catch (BackendError& e) {
    e.set_round_index(round);
    throw;
  }

  const std::size_t n = state.history.turns.size();
  const std::vector<Utterance> fresh(state.history.turns.begin() + (n - 2),
                                     state.history.turns.end());
  MarkCovered(state.checklist, fresh, ctx.lexicon, cfg);
  state.history.meta.assignments.push_back(std::move(assigned));
  ++state.round;
}

FactualityResult FactualityCheck(const Dialogue& dialogue,
                                 const NoteSection& section,
                                 const Checklist& checklist,
                                 const PipelineContext& ctx) {
  FactualityResult result;
  result.missing = checklist.uncovered();
  if (!result.missing.empty()) {
    result.complete = false;
    return result;
  }
  if (!ctx.cfg.llm_factuality_check || dialogue.empty()) return result;

  PromptBindings bindings;
  bindings.note = SectionPromptText(section);
  bindings.conversation = dialogue.turns;
  bindings.keywords = Surfaces(checklist.entries());
  const std::string prompt =
      RenderPrompt(ctx.prompts.get(PromptName::kFactuality), bindings);
  const std::string reply =
      ctx.backend.Complete(MakeRequest(prompt, 8, ctx.cfg, "factuality"));

  for (const auto& word : text::Words(reply)) {
    if (word == "yes" || word == "no") {
      result.llm_verdict = word == "yes";
      break;
    }
  }
  if (!result.llm_verdict) {
    result.warnings.push_back("factuality verdict unreadable, treated as complete: '" +
                              std::string(text::Trim(reply)) + "'");
  } else if (!*result.llm_verdict) {
    result.complete = false;
    result.warnings.push_back(
        "factuality check reported missing information although every "
        "keyword is covered");
  }
  return result;
}

Dialogue RunSectionLoop(const NoteSection& section, const PipelineContext& ctx) {
  LoopState state;
  state.checklist = BuildChecklist(section, ctx.lexicon, ctx.cfg);
  state.history.provenance = Provenance::kRaw;

  TerminationCheck check = ShouldTerminate(state, ctx.cfg);
  while (!check.stop) {
    RunRound(state, section, ctx);
    check = ShouldTerminate(state, ctx.cfg);
  }

  Dialogue& d = state.history;
  d.meta.termination = check.reason;
  if (!state.checklist.empty()) {
    FactualityResult fc =
        FactualityCheck(d, section, state.checklist, ctx);
    d.meta.warnings.insert(d.meta.warnings.end(), fc.warnings.begin(),
                           fc.warnings.end());
    if (!fc.complete && !fc.missing.empty() &&
        check.reason != Termination::kTokenBudget) {
      std::vector<ConceptEntry> target = fc.missing;
      const auto cap = static_cast<std::size_t>(ctx.cfg.keywords_per_turn);
      if (target.size() > cap) target.resize(cap);
      RunRound(state, section, ctx, std::move(target));
      d.meta.extra_round = true;
    }
  }

  d.meta.keywords = state.checklist.entries();
  d.meta.missing = state.checklist.uncovered();
  d.meta.rounds = state.round;
  d.meta.tail_turns = d.turns.size();
  return std::move(state.history);
}

}  // namespace dialogforge
