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

#include "dialogforge/prompts.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dialogforge/error.h"
#include "dialogforge/transcript.h"

namespace dialogforge {

namespace {

constexpr std::string_view kDoctor =
    "Clinical Note: {{note}}\n"
    "\n"
    "Conversation history:\n"
    "{{history}}\n"
    "\n"
    "Please role-play as a doctor and further ask a question based on the "
    "above dialogue to follow up the history conversation. The treatment "
    "plan, medication, and dosage you give to the patient must also be "
    "consistent with the clinical note. Your question should be around these "
    "keywords, and you cannot modify these keywords or use synonyms.\n"
    "Key Words: {{keywords}}\n";

constexpr std::string_view kPatient =
    "Clinical Note: {{note}}\n"
    "\n"
    "Conversation history:\n"
    "{{history}}\n"
    "\n"
    "Please act as a patient and answer my question or follow up on the "
    "conversation. Your answer must be consistent with the clinical note and "
    "cannot include information that is not in the clinical note. Your "
    "responses should be more colloquial.\n"
    "Key Words: {{keywords}}\n";

constexpr std::string_view kPolish =
    "Please rewrite all the conversations based on the notes to become "
    "fluence and more colloquial, like a normal conversation between the "
    "doctor and patient based on the clinical notes. Now you should rewrite "
    "the following conversations, and your conversation should include all "
    "the information and all the keywords. The keywords must be used directly "
    "instead of using synonyms when using them in the conversation\n"
    "Key Words: {{keywords}}\n"
    "\n"
    "The conversation:\n"
    "{{conversation}}\n"
    "\n"
    "Clinical Note: {{note}}\n"
    "\n"
    "The conversation between the doctor and the patient should involve "
    "multiple rounds, with each question and answer being relatively short. "
    "You should try to ensure that the dialogue is smooth.\n";

constexpr std::string_view kHallucination =
    "Check whether the information of the conversation is consistent with "
    "the clinical note. If there is some information that you cannot find on "
    "the clinical note, please eliminate it. You also should delete the "
    "duplicate part. The conversation should include all the key "
    "words:{{keywords}}\n"
    "\n"
    "Clinical Note: {{note}}\n"
    "\n"
    "Conversation:\n"
    "{{conversation}}\n";

constexpr std::string_view kPostediting =
    "History Conversation:\n"
    "{{conversation}}\n"
    "\n"
    "Generated Conversation:\n"
    "{{conversation2}}\n"
    "\n"
    "The above two paragraphs were extracted from a complete conversation. "
    "Please concatenate the two dialogues together. It means that your "
    "generation should include all the information such as the dosage of the "
    "medication which is mentioned in the clinical note. You should try to "
    "ensure that the dialogue is smooth. The conversation must include these "
    "key words:{{keywords}} and you should also eliminate the repeat parts.\n";

constexpr std::string_view kFactuality =
    "Clinical Note: {{note}}\n"
    "\n"
    "Conversation:\n"
    "{{conversation}}\n"
    "\n"
    "Does the conversation above include all the essential information of "
    "the clinical note, in particular every one of these key words?\n"
    "Key Words: {{keywords}}\n"
    "Answer only yes or no.\n";

std::size_t IndexOf(PromptName name) { return static_cast<std::size_t>(name); }

constexpr std::array<PromptName, 6> kAllNames = {
    PromptName::kDoctor,      PromptName::kPatient,
    PromptName::kPolish,      PromptName::kHallucination,
    PromptName::kPostediting, PromptName::kFactuality,
};

}  // namespace

std::vector<std::string> ReferencedSlots(std::string_view body) {
  std::vector<std::string> slots;
  std::size_t pos = 0;
  while ((pos = body.find("{{", pos)) != std::string_view::npos) {
    const std::size_t close = body.find("}}", pos + 2);
    if (close == std::string_view::npos) {
      throw PromptError(PromptError::Code::kUnknownSlot, "",
                        "unterminated '{{' in prompt template");
    }
    std::string name(body.substr(pos + 2, close - pos - 2));
    if (std::find(kPromptSlots.begin(), kPromptSlots.end(), name) ==
        kPromptSlots.end()) {
      throw PromptError(PromptError::Code::kUnknownSlot, name,
                        "unknown prompt slot '" + name + "'");
    }
    if (std::find(slots.begin(), slots.end(), name) == slots.end()) {
      slots.push_back(std::move(name));
    }
    pos = close + 2;
  }
  return slots;
}

std::string RenderPrompt(const PromptTemplate& tmpl,
                         const PromptBindings& bindings) {
  auto value_of = [&](const std::string& slot) -> std::optional<std::string> {
    if (slot == "note") return bindings.note;
    if (slot == "keywords") {
      if (!bindings.keywords) return std::nullopt;
      std::string joined;
      for (std::size_t i = 0; i < bindings.keywords->size(); ++i) {
        if (i > 0) joined += ',';
        joined += (*bindings.keywords)[i];
      }
      return joined;
    }
    const std::optional<std::vector<Utterance>>* turns = nullptr;
    if (slot == "history") turns = &bindings.history;
    if (slot == "conversation") turns = &bindings.conversation;
    if (slot == "conversation2") turns = &bindings.conversation2;
    if (turns == nullptr || !turns->has_value()) return std::nullopt;
    return FormatTranscript(**turns);
  };

  // Validate every slot first so an unbound slot is reported even if it
  // appears after one that would render.
  const auto slots = ReferencedSlots(tmpl.body);
  std::vector<std::pair<std::string, std::string>> values;
  for (const auto& slot : slots) {
    auto v = value_of(slot);
    if (!v) {
      throw PromptError(PromptError::Code::kUnboundSlot, slot,
                        "prompt slot '" + slot + "' is not bound");
    }
    values.emplace_back(slot, std::move(*v));
  }

  std::string out;
  const std::string_view body = tmpl.body;
  std::size_t pos = 0;
  while (true) {
    const std::size_t open = body.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(body.substr(pos));
      break;
    }
    out.append(body.substr(pos, open - pos));
    const std::size_t close = body.find("}}", open + 2);
    const std::string name(body.substr(open + 2, close - open - 2));
    for (const auto& [slot, value] : values) {
      if (slot == name) {
        out += value;
        break;
      }
    }
    pos = close + 2;
  }
  return out;
}

PromptTemplate DefaultPrompt(PromptName name) {
  switch (name) {
    case PromptName::kDoctor:
      return {name, std::string(kDoctor)};
    case PromptName::kPatient:
      return {name, std::string(kPatient)};
    case PromptName::kPolish:
      return {name, std::string(kPolish)};
    case PromptName::kHallucination:
      return {name, std::string(kHallucination)};
    case PromptName::kPostediting:
      return {name, std::string(kPostediting)};
    case PromptName::kFactuality:
      return {name, std::string(kFactuality)};
  }
  return {name, std::string(kDoctor)};
}

PromptSet::PromptSet() {
  for (PromptName n : kAllNames) templates_[IndexOf(n)] = DefaultPrompt(n);
}

PromptSet PromptSet::FromDirectory(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw PromptError(PromptError::Code::kIo, "",
                      "prompt directory '" + dir + "' does not exist");
  }
  PromptSet set;
  for (PromptName n : kAllNames) {
    const fs::path file = fs::path(dir) / (std::string(PromptFileName(n)) + ".txt");
    if (!fs::exists(file)) continue;
    std::ifstream in(file);
    if (!in) {
      throw PromptError(PromptError::Code::kIo, "",
                        "cannot read prompt file '" + file.string() + "'");
    }
    std::ostringstream body;
    body << in.rdbuf();
    PromptTemplate tmpl{n, body.str()};
    ReferencedSlots(tmpl.body);  // reject unknown slots up front
    set.set(std::move(tmpl));
  }
  return set;
}

const PromptTemplate& PromptSet::get(PromptName name) const {
  return templates_[IndexOf(name)];
}

void PromptSet::set(PromptTemplate tmpl) {
  templates_[IndexOf(tmpl.name)] = std::move(tmpl);
}

std::vector<std::string> Surfaces(const std::vector<ConceptEntry>& entries) {
  std::vector<std::string> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.surface);
  return out;
}

}  // namespace dialogforge
