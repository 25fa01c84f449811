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

#ifndef DIALOGFORGE_PROMPTS_H_
#define DIALOGFORGE_PROMPTS_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dialogforge/model.h"

namespace dialogforge {

/// Values for the five template slots. An unset optional is unbound.
struct PromptBindings {
  std::optional<std::string> note;
  std::optional<std::vector<std::string>> keywords;
  std::optional<std::vector<Utterance>> history;
  std::optional<std::vector<Utterance>> conversation;
  std::optional<std::vector<Utterance>> conversation2;
};

inline constexpr std::array<std::string_view, 5> kPromptSlots = {
    "note", "keywords", "history", "conversation", "conversation2"};

/// Slot names referenced by `body`, in order of first use. Throws
/// PromptError(kUnknownSlot) for a `{{name}}` outside kPromptSlots.
std::vector<std::string> ReferencedSlots(std::string_view body);

/// Literal substitution of `{{slot}}` markers. Keywords are joined with ","
/// and utterance lists use FormatTranscript. Substituted text is never
/// re-scanned. Throws PromptError(kUnboundSlot) naming the first slot that
/// is referenced but not bound.
std::string RenderPrompt(const PromptTemplate& tmpl,
                         const PromptBindings& bindings);

/// Built-in template for `name`.
PromptTemplate DefaultPrompt(PromptName name);

/// One template per PromptName.
class PromptSet {
 public:
  /// The built-in templates.
  PromptSet();

  /// Built-ins overridden by `<dir>/<name>.txt` where present.
  static PromptSet FromDirectory(const std::string& dir);

  const PromptTemplate& get(PromptName name) const;
  void set(PromptTemplate tmpl);

 private:
  std::array<PromptTemplate, 6> templates_;
};

std::vector<std::string> Surfaces(const std::vector<ConceptEntry>& entries);

}  // namespace dialogforge

#endif  // DIALOGFORGE_PROMPTS_H_
