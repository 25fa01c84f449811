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

// Deterministic stand-in for a chat-completion service.
//
// Scripted mode plays back a fixed list of replies in call order. Rule mode
// derives a reply from the prompt itself, keyed on the request task (or, if
// the task is unset, on phrases of the default prompts):
//
//   doctor         one question naming every `Key Words:` entry verbatim
//   patient        for each keyword, the first sentence of the embedded
//                  clinical note that mentions it
//   polish,        the embedded conversation, unchanged
//   hallucination
//   postediting    the history conversation followed by the generated one
//   factuality     "yes" if every keyword occurs in the conversation,
//                  otherwise "no"
//
// Rule replies are cut at a line or sentence boundary to fit the request's
// max_reply_tokens, mirroring a length-limited completion.

#ifndef DIALOGFORGE_MOCK_BACKEND_H_
#define DIALOGFORGE_MOCK_BACKEND_H_

#include <cstddef>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "dialogforge/backend.h"

namespace dialogforge {

class MockBackend : public ChatBackend {
 public:
  /// Rule mode.
  MockBackend() = default;

  /// Scripted mode. When `strict` is false, calls past the end of the script
  /// fall back to rule replies instead of throwing ScriptExhausted.
  explicit MockBackend(std::vector<std::string> script, bool strict = true);

  std::string Complete(const ChatRequest& request) override;

  std::size_t call_count() const;
  std::vector<ChatRequest> requests() const;

  /// Reads a JSON array of reply strings.
  static std::vector<std::string> LoadScript(const std::string& path);

  /// The rule reply for a request, without recording the call.
  static std::string RuleReply(const ChatRequest& request,
                               double chars_per_token = 4.0);

 private:
  std::vector<std::string> script_;
  bool scripted_ = false;
  bool strict_ = true;
  std::size_t next_ = 0;
  std::vector<ChatRequest> log_;
  mutable std::mutex mu_;
};

namespace mock_detail {

/// Text following `label` (at the start of a line) up to a blank line that
/// is followed by another known prompt label, or the end of the prompt.
/// Empty when the label is absent.
std::string Region(std::string_view prompt, std::string_view label);

std::vector<std::string> KeywordsOf(std::string_view prompt);

/// Cuts `reply` to at most `max_chars` code points, preferring line, then
/// sentence boundaries. Never returns an empty string for non-empty input.
std::string FitToBudget(const std::string& reply, std::size_t max_chars);

}  // namespace mock_detail

}  // namespace dialogforge

#endif  // DIALOGFORGE_MOCK_BACKEND_H_
