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

#include "dialogforge/transcript.h"

#include <algorithm>

#include "dialogforge/error.h"
#include "dialogforge/text.h"

namespace dialogforge {

namespace {

bool IsEmphasis(char c) { return c == '*' || c == '_' || c == '#' || c == '>'; }

void SkipEmphasis(std::string_view& s) {
  while (!s.empty() && (IsEmphasis(s.front()) || s.front() == ' ' ||
                        s.front() == '\t')) {
    s.remove_prefix(1);
  }
}

}  // namespace

std::string FormatTranscript(const std::vector<Utterance>& turns) {
  std::string out;
  for (std::size_t i = 0; i < turns.size(); ++i) {
    if (i > 0) out += '\n';
    out += SpeakerLabel(turns[i].speaker);
    out += ": ";
    out += turns[i].text;
  }
  return out;
}

std::optional<Speaker> SpeakerTag(std::string_view line, std::string* rest) {
  std::string_view s = line;
  SkipEmphasis(s);
  std::optional<Speaker> speaker;
  for (Speaker candidate : {Speaker::kDoctor, Speaker::kPatient}) {
    const std::string_view label = SpeakerLabel(candidate);
    if (text::StartsWithIgnoreCase(s, label)) {
      speaker = candidate;
      s.remove_prefix(label.size());
      break;
    }
  }
  if (!speaker) return std::nullopt;
  // "**Doctor:**", "**Doctor**:", "Doctor :"
  while (!s.empty() && (IsEmphasis(s.front()) || s.front() == ' ')) {
    s.remove_prefix(1);
  }
  if (s.empty() || s.front() != ':') return std::nullopt;
  s.remove_prefix(1);
  while (!s.empty() && IsEmphasis(s.front())) s.remove_prefix(1);
  if (rest) *rest = std::string(text::Trim(s));
  return speaker;
}

std::vector<Utterance> ParseTranscript(std::string_view input) {
  std::vector<Utterance> turns;
  bool tagged = false;
  int doctor_turns = 0;
  for (const std::string& line : text::SplitLines(input)) {
    std::string rest;
    if (auto speaker = SpeakerTag(line, &rest)) {
      tagged = true;
      if (*speaker == Speaker::kDoctor) ++doctor_turns;
      turns.push_back(Utterance{*speaker, rest, std::max(0, doctor_turns - 1)});
      continue;
    }
    const auto trimmed = text::Trim(line);
    if (trimmed.empty() || turns.empty()) continue;
    std::string& current = turns.back().text;
    if (!current.empty()) current += '\n';
    current += trimmed;
  }
  if (!tagged) {
    throw TranscriptError("no Doctor:/Patient: speaker tags found in transcript");
  }
  std::erase_if(turns, [](const Utterance& u) { return text::IsBlank(u.text); });
  if (turns.empty()) {
    throw TranscriptError("transcript has speaker tags but no utterance text");
  }
  return turns;
}

}  // namespace dialogforge
