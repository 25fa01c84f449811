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

#ifndef DIALOGFORGE_TRANSCRIPT_H_
#define DIALOGFORGE_TRANSCRIPT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dialogforge/model.h"

namespace dialogforge {

/// "Doctor: ...\nPatient: ..." with one line per turn (multi-line turns keep
/// their embedded newlines).
std::string FormatTranscript(const std::vector<Utterance>& turns);

/// Speaker tag at the start of `line`, tolerating markdown emphasis such as
/// "**Doctor:**" or "__Patient__:". On success `rest` receives the text
/// after the tag.
std::optional<Speaker> SpeakerTag(std::string_view line, std::string* rest);

/// Inverse of FormatTranscript for model output. A tagged line opens a turn,
/// other non-blank lines continue the current one, and lines before the
/// first tag are dropped. Round indices count doctor turns. Throws
/// TranscriptError when no speaker tag is found.
std::vector<Utterance> ParseTranscript(std::string_view text);

}  // namespace dialogforge

#endif  // DIALOGFORGE_TRANSCRIPT_H_
