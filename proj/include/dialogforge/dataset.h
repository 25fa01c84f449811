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

// Line-delimited JSON datasets and the key=value configuration file.
//
//   notes      {"id": str, "text": str}
//   dialogues  {"id": str, "mode": str,
//               "turns": [{"speaker": "doctor"|"patient", "text": str}],
//               "coverage": {"covered": int, "total": int}}
//   sections   {"note_id": str, "header": str, "body": str, "span": [b, e]}
//   concepts   {"id": str, "concepts": [{"surface", "cui", "group"}]}
//
// Blank lines are skipped. Line numbers in errors are 1-based.

#ifndef DIALOGFORGE_DATASET_H_
#define DIALOGFORGE_DATASET_H_

#include <istream>
#include <map>
#include <string>
#include <vector>

#include "dialogforge/model.h"
#include "json.hpp"

namespace dialogforge {

std::vector<ClinicalNote> ReadNotes(std::istream& in);
std::vector<ClinicalNote> ReadNotesFile(const std::string& path);

nlohmann::ordered_json DialogueToJson(const Dialogue& d, GenerationMode mode);
/// Accepts the dialogue schema; "mode" and "coverage" are optional.
Dialogue DialogueFromJson(const nlohmann::json& j);

std::vector<Dialogue> ReadDialogues(std::istream& in);
std::vector<Dialogue> ReadDialoguesFile(const std::string& path);

nlohmann::ordered_json SectionToJson(const std::string& note_id,
                                     const NoteSection& section);
nlohmann::ordered_json ConceptsToJson(const std::string& note_id,
                                      const std::vector<ConceptEntry>& concepts);

/// Pairs hypotheses with references by id, in hypothesis order. Throws
/// DatasetError(kIdMismatch) listing every id present on one side only.
std::vector<std::pair<Dialogue, Dialogue>> AlignById(
    const std::vector<Dialogue>& hyps, const std::vector<Dialogue>& refs);

/// Ordered key=value table; '#' starts a comment line.
using ConfigTable = std::map<std::string, std::string>;
ConfigTable ReadConfigTable(std::istream& in);
ConfigTable ReadConfigFile(const std::string& path);

/// Sets one GenerationConfig field. Returns false for an unknown key;
/// throws DatasetError(kConfig) for an unparseable value.
bool ApplyConfigValue(GenerationConfig& cfg, const std::string& key,
                      const std::string& value);

/// Every GenerationConfig field as key=value lines, in declaration order.
std::string FormatConfig(const GenerationConfig& cfg);

}  // namespace dialogforge

#endif  // DIALOGFORGE_DATASET_H_
