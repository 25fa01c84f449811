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

#include "dialogforge/dataset.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "dialogforge/error.h"
#include "dialogforge/text.h"

namespace dialogforge {

namespace {

using json = nlohmann::json;

std::ifstream OpenOrThrow(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DatasetError(DatasetError::Code::kIo, "cannot open '" + path + "'");
  }
  return in;
}

// Calls `fn(record, line_no)` for every non-blank line.
void ForEachRecord(std::istream& in,
                   const std::function<void(const json&, int)>& fn) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::IsBlank(line)) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DatasetError(DatasetError::Code::kMalformedRecord,
                         "line " + std::to_string(line_no) +
                             ": invalid JSON: " + e.what(),
                         line_no);
    }
    try {
      fn(record, line_no);
    } catch (const json::exception& e) {
      throw DatasetError(DatasetError::Code::kMalformedRecord,
                         "line " + std::to_string(line_no) + ": " + e.what(),
                         line_no);
    } catch (const Error& e) {
      throw DatasetError(DatasetError::Code::kMalformedRecord,
                         "line " + std::to_string(line_no) + ": " + e.what(),
                         line_no);
    }
  }
}

const json& Field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw DatasetError(DatasetError::Code::kMalformedRecord,
                       std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw DatasetError(DatasetError::Code::kConfig,
                       "bad value '" + value + "' for '" + key + "'");
  }
  return out;
}

bool ParseBool(const std::string& key, const std::string& value) {
  const std::string v = text::AsciiLower(value);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw DatasetError(DatasetError::Code::kConfig,
                     "bad value '" + value + "' for '" + key + "'");
}

std::string FormatDouble(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

}  // namespace

std::vector<ClinicalNote> ReadNotes(std::istream& in) {
  std::vector<ClinicalNote> notes;
  ForEachRecord(in, [&](const json& j, int) {
    ClinicalNote note{Field(j, "id").get<std::string>(),
                      Field(j, "text").get<std::string>()};
    notes.push_back(std::move(note));
  });
  return notes;
}

std::vector<ClinicalNote> ReadNotesFile(const std::string& path) {
  auto in = OpenOrThrow(path);
  return ReadNotes(in);
}

nlohmann::ordered_json DialogueToJson(const Dialogue& d, GenerationMode mode) {
  nlohmann::ordered_json j;
  j["id"] = d.note_id;
  j["mode"] = std::string(ModeName(mode));
  j["turns"] = nlohmann::ordered_json::array();
  for (const Utterance& u : d.turns) {
    nlohmann::ordered_json t;
    t["speaker"] = std::string(SpeakerName(u.speaker));
    t["text"] = u.text;
    j["turns"].push_back(std::move(t));
  }
  const std::size_t total = d.meta.keywords.size();
  j["coverage"]["covered"] = total - std::min(total, d.meta.missing.size());
  j["coverage"]["total"] = total;
  return j;
}

Dialogue DialogueFromJson(const nlohmann::json& j) {
  Dialogue d;
  d.note_id = Field(j, "id").get<std::string>();
  for (const json& t : Field(j, "turns")) {
    const auto speaker_name = Field(t, "speaker").get<std::string>();
    const auto speaker = ParseSpeaker(speaker_name);
    if (!speaker) {
      throw DatasetError(DatasetError::Code::kMalformedRecord,
                         "unknown speaker '" + speaker_name + "'");
    }
    Utterance u;
    u.speaker = *speaker;
    u.text = Field(t, "text").get<std::string>();
    d.turns.push_back(std::move(u));
  }
  return d;
}

std::vector<Dialogue> ReadDialogues(std::istream& in) {
  std::vector<Dialogue> out;
  ForEachRecord(in,
                [&](const json& j, int) { out.push_back(DialogueFromJson(j)); });
  return out;
}

std::vector<Dialogue> ReadDialoguesFile(const std::string& path) {
  auto in = OpenOrThrow(path);
  return ReadDialogues(in);
}

nlohmann::ordered_json SectionToJson(const std::string& note_id,
                                     const NoteSection& section) {
  nlohmann::ordered_json j;
  j["note_id"] = note_id;
  j["header"] = section.header.name();
  j["body"] = section.body;
  j["span"] = {section.begin, section.end};
  return j;
}

nlohmann::ordered_json ConceptsToJson(
    const std::string& note_id, const std::vector<ConceptEntry>& concepts) {
  nlohmann::ordered_json j;
  j["id"] = note_id;
  j["concepts"] = nlohmann::ordered_json::array();
  for (const ConceptEntry& c : concepts) {
    nlohmann::ordered_json e;
    e["surface"] = c.surface;
    e["cui"] = c.cui;
    e["group"] = std::string(GroupName(c.group));
    j["concepts"].push_back(std::move(e));
  }
  return j;
}

std::vector<std::pair<Dialogue, Dialogue>> AlignById(
    const std::vector<Dialogue>& hyps, const std::vector<Dialogue>& refs) {
  std::map<std::string, const Dialogue*> by_id;
  for (const Dialogue& r : refs) by_id.emplace(r.note_id, &r);
  std::set<std::string> hyp_ids;
  std::vector<std::string> unmatched;
  std::vector<std::pair<Dialogue, Dialogue>> pairs;
  for (const Dialogue& h : hyps) {
    hyp_ids.insert(h.note_id);
    const auto it = by_id.find(h.note_id);
    if (it == by_id.end()) {
      unmatched.push_back(h.note_id);
    } else {
      pairs.emplace_back(h, *it->second);
    }
  }
  for (const Dialogue& r : refs) {
    if (!hyp_ids.count(r.note_id)) unmatched.push_back(r.note_id);
  }
  if (!unmatched.empty()) {
    throw DatasetError(DatasetError::Code::kIdMismatch,
                       "ids without a counterpart: " +
                           text::Join(unmatched, ", "),
                       0, unmatched);
  }
  return pairs;
}

ConfigTable ReadConfigTable(std::istream& in) {
  ConfigTable table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view trimmed = text::Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const std::size_t eq = trimmed.find('=');
    if (eq == std::string_view::npos) {
      throw DatasetError(DatasetError::Code::kConfig,
                         "config line " + std::to_string(line_no) +
                             ": expected key=value",
                         line_no);
    }
    table[std::string(text::Trim(trimmed.substr(0, eq)))] =
        std::string(text::Trim(trimmed.substr(eq + 1)));
  }
  return table;
}

ConfigTable ReadConfigFile(const std::string& path) {
  auto in = OpenOrThrow(path);
  return ReadConfigTable(in);
}

bool ApplyConfigValue(GenerationConfig& cfg, const std::string& key,
                      const std::string& value) {
  if (key == "max_rounds") cfg.max_rounds = ParseNumber<int>(key, value);
  else if (key == "keywords_per_turn") cfg.keywords_per_turn = ParseNumber<int>(key, value);
  else if (key == "max_context_tokens") cfg.max_context_tokens = ParseNumber<int>(key, value);
  else if (key == "context_fill_ratio") cfg.context_fill_ratio = ParseNumber<double>(key, value);
  else if (key == "mode") {
    try {
      cfg.mode = ParseMode(value);
    } catch (const Error&) {
      throw DatasetError(DatasetError::Code::kConfig,
                         "bad value '" + value + "' for 'mode'");
    }
  }
  else if (key == "similarity_threshold") cfg.similarity_threshold = ParseNumber<double>(key, value);
  else if (key == "concept_threshold") cfg.concept_threshold = ParseNumber<double>(key, value);
  else if (key == "header_line_cap") cfg.header_line_cap = ParseNumber<std::size_t>(key, value);
  else if (key == "chars_per_token") cfg.chars_per_token = ParseNumber<double>(key, value);
  else if (key == "temperature") cfg.temperature = ParseNumber<double>(key, value);
  else if (key == "doctor_reply_tokens") cfg.doctor_reply_tokens = ParseNumber<int>(key, value);
  else if (key == "patient_reply_tokens") cfg.patient_reply_tokens = ParseNumber<int>(key, value);
  else if (key == "polish_passes") cfg.polish_passes = ParseNumber<int>(key, value);
  else if (key == "llm_factuality_check") cfg.llm_factuality_check = ParseBool(key, value);
  else return false;
  return true;
}

std::string FormatConfig(const GenerationConfig& cfg) {
  std::ostringstream out;
  out << "max_rounds=" << cfg.max_rounds << "\n"
      << "keywords_per_turn=" << cfg.keywords_per_turn << "\n"
      << "max_context_tokens=" << cfg.max_context_tokens << "\n"
      << "context_fill_ratio=" << FormatDouble(cfg.context_fill_ratio) << "\n"
      << "mode=" << ModeName(cfg.mode) << "\n"
      << "similarity_threshold=" << FormatDouble(cfg.similarity_threshold) << "\n"
      << "concept_threshold=" << FormatDouble(cfg.concept_threshold) << "\n"
      << "header_line_cap=" << cfg.header_line_cap << "\n"
      << "chars_per_token=" << FormatDouble(cfg.chars_per_token) << "\n"
      << "temperature=" << FormatDouble(cfg.temperature) << "\n"
      << "doctor_reply_tokens=" << cfg.doctor_reply_tokens << "\n"
      << "patient_reply_tokens=" << cfg.patient_reply_tokens << "\n"
      << "polish_passes=" << cfg.polish_passes << "\n"
      << "llm_factuality_check=" << (cfg.llm_factuality_check ? "true" : "false")
      << "\n";
  return out.str();
}

}  // namespace dialogforge
