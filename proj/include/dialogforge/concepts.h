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

// Dictionary-based medical concept tagging.
//
// A Lexicon maps surface terms to a concept identifier (CUI) and a coarse
// semantic group. Extraction walks the word tokens of a text left to right
// and, at each position, tries the longest token window first. A window
// matches an entry when its token sequence equals the entry's, or when the
// token-set Jaccard similarity reaches the approximate-match threshold.
// Matched windows are consumed, so mentions never overlap.

#ifndef DIALOGFORGE_CONCEPTS_H_
#define DIALOGFORGE_CONCEPTS_H_

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dialogforge/model.h"

namespace dialogforge {

class Lexicon {
 public:
  struct Entry {
    ConceptEntry term;
    std::vector<std::string> tokens;
  };

  /// Adds a term. Returns false (and records a warning) when the normalized
  /// surface is already present; the first occurrence wins.
  bool Add(std::string_view surface, std::string_view cui,
           SemanticGroup group);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t max_term_tokens() const { return max_term_tokens_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Index of the entry whose token sequence equals `key` (tokens joined by
  /// a single space), or -1.
  long FindExact(const std::string& key) const;

  /// Entries sharing at least one token with `token`, in insertion order.
  const std::vector<std::size_t>& WithToken(const std::string& token) const;

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> by_key_;
  std::unordered_map<std::string, std::size_t> by_surface_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_token_;
  std::size_t max_term_tokens_ = 1;
  std::vector<std::string> warnings_;
};

/// Reads `surface<TAB>cui<TAB>group` records. Blank lines and lines starting
/// with '#' are skipped. Throws LexiconError(kMalformedRecord, line) on a
/// record without exactly three fields or with an empty surface or CUI.
Lexicon LoadLexicon(std::istream& in);
Lexicon LoadLexiconFile(const std::string& path);

/// One matched window in the source text.
struct ConceptMention {
  std::size_t entry = 0;        // index into Lexicon::entries()
  std::size_t token_begin = 0;  // [token_begin, token_end) word tokens
  std::size_t token_end = 0;
  std::size_t char_begin = 0;   // byte range in the source text
  std::size_t char_end = 0;
  bool exact = true;
};

/// All mentions, left to right, before CUI de-duplication. A mention never
/// spans a line break.
std::vector<ConceptMention> FindMentions(std::string_view text,
                                         const Lexicon& lexicon,
                                         double approx_threshold);

/// Concepts in order of first occurrence, one per CUI.
std::vector<ConceptEntry> ExtractConcepts(std::string_view text,
                                          const Lexicon& lexicon,
                                          double approx_threshold);

/// Keeps disease, drug, device and procedure concepts, in order.
std::vector<ConceptEntry> FilterSemanticGroups(
    const std::vector<ConceptEntry>& concepts);

bool IsClinicallyImportant(SemanticGroup g);

/// Filtered concepts of the section body, all uncovered.
Checklist BuildChecklist(const NoteSection& section, const Lexicon& lexicon,
                         const GenerationConfig& cfg);

/// True if `phrase` occurs in `text` at word boundaries, ignoring case.
bool ContainsPhrase(std::string_view text, std::string_view phrase);

/// Marks every uncovered entry whose CUI is extracted from the utterances or
/// whose surface occurs in them. Returns the number of newly covered entries.
std::size_t MarkCovered(Checklist& checklist,
                        const std::vector<Utterance>& utterances,
                        const Lexicon& lexicon, const GenerationConfig& cfg);

}  // namespace dialogforge

#endif  // DIALOGFORGE_CONCEPTS_H_
