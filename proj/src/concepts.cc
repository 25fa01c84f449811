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

#include "dialogforge/concepts.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <unordered_set>

#include "dialogforge/error.h"
#include "dialogforge/text.h"

namespace dialogforge {

namespace {

double TokenSetJaccard(const std::vector<std::string>& a,
                       const std::vector<std::string>& b) {
  const std::set<std::string> sa(a.begin(), a.end());
  const std::set<std::string> sb(b.begin(), b.end());
  if (sa.empty() && sb.empty()) return 0.0;
  std::size_t inter = 0;
  for (const auto& t : sa) inter += sb.count(t);
  const std::size_t uni = sa.size() + sb.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

}  // namespace

bool Lexicon::Add(std::string_view surface, std::string_view cui,
                  SemanticGroup group) {
  std::string norm = text::NormalizeSpaces(surface);
  std::vector<std::string> tokens = text::Words(norm);
  if (norm.empty() || tokens.empty() || text::IsBlank(cui)) {
    throw LexiconError(LexiconError::Code::kMalformedRecord,
                       "lexicon entry needs a non-empty surface and CUI");
  }
  if (by_surface_.count(norm)) {
    warnings_.push_back("duplicate surface '" + norm + "' ignored");
    return false;
  }
  std::string key = text::Join(tokens, " ");
  const std::size_t index = entries_.size();
  by_surface_.emplace(norm, index);
  // Surfaces that differ only in punctuation ("mri-scan" vs "mri scan")
  // share a token key; the first one keeps it.
  by_key_.emplace(key, index);
  std::set<std::string> seen;
  for (const auto& t : tokens) {
    if (seen.insert(t).second) by_token_[t].push_back(index);
  }
  max_term_tokens_ = std::max(max_term_tokens_, tokens.size());
  entries_.push_back(Entry{
      ConceptEntry{std::move(norm), std::string(text::Trim(cui)), group},
      std::move(tokens)});
  return true;
}

long Lexicon::FindExact(const std::string& key) const {
  const auto it = by_key_.find(key);
  return it == by_key_.end() ? -1 : static_cast<long>(it->second);
}

const std::vector<std::size_t>& Lexicon::WithToken(
    const std::string& token) const {
  static const std::vector<std::size_t> kNone;
  const auto it = by_token_.find(token);
  return it == by_token_.end() ? kNone : it->second;
}

Lexicon LoadLexicon(std::istream& in) {
  Lexicon lexicon;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::IsBlank(line) || text::Trim(line).front() == '#') continue;
    const auto fields = SplitTabs(line);
    if (fields.size() != 3) {
      throw LexiconError(LexiconError::Code::kMalformedRecord,
                         "line " + std::to_string(line_no) + ": expected 3 "
                         "tab-separated fields, got " +
                             std::to_string(fields.size()),
                         line_no);
    }
    try {
      lexicon.Add(fields[0], fields[1], ParseGroup(fields[2]));
    } catch (const LexiconError& e) {
      throw LexiconError(LexiconError::Code::kMalformedRecord,
                         "line " + std::to_string(line_no) + ": " + e.what(),
                         line_no);
    }
  }
  return lexicon;
}

Lexicon LoadLexiconFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw LexiconError(LexiconError::Code::kIo,
                       "cannot open lexicon file '" + path + "'");
  }
  return LoadLexicon(in);
}

std::vector<ConceptMention> FindMentions(std::string_view text,
                                         const Lexicon& lexicon,
                                         double approx_threshold) {
  std::vector<ConceptMention> mentions;
  if (lexicon.empty()) return mentions;
  const auto tokens = text::WordTokens(text);
  const std::size_t n = tokens.size();
  // Mentions never span a line break.
  std::vector<std::size_t> line_end(n);
  for (std::size_t k = n; k-- > 0;) {
    const bool breaks =
        k + 1 == n ||
        text.substr(tokens[k].end, tokens[k + 1].begin - tokens[k].end)
                .find('\n') != std::string_view::npos;
    line_end[k] = breaks ? k + 1 : line_end[k + 1];
  }
  std::size_t i = 0;
  while (i < n) {
    bool matched = false;
    const std::size_t longest =
        std::min(lexicon.max_term_tokens(), line_end[i] - i);
    for (std::size_t len = longest; len >= 1 && !matched; --len) {
      std::vector<std::string> window;
      window.reserve(len);
      for (std::size_t k = i; k < i + len; ++k) window.push_back(tokens[k].text);

      long best = lexicon.FindExact(text::Join(window, " "));
      bool exact = best >= 0;
      if (!exact) {
        std::set<std::size_t> candidates;
        for (const auto& t : window) {
          const auto& ids = lexicon.WithToken(t);
          candidates.insert(ids.begin(), ids.end());
        }
        double best_sim = -1.0;
        for (std::size_t id : candidates) {  // ascending = insertion order
          const double sim =
              TokenSetJaccard(window, lexicon.entries()[id].tokens);
          if (sim >= approx_threshold && sim > best_sim) {
            best_sim = sim;
            best = static_cast<long>(id);
          }
        }
      }
      if (best >= 0) {
        mentions.push_back(ConceptMention{static_cast<std::size_t>(best), i,
                                          i + len, tokens[i].begin,
                                          tokens[i + len - 1].end, exact});
        i += len;
        matched = true;
      }
    }
    if (!matched) ++i;
  }
  return mentions;
}

std::vector<ConceptEntry> ExtractConcepts(std::string_view text,
                                          const Lexicon& lexicon,
                                          double approx_threshold) {
  std::vector<ConceptEntry> out;
  std::unordered_set<std::string> seen;
  for (const auto& m : FindMentions(text, lexicon, approx_threshold)) {
    const ConceptEntry& c = lexicon.entries()[m.entry].term;
    if (seen.insert(c.cui).second) out.push_back(c);
  }
  return out;
}

bool IsClinicallyImportant(SemanticGroup g) {
  return g == SemanticGroup::kDisease || g == SemanticGroup::kDrug ||
         g == SemanticGroup::kDevice || g == SemanticGroup::kProcedure;
}

std::vector<ConceptEntry> FilterSemanticGroups(
    const std::vector<ConceptEntry>& concepts) {
  std::vector<ConceptEntry> out;
  std::copy_if(concepts.begin(), concepts.end(), std::back_inserter(out),
               [](const ConceptEntry& c) { return IsClinicallyImportant(c.group); });
  return out;
}

Checklist BuildChecklist(const NoteSection& section, const Lexicon& lexicon,
                         const GenerationConfig& cfg) {
  return Checklist(FilterSemanticGroups(
      ExtractConcepts(section.body, lexicon, cfg.concept_threshold)));
}

bool ContainsPhrase(std::string_view text, std::string_view phrase) {
  const auto needle = text::Words(phrase);
  if (needle.empty()) return false;
  const auto hay = text::Words(text);
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) !=
         hay.end();
}

std::size_t MarkCovered(Checklist& checklist,
                        const std::vector<Utterance>& utterances,
                        const Lexicon& lexicon, const GenerationConfig& cfg) {
  if (utterances.empty() || checklist.uncovered_count() == 0) return 0;
  std::string joined;
  for (const auto& u : utterances) {
    joined += u.text;
    joined += '\n';
  }
  std::unordered_set<std::string> cuis;
  for (const auto& c : ExtractConcepts(joined, lexicon, cfg.concept_threshold)) {
    cuis.insert(c.cui);
  }
  std::size_t flipped = 0;
  for (std::size_t i : checklist.uncovered_indices()) {
    const ConceptEntry& e = checklist.entries()[i];
    bool hit = cuis.count(e.cui) > 0;
    for (std::size_t u = 0; !hit && u < utterances.size(); ++u) {
      hit = ContainsPhrase(utterances[u].text, e.surface);
    }
    if (hit && checklist.mark(i)) ++flipped;
  }
  return flipped;
}

}  // namespace dialogforge
