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

// Automatic evaluation: ROUGE-1/2/L/Lsum F1, BLEU, Self-BLEU and concept
// overlap. All scores are fractions in [0, 1].

#ifndef DIALOGFORGE_METRICS_H_
#define DIALOGFORGE_METRICS_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dialogforge/concepts.h"
#include "dialogforge/model.h"

namespace dialogforge {

using Tokens = std::vector<std::string>;

/// Lowercased alphanumeric runs. Porter stemming is applied when `stem` is
/// set.
Tokens Tokenize(std::string_view text, bool stem = false);

/// Porter (1980) suffix stripping for lowercase ASCII words; other words are
/// returned unchanged.
std::string PorterStem(std::string_view word);

/// Clipped n-gram overlap F1. 0 when either side has no n-grams.
double RougeN(const Tokens& hyp, const Tokens& ref, int n);

std::size_t LcsLength(const Tokens& a, const Tokens& b);

/// Positions in `a` of the LCS of `a` and `b` whose position sequence is
/// lexicographically smallest.
std::vector<std::size_t> LcsPositions(const Tokens& a, const Tokens& b);

double RougeL(const Tokens& hyp, const Tokens& ref);

/// Summary-level ROUGE-L over lines. For each reference line the hit
/// positions of its LCS with every hypothesis line are unioned; recall sums
/// these over reference lines. Precision is built the same way from the
/// hypothesis side.
double RougeLsum(const std::vector<std::string>& hyp_lines,
                 const std::vector<std::string>& ref_lines, bool stem = false);

/// Corpus-free sentence BLEU with uniform weights over orders 1..max_n.
/// A zero precision p_n becomes 1/(2 H_n), H_n being the hypothesis n-gram
/// count; orders longer than the hypothesis are left out. Brevity penalty
/// uses the closest reference length, shorter on ties.
double Bleu(const Tokens& hyp, const std::vector<Tokens>& refs, int max_n = 4);

/// Mean over dialogues of the mean BLEU of each utterance against the other
/// utterances of its dialogue. Throws MetricError(kTooFewUnits) for an empty
/// corpus or a dialogue with fewer than two utterances.
double SelfBleu(const std::vector<Dialogue>& corpus);

struct ConceptScores {
  double recall = 0;
  double precision = 0;
  double f1 = 0;
};

/// Overlap of the filtered CUI sets of the two texts.
ConceptScores ComputeConceptScores(std::string_view hyp_text,
                                   std::string_view ref_text,
                                   const Lexicon& lexicon,
                                   const GenerationConfig& cfg);

using DialoguePair = std::pair<Dialogue, Dialogue>;  // (hypothesis, reference)

/// Macro average of the per-pair scores over dialogues rendered one
/// "Speaker: text" line per utterance. Self-BLEU covers the hypotheses with at
/// least two utterances and is 0 when there are none. Throws
/// MetricError(kEmptyCorpus) on an empty list.
EvalReport EvaluateCorpus(const std::vector<DialoguePair>& pairs,
                          const Lexicon& lexicon, const GenerationConfig& cfg,
                          unsigned workers = 1);

std::string ReportJson(const EvalReport& report);

/// Aligned plain-text table: R-1 R-2 R-L R-L-Sum C-R BLEU SBLEU Len.
std::string ReportTable(const EvalReport& report);

}  // namespace dialogforge

#endif  // DIALOGFORGE_METRICS_H_
