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

#include "dialogforge/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <map>
#include <set>
#include <sstream>

#include "dialogforge/error.h"
#include "dialogforge/text.h"
#include "dialogforge/transcript.h"
#include "json.hpp"

namespace dialogforge {

namespace {

using NgramCounts = std::map<std::vector<std::string>, int>;

NgramCounts CountNgrams(const Tokens& tokens, int n) {
  NgramCounts counts;
  const auto len = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + len <= tokens.size(); ++i) {
    ++counts[Tokens(tokens.begin() + i, tokens.begin() + i + len)];
  }
  return counts;
}

int Total(const NgramCounts& c) {
  int total = 0;
  for (const auto& [_, k] : c) total += k;
  return total;
}

double F1(double matches, double hyp_total, double ref_total) {
  if (hyp_total <= 0 || ref_total <= 0 || matches <= 0) return 0.0;
  return HarmonicMean(matches / hyp_total, matches / ref_total);
}

// Suffix table: t[i][j] = LCS length of a[i:] and b[j:].
std::vector<std::vector<std::size_t>> SuffixLcs(const Tokens& a,
                                                const Tokens& b) {
  std::vector<std::vector<std::size_t>> t(
      a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
  for (std::size_t i = a.size(); i-- > 0;) {
    for (std::size_t j = b.size(); j-- > 0;) {
      t[i][j] = a[i] == b[j] ? t[i + 1][j + 1] + 1
                             : std::max(t[i + 1][j], t[i][j + 1]);
    }
  }
  return t;
}

// Union-LCS hits of each line in `measured` against all lines of `other`.
std::size_t UnionHits(const std::vector<Tokens>& measured,
                      const std::vector<Tokens>& other) {
  std::size_t hits = 0;
  for (const Tokens& line : measured) {
    std::set<std::size_t> positions;
    for (const Tokens& o : other) {
      for (std::size_t p : LcsPositions(line, o)) positions.insert(p);
    }
    hits += positions.size();
  }
  return hits;
}

struct PairScores {
  double r1 = 0, r2 = 0, rl = 0, rlsum = 0, bleu = 0;
  ConceptScores concepts;
};

PairScores ScorePair(const DialoguePair& pair, const Lexicon& lexicon,
                     const GenerationConfig& cfg) {
  const std::string hyp_text = FormatTranscript(pair.first.turns);
  const std::string ref_text = FormatTranscript(pair.second.turns);
  const Tokens hyp = Tokenize(hyp_text);
  const Tokens ref = Tokenize(ref_text);
  PairScores s;
  s.r1 = RougeN(hyp, ref, 1);
  s.r2 = RougeN(hyp, ref, 2);
  s.rl = RougeL(hyp, ref);
  s.rlsum = RougeLsum(text::SplitLines(hyp_text), text::SplitLines(ref_text));
  s.bleu = Bleu(hyp, {ref});
  s.concepts = ComputeConceptScores(hyp_text, ref_text, lexicon, cfg);
  return s;
}

}  // namespace

Tokens Tokenize(std::string_view text, bool stem) {
  Tokens tokens = text::Words(text);
  if (stem) {
    for (auto& t : tokens) t = PorterStem(t);
  }
  return tokens;
}

double RougeN(const Tokens& hyp, const Tokens& ref, int n) {
  if (n < 1) {
    throw MetricError(MetricError::Code::kInvalidArgument,
                      "ROUGE-N needs n >= 1");
  }
  const NgramCounts h = CountNgrams(hyp, n);
  const NgramCounts r = CountNgrams(ref, n);
  int matches = 0;
  for (const auto& [gram, count] : h) {
    const auto it = r.find(gram);
    if (it != r.end()) matches += std::min(count, it->second);
  }
  return F1(matches, Total(h), Total(r));
}

std::size_t LcsLength(const Tokens& a, const Tokens& b) {
  if (a.empty() || b.empty()) return 0;
  // Two-row forward table.
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::vector<std::size_t> LcsPositions(const Tokens& a, const Tokens& b) {
  std::vector<std::size_t> out;
  if (a.empty() || b.empty()) return out;
  const auto t = SuffixLcs(a, b);
  std::size_t i = 0, j = 0, left = t[0][0];
  // The earliest usable position in `a` first, then the earliest partner in
  // `b`, which leaves the most room for the rest.
  while (left > 0) {
    bool taken = false;
    for (std::size_t ii = i; ii < a.size() && !taken; ++ii) {
      for (std::size_t jj = j; jj < b.size(); ++jj) {
        if (a[ii] == b[jj] && t[ii + 1][jj + 1] + 1 == left) {
          out.push_back(ii);
          i = ii + 1;
          j = jj + 1;
          --left;
          taken = true;
          break;
        }
      }
    }
    if (!taken) break;  // unreachable with a consistent table
  }
  return out;
}

double RougeL(const Tokens& hyp, const Tokens& ref) {
  return F1(static_cast<double>(LcsLength(hyp, ref)),
            static_cast<double>(hyp.size()), static_cast<double>(ref.size()));
}

double RougeLsum(const std::vector<std::string>& hyp_lines,
                 const std::vector<std::string>& ref_lines, bool stem) {
  std::vector<Tokens> hyp, ref;
  std::size_t hyp_total = 0, ref_total = 0;
  for (const auto& l : hyp_lines) {
    hyp.push_back(Tokenize(l, stem));
    hyp_total += hyp.back().size();
  }
  for (const auto& l : ref_lines) {
    ref.push_back(Tokenize(l, stem));
    ref_total += ref.back().size();
  }
  if (hyp_total == 0 || ref_total == 0) return 0.0;
  const double recall_hits = static_cast<double>(UnionHits(ref, hyp));
  const double precision_hits = static_cast<double>(UnionHits(hyp, ref));
  if (recall_hits == 0 || precision_hits == 0) return 0.0;
  return HarmonicMean(precision_hits / static_cast<double>(hyp_total),
                      recall_hits / static_cast<double>(ref_total));
}

double Bleu(const Tokens& hyp, const std::vector<Tokens>& refs, int max_n) {
  if (refs.empty()) {
    throw MetricError(MetricError::Code::kInvalidArgument,
                      "BLEU needs at least one reference");
  }
  if (max_n < 1) {
    throw MetricError(MetricError::Code::kInvalidArgument,
                      "BLEU needs max_n >= 1");
  }
  if (hyp.empty()) return 0.0;

  const int orders = std::min<int>(max_n, static_cast<int>(hyp.size()));
  double log_sum = 0.0;
  for (int n = 1; n <= orders; ++n) {
    const NgramCounts h = CountNgrams(hyp, n);
    NgramCounts max_ref;
    for (const Tokens& r : refs) {
      for (const auto& [gram, count] : CountNgrams(r, n)) {
        int& slot = max_ref[gram];
        slot = std::max(slot, count);
      }
    }
    int matches = 0;
    for (const auto& [gram, count] : h) {
      const auto it = max_ref.find(gram);
      if (it != max_ref.end()) matches += std::min(count, it->second);
    }
    const double total = Total(h);
    const double p = matches > 0 ? matches / total : 1.0 / (2.0 * total);
    log_sum += std::log(p);
  }
  const double precision = std::exp(log_sum / orders);

  const auto h_len = static_cast<double>(hyp.size());
  double r_len = static_cast<double>(refs.front().size());
  for (const Tokens& r : refs) {
    const auto len = static_cast<double>(r.size());
    const double d = std::abs(len - h_len), best = std::abs(r_len - h_len);
    if (d < best || (d == best && len < r_len)) r_len = len;
  }
  const double bp = h_len < r_len ? std::exp(1.0 - r_len / h_len) : 1.0;
  return precision * bp;
}

double SelfBleu(const std::vector<Dialogue>& corpus) {
  if (corpus.empty()) {
    throw MetricError(MetricError::Code::kTooFewUnits,
                      "Self-BLEU needs at least one dialogue");
  }
  double sum = 0.0;
  for (const Dialogue& d : corpus) {
    if (d.turns.size() < 2) {
      throw MetricError(MetricError::Code::kTooFewUnits,
                        "Self-BLEU needs two utterances in dialogue '" +
                            d.note_id + "'");
    }
    std::vector<Tokens> units;
    for (const Utterance& u : d.turns) units.push_back(Tokenize(u.text));
    double dialogue_sum = 0.0;
    for (std::size_t i = 0; i < units.size(); ++i) {
      std::vector<Tokens> others;
      for (std::size_t j = 0; j < units.size(); ++j) {
        if (j != i) others.push_back(units[j]);
      }
      dialogue_sum += Bleu(units[i], others);
    }
    sum += dialogue_sum / static_cast<double>(units.size());
  }
  return sum / static_cast<double>(corpus.size());
}

ConceptScores ComputeConceptScores(std::string_view hyp_text,
                                   std::string_view ref_text,
                                   const Lexicon& lexicon,
                                   const GenerationConfig& cfg) {
  auto cuis = [&](std::string_view t) {
    std::set<std::string> out;
    for (const auto& e : FilterSemanticGroups(
             ExtractConcepts(t, lexicon, cfg.concept_threshold))) {
      out.insert(e.cui);
    }
    return out;
  };
  const auto h = cuis(hyp_text);
  const auto r = cuis(ref_text);
  std::size_t common = 0;
  for (const auto& c : h) common += r.count(c);
  ConceptScores s;
  if (!r.empty()) s.recall = static_cast<double>(common) / r.size();
  if (!h.empty()) s.precision = static_cast<double>(common) / h.size();
  s.f1 = HarmonicMean(s.recall, s.precision);
  return s;
}

EvalReport EvaluateCorpus(const std::vector<DialoguePair>& pairs,
                          const Lexicon& lexicon, const GenerationConfig& cfg,
                          unsigned workers) {
  if (pairs.empty()) {
    throw MetricError(MetricError::Code::kEmptyCorpus,
                      "cannot evaluate an empty corpus");
  }
  std::vector<PairScores> scores(pairs.size());
  const std::size_t lanes =
      std::clamp<std::size_t>(workers, 1, pairs.size());
  std::vector<std::future<void>> jobs;
  for (std::size_t lane = 0; lane < lanes; ++lane) {
    jobs.push_back(std::async(std::launch::async, [&, lane] {
      for (std::size_t i = lane; i < pairs.size(); i += lanes) {
        scores[i] = ScorePair(pairs[i], lexicon, cfg);
      }
    }));
  }
  for (auto& j : jobs) j.get();

  EvalReport report;
  report.pairs = pairs.size();
  std::vector<Dialogue> sbleu_corpus;
  double turns = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const PairScores& s = scores[i];
    report.r1 += s.r1;
    report.r2 += s.r2;
    report.rl += s.rl;
    report.rlsum += s.rlsum;
    report.bleu += s.bleu;
    report.concept_recall += s.concepts.recall;
    report.concept_precision += s.concepts.precision;
    report.concept_f1 += s.concepts.f1;
    turns += static_cast<double>(pairs[i].first.turns.size());
    if (pairs[i].first.turns.size() >= 2) sbleu_corpus.push_back(pairs[i].first);
  }
  const auto n = static_cast<double>(pairs.size());
  for (double* field : {&report.r1, &report.r2, &report.rl, &report.rlsum,
                        &report.bleu, &report.concept_recall,
                        &report.concept_precision, &report.concept_f1}) {
    *field /= n;
  }
  report.len = turns / n;
  report.sbleu = sbleu_corpus.empty() ? 0.0 : SelfBleu(sbleu_corpus);
  return report;
}

std::string ReportJson(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["r1"] = report.r1;
  j["r2"] = report.r2;
  j["rl"] = report.rl;
  j["rlsum"] = report.rlsum;
  j["bleu"] = report.bleu;
  j["sbleu"] = report.sbleu;
  j["concept_recall"] = report.concept_recall;
  j["concept_precision"] = report.concept_precision;
  j["concept_f1"] = report.concept_f1;
  j["len"] = report.len;
  j["pairs"] = report.pairs;
  return j.dump(2);
}

std::string ReportTable(const EvalReport& report) {
  const char* heads[] = {"R-1", "R-2", "R-L", "R-L-Sum",
                         "C-R", "BLEU", "SBLEU", "Len"};
  const double values[] = {report.r1,   report.r2,
                           report.rl,   report.rlsum,
                           report.concept_recall, report.bleu,
                           report.sbleu, report.len};
  std::ostringstream head, row;
  char cell[32];
  for (int i = 0; i < 8; ++i) {
    std::snprintf(cell, sizeof cell, i == 7 ? "%9.2f" : "%9.4f", values[i]);
    head << (i ? " " : "") << std::string(9 - std::string(heads[i]).size(), ' ')
         << heads[i];
    row << (i ? " " : "") << cell;
  }
  return head.str() + "\n" + row.str() + "\n";
}

}  // namespace dialogforge
