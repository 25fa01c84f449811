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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any of them fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dialogforge/cli.h"
#include "dialogforge/dataset.h"
#include "dialogforge/error.h"
#include "dialogforge/http_backend.h"
#include "dialogforge/metrics.h"
#include "dialogforge/mock_backend.h"
#include "dialogforge/orchestrator.h"
#include "dialogforge/refiner.h"
#include "dialogforge/segmenter.h"
#include "json.hpp"
#include "oracle.h"
#include "stub_server.h"
#include "test_util.h"

namespace dialogforge {
namespace {

using testing::Fixture;
using testing::FixtureLexicon;

// Collects failures for one criterion.
class Check {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  void Near(double got, double want, const std::string& what, double tol = 1e-6) {
    std::ostringstream s;
    s.precision(12);
    s << what << ": got " << got << " want " << want;
    Expect(std::fabs(got - want) <= tol, s.str());
  }
  bool ok() const { return failed_ == 0; }
  std::string summary() const {
    std::string out;
    for (const auto& f : failures_) out += "\n    " + f;
    if (failed_ > static_cast<int>(failures_.size())) {
      out += "\n    ... " + std::to_string(failed_ - failures_.size()) + " more";
    }
    return out;
  }
  std::string note;

 private:
  std::vector<std::string> failures_;
  int failed_ = 0;
};

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

Dialogue Alternating(const std::vector<std::string>& texts) {
  Dialogue d;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    d.turns.push_back({i % 2 ? Speaker::kPatient : Speaker::kDoctor, texts[i]});
  }
  return d;
}

oracle::Turns ToTurns(const Dialogue& d) {
  oracle::Turns out;
  for (const auto& u : d.turns) out.emplace_back(std::string(SpeakerLabel(u.speaker)), u.text);
  return out;
}

int RunArgs(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int code = RunCli(args, o, e);
  if (out) *out = o.str();
  return code;
}

void MetricOracle(Check& c) {
  const std::vector<std::string> vocab = {"the", "a",     "cat", "sat", "on", "mat",
                                          "dog", "pain",  "chest", "of", "and", "x",
                                          "aspirin", "asthma", "cough", "fever"};
  std::mt19937 rng(2026);
  std::uniform_int_distribution<int> len(1, 30), pick(0, static_cast<int>(vocab.size()) - 1),
      brk(0, 6);
  auto text = [&] {
    std::string s;
    for (int i = len(rng); i > 0; --i) s += (s.empty() ? "" : brk(rng) ? " " : "\n") + vocab[pick(rng)];
    return s;
  };
  const auto terms = oracle::ReadTerms(Fixture("lexicon.tsv"));
  const GenerationConfig cfg;
  for (int trial = 0; trial < 50; ++trial) {
    const std::string hs = text(), rs = text();
    const Tokens h = Tokenize(hs), r = Tokenize(rs);
    const auto oh = oracle::Split(hs), orf = oracle::Split(rs);
    const std::string tag = "pair " + std::to_string(trial);
    c.Near(RougeN(h, r, 1), oracle::RougeN(oh, orf, 1), tag + " rouge1");
    c.Near(RougeN(h, r, 2), oracle::RougeN(oh, orf, 2), tag + " rouge2");
    c.Near(RougeL(h, r), oracle::RougeL(oh, orf), tag + " rougeL");
    c.Near(RougeLsum(Lines(hs), Lines(rs)), oracle::RougeLsum(hs, rs), tag + " rougeLsum");
    c.Near(Bleu(h, {r}), oracle::Bleu(oh, {orf}), tag + " bleu");
    const auto got = ComputeConceptScores(hs, rs, FixtureLexicon(), cfg);
    const auto want = oracle::ConceptOverlap(hs, rs, terms, cfg.concept_threshold);
    c.Near(got.recall, want.recall, tag + " concept recall");
    c.Near(got.precision, want.precision, tag + " concept precision");
    c.Near(got.f1, want.f1, tag + " concept f1");

    std::vector<Dialogue> corpus;
    std::vector<std::vector<std::string>> plain;
    for (int d = 0; d < 2; ++d) {
      std::vector<std::string> utts;
      for (int u = 0; u < 2 + trial % 3; ++u) utts.push_back(text());
      corpus.push_back(Alternating(utts));
      plain.push_back(utts);
    }
    c.Near(SelfBleu(corpus), oracle::SelfBleu(plain), tag + " self-bleu");
  }

  // Hand-computed values.
  c.Near(Bleu(Tokenize("the cat sat on the mat"), {Tokenize("the cat sat on a mat")}),
         0.537284965911771, "bleu worked example");
  c.Near(Bleu(Tokenize("a b"), {Tokenize("a b c d")}), std::exp(-1.0), "brevity penalty");
  c.Near(RougeN(Tokenize("the the the"), Tokenize("the cat"), 1), 0.4, "clipped rouge1");
  c.Near(SelfBleu({Alternating({"a b", "c d"})}), std::sqrt(0.125), "self-bleu floor");
  const auto s = ComputeConceptScores("You have diabetes and take aspirin.",
                                      "Diabetes, hypertension, aspirin and an mri-scan next week.",
                                      FixtureLexicon(), cfg);
  c.Near(s.recall, 0.5, "concept recall example");
  c.Near(s.precision, 1.0, "concept precision example");

  const auto pairs = AlignById(ReadDialoguesFile(Fixture("eval_hyp.jsonl")),
                               ReadDialoguesFile(Fixture("eval_ref.jsonl")));
  std::vector<std::pair<oracle::Turns, oracle::Turns>> plain;
  for (const auto& [h, r] : pairs) plain.emplace_back(ToTurns(h), ToTurns(r));
  const auto want = oracle::Evaluate(plain, terms, cfg.concept_threshold);
  const EvalReport got = EvaluateCorpus(pairs, FixtureLexicon(), cfg);
  c.Near(got.r1, want.r1, "corpus r1");
  c.Near(got.r2, want.r2, "corpus r2");
  c.Near(got.rl, want.rl, "corpus rl");
  c.Near(got.rlsum, want.rlsum, "corpus rlsum");
  c.Near(got.bleu, want.bleu, "corpus bleu");
  c.Near(got.sbleu, want.sbleu, "corpus sbleu");
  c.Near(got.concept_recall, want.cr, "corpus concept recall");
  c.note = "50 random pairs + fixtures";
}

void Identities(Check& c) {
  std::mt19937 rng(7);
  const std::vector<std::string> left = {"chest", "pain", "since", "monday", "worse", "walking"};
  const std::vector<std::string> right = {"blood", "sugar", "stable", "on", "metformin"};
  std::uniform_int_distribution<int> len(2, 30);
  for (int trial = 0; trial < 100; ++trial) {
    std::string a, b;
    for (int i = len(rng); i > 0; --i) a += left[rng() % left.size()] + (i % 5 ? " " : "\n");
    for (int i = len(rng); i > 0; --i) b += right[rng() % right.size()] + " ";
    const Tokens ta = Tokenize(a), tb = Tokenize(b);
    const std::string tag = "trial " + std::to_string(trial);
    c.Expect(RougeN(ta, ta, 1) == 1.0 && RougeN(ta, ta, 2) == 1.0, tag + " rougeN identity");
    c.Expect(RougeL(ta, ta) == 1.0 && RougeLsum(Lines(a), Lines(a)) == 1.0,
             tag + " rougeL identity");
    c.Expect(Bleu(ta, {ta}) == 1.0, tag + " bleu identity");
    c.Expect(RougeN(ta, tb, 1) == 0.0 && RougeN(ta, tb, 2) == 0.0 && RougeL(ta, tb) == 0.0 &&
                 RougeLsum(Lines(a), Lines(b)) == 0.0,
             tag + " disjoint rouge");
  }
  c.note = "100 identical and 100 disjoint pairs";
}

void SegmenterRoundTrip(Check& c) {
  std::ifstream in(Fixture("segmenter_corpus.jsonl"));
  int notes = 0;
  for (std::string line; std::getline(in, line);) {
    const auto j = nlohmann::json::parse(line);
    const ClinicalNote note{j["id"], j["text"]};
    std::string joined;
    for (const auto& s : SegmentNote(note, 0.85)) joined += s.header_line + s.body;
    c.Expect(joined == note.text, note.id + " round trip");
    ++notes;
  }
  c.Expect(notes == 20, "corpus has " + std::to_string(notes) + " notes");
  const auto m = MatchHeader("past medical hist", 0.85);
  c.Expect(m && m->canonical.name() == "past medical history", "fuzzy header match");
  c.note = std::to_string(notes) + " notes";
}

// Terms with a single surface per CUI and no surface inside another one.
const std::vector<std::string> kCurated = {
    "hypertension", "asthma",     "pneumonia",    "chest pain",   "cough",
    "fever",        "headache",   "migraine",     "copd",         "gerd",
    "osteoarthritis", "aspirin",  "metformin",    "lisinopril",   "insulin",
    "atorvastatin", "ibuprofen",  "amoxicillin",  "albuterol",    "warfarin",
    "sertraline",   "omeprazole", "nebulizer",    "pacemaker",    "crutches",
    "colonoscopy",  "appendectomy", "echocardiogram", "electrocardiogram",
};

std::vector<Dialogue> LoopCoverage(Check& c) {
  std::mt19937 rng(42);
  std::uniform_int_distribution<int> kdist(1, 12);
  std::vector<Dialogue> produced;
  PromptSet prompts;
  for (int trial = 0; trial < 100; ++trial) {
    const int k = kdist(rng);
    std::vector<std::string> terms = kCurated;
    std::shuffle(terms.begin(), terms.end(), rng);
    terms.resize(static_cast<std::size_t>(k));
    NoteSection sec;
    sec.header = SectionHeader::FromName("history of present illness");
    sec.header_line = "HISTORY OF PRESENT ILLNESS:\n";
    for (const auto& t : terms) sec.body += "Noted " + t + " today.\n";

    GenerationConfig cfg;
    cfg.keywords_per_turn = 4;
    cfg.max_rounds = (k + 3) / 4;
    cfg.llm_factuality_check = false;
    MockBackend mock;
    const PipelineContext ctx{FixtureLexicon(), mock, prompts, cfg, {}};
    const Dialogue d = RunSectionLoop(sec, ctx);
    const std::string tag = "trial " + std::to_string(trial) + " k=" + std::to_string(k);
    c.Expect(d.meta.keywords.size() == static_cast<std::size_t>(k), tag + " checklist size");
    c.Expect(d.meta.missing.empty(), tag + " coverage");
    c.Expect(d.meta.rounds == cfg.max_rounds,
             tag + " rounds " + std::to_string(d.meta.rounds));
    produced.push_back(d);
  }
  c.note = "100 sections";
  return produced;
}

void CapAndAlternation(Check& c, const std::vector<Dialogue>& dialogues) {
  for (std::size_t i = 0; i < dialogues.size(); ++i) {
    const Dialogue& d = dialogues[i];
    const std::string tag = "dialogue " + std::to_string(i);
    c.Expect(d.provenance == Provenance::kRaw, tag + " raw provenance");
    c.Expect(d.alternates(), tag + " alternation");
    std::size_t doctor_turns = 0;
    for (const auto& u : d.turns) doctor_turns += u.speaker == Speaker::kDoctor;
    c.Expect(d.meta.assignments.size() == doctor_turns, tag + " one assignment per doctor turn");
    for (const auto& a : d.meta.assignments) c.Expect(a.size() <= 4, tag + " keyword cap");
  }
  c.note = std::to_string(dialogues.size()) + " dialogues";
}

void PolishSafeguard(Check& c) {
  const ConceptEntry aspirin{"aspirin", "C0004057", SemanticGroup::kDrug};
  const ConceptEntry cough{"cough", "C0010200", SemanticGroup::kDisease};
  Dialogue in = Alternating({"Do you take aspirin for the cough?", "Yes, aspirin every day."});
  in.meta.keywords = {aspirin, cough};
  const Checklist checklist({aspirin, cough});
  MockBackend mock({"Doctor: Do you take anything for the cough?\nPatient: Yes, every day."});
  PromptSet prompts;
  GenerationConfig cfg;
  cfg.llm_factuality_check = false;
  const PipelineContext ctx{FixtureLexicon(), mock, prompts, cfg, {}};
  const Dialogue out = Polish(in, "Aspirin daily. Cough for a week.", checklist, ctx);
  c.Expect(mock.call_count() == 1, "polish called once");
  c.Expect(out.turns == in.turns, "input passed through");
  c.Expect(CoveredIndices(checklist, in.turns, ctx) == CoveredIndices(checklist, out.turns, ctx),
           "coverage unchanged");
  bool warned = false;
  for (const auto& w : out.meta.warnings) warned |= w.find("aspirin") != std::string::npos;
  c.Expect(warned, "warning names the dropped keyword");
}

double MeanTurns(const std::string& jsonl) {
  double turns = 0;
  int n = 0;
  for (const auto& line : Lines(jsonl)) {
    if (line.empty()) continue;
    turns += static_cast<double>(nlohmann::json::parse(line).at("turns").size());
    ++n;
  }
  return n ? turns / n : 0;
}

void ModeOrdering(Check& c) {
  std::string short_out, long_out;
  const std::vector<std::string> base = {"generate", Fixture("notes.jsonl"), "--lexicon",
                                         Fixture("lexicon.tsv"), "--mock", "--set",
                                         "max_context_tokens=300", "--mode"};
  auto s = base, l = base;
  s.push_back("short");
  l.push_back("long");
  c.Expect(RunArgs(s, &short_out) == 0, "short run");
  c.Expect(RunArgs(l, &long_out) == 0, "long run");
  const double ms = MeanTurns(short_out), ml = MeanTurns(long_out);
  c.Expect(ml > ms, "long mean turns > short mean turns");
  std::ostringstream note;
  note.precision(3);
  note << "short " << ms << " turns, long " << ml << " turns";
  c.note = note.str();
}

void BackendRobustness(Check& c) {
  RetryPolicy policy;
  policy.max_retries = 2;
  policy.base_delay = std::chrono::milliseconds(1);
  auto options = [](const testing::StubServer& s) {
    HttpBackendOptions o;
    o.endpoint_url = s.url();
    o.model = "stub";
    o.timeout = std::chrono::milliseconds(2000);
    return o;
  };
  ChatRequest req;
  req.messages = {{Role::kUser, "hello"}};
  req.max_reply_tokens = 16;

  testing::StubServer limited;
  limited.Enqueue(429);
  limited.Enqueue(429);
  limited.set_default_reply("ok");
  RetryingBackend a(std::make_shared<HttpBackend>(options(limited)), policy);
  c.Expect(a.Complete(req) == "ok", "reply after rate limits");
  c.Expect(limited.attempts() == 3, "429,429,200 took " + std::to_string(limited.attempts()));

  testing::StubServer denied;
  denied.Enqueue(401);
  policy.max_retries = 5;
  RetryingBackend b(std::make_shared<HttpBackend>(options(denied)), policy);
  bool auth = false;
  try {
    b.Complete(req);
  } catch (const BackendError& e) {
    auth = e.kind() == BackendError::Kind::kAuth;
  }
  c.Expect(auth, "401 surfaces as an auth error");
  c.Expect(denied.attempts() == 1, "401 took " + std::to_string(denied.attempts()));
}

void Determinism(Check& c) {
  testing::TempDir dir;
  const std::vector<std::string> base = {"generate", Fixture("notes.jsonl"), "--lexicon",
                                         Fixture("lexicon.tsv"), "--mock-script",
                                         Fixture("mock_script.json"), "--out"};
  auto a = base, b = base;
  a.push_back(dir.file("a.jsonl"));
  b.push_back(dir.file("b.jsonl"));
  c.Expect(RunArgs(a) == 0 && RunArgs(b) == 0, "both runs succeed");
  const std::string first = testing::ReadAll(dir.file("a.jsonl"));
  c.Expect(!first.empty(), "output not empty");
  c.Expect(first == testing::ReadAll(dir.file("b.jsonl")), "outputs byte-identical");
  c.note = std::to_string(first.size()) + " bytes";
}

}  // namespace
}  // namespace dialogforge

int main() {
  using namespace dialogforge;
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  int failed = 0;
  std::vector<Dialogue> loop_dialogues;

  auto run = [&](int id, const char* name, double limit_s, const std::function<void(Check&)>& fn) {
    Check c;
    const auto t0 = Clock::now();
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.Expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (limit_s > 0) c.Expect(secs < limit_s, "took longer than the time limit");
    failed += !c.ok();
    std::printf("[%s] %2d %s (%.3f s%s%s)%s\n", c.ok() ? "PASS" : "FAIL", id, name, secs,
                c.note.empty() ? "" : ", ", c.note.c_str(), c.summary().c_str());
  };

  run(1, "metric oracle equivalence", 10, MetricOracle);
  run(2, "metric identities", 1, Identities);
  run(3, "segmenter round trip", 1, SegmenterRoundTrip);
  run(4, "loop covers every keyword in ceil(k/4) rounds", 5,
      [&](Check& c) { loop_dialogues = LoopCoverage(c); });
  run(5, "keyword cap and alternation", 0,
      [&](Check& c) { CapAndAlternation(c, loop_dialogues); });
  run(6, "polish safeguard", 0, PolishSafeguard);
  run(7, "long mode more verbose than short", 0, ModeOrdering);
  run(8, "backend retry counts", 2, BackendRobustness);
  run(9, "scripted generate is deterministic", 0, Determinism);
  run(10, "runs offline within the time limit", 60, [&](Check& c) {
    // Every HTTP call above went to an in-process loopback stub.
    const double total = std::chrono::duration<double>(Clock::now() - start).count();
    c.Expect(total < 60, "acceptance run exceeded 60 s");
    c.Expect(testing::StubServer().url().rfind("http://127.0.0.1:", 0) == 0,
             "stub is on loopback");
    char buf[64];
    std::snprintf(buf, sizeof buf, "acceptance total %.2f s", total);
    c.note = buf;
  });
  return failed == 0 ? 0 : 1;
}
