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

#include "dialogforge/cli.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <thread>

#include "CLI11.hpp"
#include "dialogforge/concepts.h"
#include "dialogforge/dataset.h"
#include "dialogforge/error.h"
#include "dialogforge/http_backend.h"
#include "dialogforge/metrics.h"
#include "dialogforge/mock_backend.h"
#include "dialogforge/refiner.h"
#include "dialogforge/segmenter.h"

namespace dialogforge {

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

std::string Env(const char* name) {
  const char* v = std::getenv(name);
  return v ? v : "";
}

// Either the --out file or the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) {
        throw DatasetError(DatasetError::Code::kIo,
                           "cannot write '" + path + "'");
      }
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

struct SegmentArgs {
  std::string input, out;
  double threshold = 0.85;
};

struct ExtractArgs {
  std::string input, out, lexicon;
};

struct GenerateArgs {
  std::string input, out, lexicon, config, prompts_dir, mock_script;
  std::string backend = "http";
  std::string endpoint, model = "gpt-4";
  std::optional<std::string> mode;
  std::optional<double> threshold;
  std::optional<int> max_rounds;
  std::vector<std::string> overrides;
  bool mock = false;
  bool print_config = false;
  unsigned workers = 1;
  int max_retries = 3;
  int note_retries = 1;
  double rpm = 0;
  double timeout_s = 60;
  std::set<std::string> given;  // config keys passed as flags
};

struct EvaluateArgs {
  std::string hyp, ref, out, lexicon;
  unsigned workers = 1;
};

int RunSegment(const SegmentArgs& a, std::ostream& out, std::ostream& err) {
  const auto notes = ReadNotesFile(a.input);
  Sink sink(a.out, out);
  int failed = 0;
  for (const ClinicalNote& note : notes) {
    try {
      for (const auto& s : SegmentNote(note, a.threshold)) {
        sink.get() << SectionToJson(note.id, s).dump() << "\n";
      }
    } catch (const Error& e) {
      err << "note '" << note.id << "': " << e.what() << "\n";
      ++failed;
    }
  }
  return failed ? kExitFailed : kExitOk;
}

int RunExtract(const ExtractArgs& a, std::ostream& out, std::ostream& err) {
  const Lexicon lexicon = LoadLexiconFile(a.lexicon);
  for (const auto& w : lexicon.warnings()) err << "lexicon: " << w << "\n";
  const auto notes = ReadNotesFile(a.input);
  const GenerationConfig cfg;
  Sink sink(a.out, out);
  for (const ClinicalNote& note : notes) {
    const auto concepts = FilterSemanticGroups(
        ExtractConcepts(note.text, lexicon, cfg.concept_threshold));
    sink.get() << ConceptsToJson(note.id, concepts).dump() << "\n";
  }
  return kExitOk;
}

GenerationConfig ResolveConfig(GenerateArgs& a) {
  ConfigTable table;
  if (!a.config.empty()) table = ReadConfigFile(a.config);

  std::map<std::string, std::string> sets;
  for (const auto& kv : a.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw DatasetError(DatasetError::Code::kConfig,
                         "--set expects key=value, got '" + kv + "'");
    }
    sets[kv.substr(0, eq)] = kv.substr(eq + 1);
  }

  std::string mode = "short";
  if (table.count("mode")) mode = table["mode"];
  if (sets.count("mode")) mode = sets["mode"];
  if (a.mode) mode = *a.mode;
  GenerationConfig cfg;
  try {
    cfg = GenerationConfig::ForMode(ParseMode(mode));
  } catch (const Error& e) {
    throw DatasetError(DatasetError::Code::kConfig, e.what());
  }

  // Non-generation keys a config file may also carry; flags still win.
  auto apply_cli_key = [&](const std::string& k, const std::string& v) {
    auto num = [&](auto& field) {
      std::string tmp = k + "=" + v;
      try {
        std::size_t used = 0;
        if constexpr (std::is_same_v<std::decay_t<decltype(field)>, double>) {
          field = std::stod(v, &used);
        } else {
          field = static_cast<std::decay_t<decltype(field)>>(std::stol(v, &used));
        }
        if (used != v.size()) throw std::invalid_argument(tmp);
      } catch (const std::exception&) {
        throw DatasetError(DatasetError::Code::kConfig, "bad value in " + tmp);
      }
    };
    if (a.given.count(k)) return true;
    if (k == "backend") a.backend = v;
    else if (k == "endpoint") a.endpoint = v;
    else if (k == "model") a.model = v;
    else if (k == "workers") num(a.workers);
    else if (k == "max_retries") num(a.max_retries);
    else if (k == "note_retries") num(a.note_retries);
    else if (k == "rpm") num(a.rpm);
    else if (k == "timeout") num(a.timeout_s);
    else return false;
    return true;
  };

  for (const auto& [k, v] : table) {
    if (k == "mode") continue;
    if (ApplyConfigValue(cfg, k, v)) continue;
    if (k == "api_key") {
      throw DatasetError(DatasetError::Code::kConfig,
                         "the API key is read from DIALOGFORGE_API_KEY only");
    }
    if (!apply_cli_key(k, v)) {
      throw DatasetError(DatasetError::Code::kConfig,
                         "unknown config key '" + k + "'");
    }
  }
  for (const auto& [k, v] : sets) {
    if (k == "mode") continue;
    if (!ApplyConfigValue(cfg, k, v)) {
      throw DatasetError(DatasetError::Code::kConfig,
                         "unknown config key '" + k + "'");
    }
  }
  cfg.mode = ParseMode(mode);
  if (a.threshold) cfg.similarity_threshold = *a.threshold;
  if (a.max_rounds) cfg.max_rounds = *a.max_rounds;
  return cfg;
}

// Scripted replies, either one list for the whole run or one per note id.
struct Script {
  std::vector<std::string> shared;
  std::map<std::string, std::vector<std::string>> per_note;
  bool keyed = false;
};

Script LoadCliScript(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DatasetError(DatasetError::Code::kIo, "cannot open '" + path + "'");
  }
  json j;
  try {
    j = json::parse(in);
    Script s;
    if (j.is_object()) {
      s.keyed = true;
      for (const auto& [id, replies] : j.items()) {
        s.per_note[id] = replies.get<std::vector<std::string>>();
      }
    } else {
      s.shared = j.get<std::vector<std::string>>();
    }
    return s;
  } catch (const json::exception& e) {
    throw DatasetError(DatasetError::Code::kMalformedRecord,
                       "mock script '" + path + "': " + e.what());
  }
}

void PrintEffective(const GenerationConfig& cfg, const GenerateArgs& a,
                    std::ostream& out) {
  out << FormatConfig(cfg);
  const bool mock = a.mock || !a.mock_script.empty();
  out << "backend=" << (mock ? "mock" : a.backend) << "\n";
  if (!mock) {
    out << "endpoint=" << a.endpoint << "\n"
        << "model=" << a.model << "\n"
        << "max_retries=" << a.max_retries << "\n"
        << "rpm=" << a.rpm << "\n"
        << "timeout=" << a.timeout_s << "\n";
  }
  out << "workers=" << a.workers << "\n"
      << "note_retries=" << a.note_retries << "\n";
}

int RunGenerate(GenerateArgs a, std::ostream& out, std::ostream& err) {
  const GenerationConfig cfg = ResolveConfig(a);
  try {
    Validate(cfg);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (a.endpoint.empty()) a.endpoint = Env("DIALOGFORGE_ENDPOINT");
  if (a.print_config) {
    PrintEffective(cfg, a, out);
    return kExitOk;
  }

  const Lexicon lexicon = LoadLexiconFile(a.lexicon);
  for (const auto& w : lexicon.warnings()) err << "lexicon: " << w << "\n";
  const PromptSet prompts =
      a.prompts_dir.empty() ? PromptSet() : PromptSet::FromDirectory(a.prompts_dir);
  const auto notes = ReadNotesFile(a.input);

  std::optional<Script> script;
  std::shared_ptr<ChatBackend> shared;
  if (!a.mock_script.empty()) {
    script = LoadCliScript(a.mock_script);
    if (!script->keyed) {
      // One reply stream: its order is only defined when notes run in turn.
      if (a.workers > 1) err << "a shared mock script runs with one worker\n";
      a.workers = 1;
      shared = std::make_shared<MockBackend>(script->shared);
    }
  } else if (a.mock || a.backend == "mock") {
    shared = std::make_shared<MockBackend>();
  } else if (a.backend == "http") {
    if (a.endpoint.empty()) {
      throw DatasetError(DatasetError::Code::kConfig,
                         "no endpoint: pass --endpoint or set "
                         "DIALOGFORGE_ENDPOINT");
    }
    HttpBackendOptions opts;
    opts.endpoint_url = a.endpoint;
    opts.model = a.model;
    opts.api_key = Env("DIALOGFORGE_API_KEY");
    opts.requests_per_minute = a.rpm;
    opts.timeout = std::chrono::milliseconds(
        static_cast<long long>(a.timeout_s * 1000));
    RetryPolicy policy;
    policy.max_retries = a.max_retries;
    shared = std::make_shared<RetryingBackend>(
        std::make_shared<HttpBackend>(opts), policy);
  } else {
    throw DatasetError(DatasetError::Code::kConfig,
                       "unknown backend '" + a.backend + "'");
  }

  Sink sink(a.out, out);
  std::vector<std::optional<std::string>> lines(notes.size());
  std::vector<bool> done(notes.size(), false);
  std::size_t flushed = 0;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::atomic<int> failed{0};
  std::mutex mu;

  auto process = [&](std::size_t i) {
    const ClinicalNote& note = notes[i];
    std::shared_ptr<ChatBackend> backend = shared;
    if (!backend) {
      const auto it = script->per_note.find(note.id);
      if (it == script->per_note.end()) {
        throw DatasetError(DatasetError::Code::kConfig,
                           "mock script has no replies for this note");
      }
      backend = std::make_shared<MockBackend>(it->second);
    }
    PipelineContext ctx{lexicon, *backend, prompts, cfg, {}};
    for (int attempt = 0;; ++attempt) {
      try {
        return RunFullPipeline(note, ctx);
      } catch (const BackendError& e) {
        if (e.kind() == BackendError::Kind::kAuth ||
            e.kind() == BackendError::Kind::kScriptExhausted ||
            attempt >= a.note_retries) {
          throw;
        }
        std::lock_guard<std::mutex> lock(mu);
        err << "note '" << note.id << "': retrying after " << e.what() << "\n";
      }
    }
  };

  auto worker = [&] {
    while (!abort) {
      const std::size_t i = next++;
      if (i >= notes.size()) return;
      std::optional<std::string> line;
      std::vector<std::string> messages;
      try {
        const Dialogue d = process(i);
        line = DialogueToJson(d, cfg.mode).dump();
        for (const auto& w : d.meta.warnings) messages.push_back("warning: " + w);
      } catch (const BackendError& e) {
        if (e.kind() == BackendError::Kind::kAuth) abort = true;
        messages.push_back(e.what());
        ++failed;
      } catch (const Error& e) {
        messages.push_back(e.what());
        ++failed;
      }
      std::lock_guard<std::mutex> lock(mu);
      for (const auto& m : messages) {
        err << "note '" << notes[i].id << "': " << m << "\n";
      }
      lines[i] = std::move(line);
      done[i] = true;
      while (flushed < notes.size() && done[flushed]) {
        if (lines[flushed]) sink.get() << *lines[flushed] << "\n";
        ++flushed;
      }
    }
  };

  const unsigned lanes =
      std::max(1u, std::min<unsigned>(a.workers, static_cast<unsigned>(
                                                     std::max<std::size_t>(notes.size(), 1))));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < lanes; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  sink.get().flush();

  if (abort) {
    err << "stopped: authentication failed\n";
    return kExitFailed;
  }
  return failed ? kExitFailed : kExitOk;
}

int RunEvaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  const Lexicon lexicon = LoadLexiconFile(a.lexicon);
  for (const auto& w : lexicon.warnings()) err << "lexicon: " << w << "\n";
  const auto pairs =
      AlignById(ReadDialoguesFile(a.hyp), ReadDialoguesFile(a.ref));
  const EvalReport report =
      EvaluateCorpus(pairs, lexicon, GenerationConfig{}, a.workers);
  if (a.out.empty()) {
    out << ReportJson(report) << "\n\n";
  } else {
    Sink sink(a.out, out);
    sink.get() << ReportJson(report) << "\n";
  }
  out << ReportTable(report);
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Clinical note to doctor-patient dialogue synthesis",
               "dialogforge"};
  app.require_subcommand(1);

  SegmentArgs seg;
  auto* segment = app.add_subcommand("segment", "Split notes into sections");
  segment->add_option("notes", seg.input, "Notes file (JSONL)")->required();
  segment->add_option("--threshold", seg.threshold, "Header similarity threshold")
      ->check(CLI::Range(0.0, 1.0));
  segment->add_option("--out", seg.out, "Output file (default stdout)");

  ExtractArgs ext;
  auto* extract = app.add_subcommand("extract", "List clinical concepts per note");
  extract->add_option("notes", ext.input, "Notes file (JSONL)")->required();
  extract->add_option("--lexicon", ext.lexicon, "Lexicon TSV")->required();
  extract->add_option("--out", ext.out, "Output file (default stdout)");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate dialogues");
  generate->add_option("notes", gen.input, "Notes file (JSONL)")->required();
  generate->add_option("--lexicon", gen.lexicon, "Lexicon TSV")->required();
  generate->add_flag("--mock", gen.mock, "Use the rule-based mock backend");
  generate->add_option("--mock-script", gen.mock_script,
                       "JSON array of replies, or object of arrays by note id");
  generate->add_option("--backend", gen.backend, "http or mock")
      ->check(CLI::IsMember({"http", "mock"}));
  generate->add_option("--endpoint", gen.endpoint,
                       "Base URL of an OpenAI-compatible API");
  generate->add_option("--model", gen.model, "Model name");
  generate->add_option("--mode", gen.mode, "short or long")
      ->check(CLI::IsMember({"short", "long"}));
  generate->add_option("--threshold", gen.threshold,
                       "Header similarity threshold")
      ->check(CLI::Range(0.0, 1.0));
  generate->add_option("--max-rounds", gen.max_rounds, "Rounds per section");
  generate->add_option("--config", gen.config, "key=value config file");
  generate->add_option("--set", gen.overrides, "Config override key=value");
  generate->add_option("--prompts-dir", gen.prompts_dir,
                       "Directory with <prompt>.txt overrides");
  generate->add_option("--workers", gen.workers, "Notes processed at once")
      ->check(CLI::PositiveNumber);
  generate->add_option("--max-retries", gen.max_retries,
                       "Retries per request on transient errors")
      ->check(CLI::NonNegativeNumber);
  generate->add_option("--note-retries", gen.note_retries,
                       "Whole-note retries after a backend error")
      ->check(CLI::NonNegativeNumber);
  generate->add_option("--rpm", gen.rpm, "Request rate limit (0 = none)")
      ->check(CLI::NonNegativeNumber);
  generate->add_option("--timeout", gen.timeout_s, "Request timeout, seconds")
      ->check(CLI::PositiveNumber);
  generate->add_option("--out", gen.out, "Output file (default stdout)");
  generate->add_flag("--print-config", gen.print_config,
                     "Print the effective configuration and exit");

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score dialogues against references");
  evaluate->add_option("hyp", ev.hyp, "Generated dialogues (JSONL)")->required();
  evaluate->add_option("ref", ev.ref, "Reference dialogues (JSONL)")->required();
  evaluate->add_option("--lexicon", ev.lexicon, "Lexicon TSV")->required();
  evaluate->add_option("--workers", ev.workers, "Pairs scored at once")
      ->check(CLI::PositiveNumber);
  evaluate->add_option("--out", ev.out, "Write the JSON report here");

  std::vector<std::string> argv_store{"dialogforge"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*segment) return RunSegment(seg, out, err);
    if (*extract) return RunExtract(ext, out, err);
    if (*generate) {
      for (const char* key : {"backend", "endpoint", "model", "workers",
                              "max_retries", "note_retries", "rpm", "timeout"}) {
        std::string flag = std::string("--") + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        if (generate->count(flag) > 0) gen.given.insert(key);
      }
      return RunGenerate(gen, out, err);
    }
    if (*evaluate) return RunEvaluate(ev, out, err);
  } catch (const DatasetError& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == DatasetError::Code::kConfig ? kExitUsage : kExitFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitUsage;
}

}  // namespace dialogforge
