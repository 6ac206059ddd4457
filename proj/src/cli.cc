// Copyright 2026 The FacEval Authors.
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

#include "faceval/cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include <fmt/format.h>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "faceval/baselines.h"
#include "faceval/corpus.h"
#include "faceval/error.h"
#include "faceval/metaeval.h"
#include "faceval/probes.h"
#include "faceval/remote.h"
#include "faceval/scoring.h"
#include "faceval/textproc.h"
#include "faceval/transforms.h"
#include "json.hpp"

namespace faceval {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

constexpr char kVersion[] = "faceval 0.1.0";

// Routes library logging to the CLI's error stream for the duration of a
// command.
class ScopedLogger {
 public:
  ScopedLogger(std::ostream& err, bool verbose)
      : previous_(spdlog::default_logger()) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    sink->set_pattern("[%l] %v");
    auto logger = std::make_shared<spdlog::logger>("faceval", sink);
    logger->set_level(verbose ? spdlog::level::debug : spdlog::level::warn);
    spdlog::set_default_logger(logger);
  }
  ~ScopedLogger() { spdlog::set_default_logger(previous_); }

 private:
  std::shared_ptr<spdlog::logger> previous_;
};

void WriteJsonFile(const fs::path& path, const ordered_json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

Split SplitFlag(const std::string& name) {
  auto split = ParseSplit(name);
  if (!split) throw DomainError("unknown split '" + name + "'");
  return *split;
}

std::vector<TransformKind> KindsFlag(const std::vector<std::string>& names) {
  if (names.empty()) return {kNegativeKinds.begin(), kNegativeKinds.end()};
  std::vector<TransformKind> kinds;
  for (const std::string& name : names) {
    auto kind = ParseTransformKind(name);
    if (!kind || !IsNegativeKind(*kind)) {
      throw DomainError("'" + name + "' is not a negative transform kind");
    }
    if (std::find(kinds.begin(), kinds.end(), *kind) == kinds.end()) {
      kinds.push_back(*kind);
    }
  }
  return kinds;
}

std::vector<std::string> KindNames(std::span<const TransformKind> kinds) {
  std::vector<std::string> names;
  for (TransformKind kind : kinds) names.emplace_back(TransformKindName(kind));
  return names;
}

PronounSource PronounSourceFlag(const std::string& name) {
  if (name == "dialogue-first") return PronounSource::kDialogueFirst;
  if (name == "dialogue-only") return PronounSource::kDialogueOnly;
  if (name == "lexicon") return PronounSource::kLexicon;
  throw DomainError("unknown pronoun source '" + name + "'");
}

std::unique_ptr<ParaphraseProvider> MakeProvider(const std::string& spec) {
  if (spec.empty() || spec == "none") {
    return std::make_unique<NullParaphraseProvider>();
  }
  if (spec.starts_with("static:")) {
    return std::make_unique<StaticParaphraseProvider>(
        StaticParaphraseProvider::FromFile(spec.substr(7)));
  }
  if (spec.starts_with("http://") || spec.starts_with("https://")) {
    return std::make_unique<HttpParaphraseProvider>(spec);
  }
  throw DomainError("provider must be none, static:FILE or an http URL");
}

std::string CountTable(const ProbeCorpus& probes) {
  std::ostringstream out;
  out << fmt::format("{:<16}", "");
  for (TransformKind kind : kNegativeKinds) {
    out << fmt::format("{:>8}", TransformKindName(kind));
  }
  out << fmt::format("{:>8}\n", "All");
  out << fmt::format("{:<16}", "# Neg Samples");
  for (TransformKind kind : kNegativeKinds) {
    auto it = probes.counts.find(kind);
    out << fmt::format("{:>8}", it == probes.counts.end() ? 0 : it->second);
  }
  out << fmt::format("{:>8}\n", probes.TotalNegatives());
  std::size_t positives = 0;
  for (const ProbeSet& set : probes.sets) positives += set.positives.size();
  out << fmt::format("dialogues: {}  positives: {}\n", probes.sets.size(),
                     positives);
  return out.str();
}

// ---------------------------------------------------------------- commands

struct BuildProbesFlags {
  std::string corpus;
  std::string split = "test";
  std::string out;
  std::uint64_t seed = 0;
  std::size_t cap = 5;
  int paraphrases = 2;
  std::string provider = "none";
  std::string pronoun_source = "dialogue-first";
  std::vector<std::string> kinds;
  bool reference_only = false;
};

int BuildProbesCommand(const BuildProbesFlags& f, std::size_t jobs,
                       std::ostream& out) {
  ProbeConfig config;
  config.cap_per_kind = f.cap;
  config.max_paraphrases = f.paraphrases;
  config.perturb_all_positives = !f.reference_only;
  config.kinds = KindsFlag(f.kinds);
  config.swap.pronoun_source = PronounSourceFlag(f.pronoun_source);
  std::unique_ptr<ParaphraseProvider> provider = MakeProvider(f.provider);
  config.provider_id = provider->id();

  const Corpus corpus = LoadCorpus(f.corpus, SplitFlag(f.split));
  RuleBasedTagger tagger;
  ProbeCorpus probes =
      BuildProbeCorpus(corpus, config, f.seed, provider.get(), tagger, jobs);
  probes.run = {{"command", "build-probes"},
                {"version", kVersion},
                {"corpus", f.corpus},
                {"split", f.split},
                {"seed", f.seed},
                {"cap", f.cap},
                {"paraphrases", f.paraphrases},
                {"provider", f.provider},
                {"pronoun_source", f.pronoun_source},
                {"kinds", KindNames(config.kinds)},
                {"reference_only", f.reference_only}};
  SaveProbeCorpus(probes, f.out);
  out << CountTable(probes);
  return kExitOk;
}

struct ScoreFlags {
  std::string probes;
  std::string scorer_url;
  std::string replay;
  std::string mock;
  double p = 0.5;
  std::uint64_t seed = 0;
  double alpha = 1.0;
  std::string out;
  std::string dump;
  std::string record;
  std::string model_id;
  std::string scores_out;
  std::size_t batch_size = 16;
  int timeout_s = 300;
};

std::unique_ptr<Scorer> MakeScorer(const ScoreFlags& f,
                                   const ProbeCorpus& probes,
                                   std::string& url_used) {
  const int modes = !f.replay.empty() + !f.mock.empty();
  const std::string url = ResolveScorerUrl(f.scorer_url);
  if (modes > 1 || (modes == 1 && !f.scorer_url.empty())) {
    throw DomainError("choose one of --scorer-url, --replay and --mock");
  }
  if (!f.replay.empty()) {
    return std::make_unique<ReplayScorer>(ReplayScorer::FromFile(f.replay));
  }
  if (!f.mock.empty()) {
    auto labels = std::make_shared<const ProbeLabels>(probes);
    if (f.mock == "oracle") return std::make_unique<OracleScorer>(labels);
    if (f.mock == "anti") return std::make_unique<OracleScorer>(labels, true);
    if (f.mock == "noisy") {
      return std::make_unique<NoisyScorer>(labels, f.p, f.seed);
    }
    if (f.mock == "random") return std::make_unique<RandomScorer>(f.seed);
    if (f.mock == "lexical") return std::make_unique<LexicalScorer>();
    throw DomainError("unknown mock scorer '" + f.mock + "'");
  }
  if (url.empty()) {
    throw DomainError("no scorer: pass --scorer-url, --replay or --mock, or set " +
                      std::string(kScorerUrlEnv));
  }
  url_used = url;
  HttpOptions options;
  options.read_timeout_s = f.timeout_s;
  return std::make_unique<HttpScorer>(url, options);
}

int ScoreCommand(const ScoreFlags& f, std::size_t jobs, std::ostream& out) {
  if (!(f.alpha >= 0.0)) throw DomainError("--alpha must be >= 0");
  const ProbeCorpus probes = LoadProbeCorpus(f.probes);
  std::string url_used;
  std::unique_ptr<Scorer> scorer = MakeScorer(f, probes, url_used);
  std::unique_ptr<RecordingScorer> recorder;
  const Scorer* active = scorer.get();
  if (!f.record.empty()) {
    recorder = std::make_unique<RecordingScorer>(*scorer);
    active = recorder.get();
  }

  ScoringOptions options;
  options.alpha = f.alpha;
  options.batch_size = f.batch_size;
  options.max_in_flight = jobs;
  const ScoredCorpus scored = ScoreProbeCorpus(probes, *active, options);
  const FactualityReport report = ComputeFactualityScore(scored);
  if (recorder) recorder->Save(f.record);

  const std::string label = f.model_id.empty() ? scorer->id() : f.model_id;
  ordered_json run = {{"command", "score"},
                      {"version", kVersion},
                      {"probes", f.probes},
                      {"probe_seed", probes.seed},
                      {"scorer", scorer->id()},
                      {"scorer_url", url_used},
                      {"replay", f.replay},
                      {"mock", f.mock},
                      {"p", f.p},
                      {"seed", f.seed},
                      {"alpha", f.alpha},
                      {"batch_size", f.batch_size},
                      {"model_id", f.model_id}};
  out << RenderFactualityTable(report, label);
  out << fmt::format("dialogues used: {}  failed: {}  without negatives: {}\n",
                     report.dialogues_used, report.dialogues_failed,
                     report.dialogues_without_negatives);
  if (!f.out.empty()) {
    ordered_json doc = {{"run", run}};
    doc.update(FactualityReportToJson(report));
    WriteJsonFile(f.out, doc);
  }
  if (!f.dump.empty()) {
    ordered_json doc = {{"run", run}};
    doc.update(ScoredCorpusToJson(scored));
    WriteJsonFile(f.dump, doc);
  }
  if (!f.scores_out.empty()) {
    if (f.model_id.empty()) {
      throw DomainError("--scores-out needs --model-id");
    }
    std::vector<MetricScoreRecord> records = {
        {f.model_id, "FS", report.fs_overall}};
    for (TransformKind kind : kNegativeKinds) {
      auto it = report.per_kind.find(kind);
      if (it == report.per_kind.end()) continue;
      records.push_back(
          {f.model_id, "FS/" + std::string(TransformKindName(kind)),
           it->second.fs});
    }
    AppendMetricScores(f.scores_out, records);
  }
  return kExitOk;
}

struct CorruptFlags {
  std::string corpus;
  std::string split = "train";
  std::string strategy;
  double knob = 0.0;
  std::uint64_t seed = 0;
  std::string out;
  std::vector<std::string> kinds;
  std::size_t edits = 1;
};

int CorruptCommand(const CorruptFlags& f, std::size_t jobs, std::ostream& out) {
  const Corpus corpus = LoadCorpus(f.corpus, SplitFlag(f.split));
  ordered_json run = {{"command", "corrupt"},
                      {"version", kVersion},
                      {"corpus", f.corpus},
                      {"split", f.split},
                      {"strategy", f.strategy},
                      {"knob", f.knob},
                      {"seed", f.seed}};
  ordered_json sidecar;
  Corpus result;
  bool identity = false;
  if (f.strategy == "ldt") {
    result = MakeLdtSplit(corpus, f.knob, f.seed);
    identity = f.knob == 1.0;
    sidecar["dialogues"] = result.entries.size();
  } else if (f.strategy == "mdt") {
    MdtOptions options;
    options.kinds = KindsFlag(f.kinds);
    options.edits_per_dialogue = f.edits;
    options.jobs = jobs;
    run["kinds"] = KindNames(options.kinds);
    run["edits_per_dialogue"] = f.edits;
    RuleBasedTagger tagger;
    MdtResult mdt = MakeMdtCorpus(corpus, f.knob, f.seed, tagger, options);
    identity = mdt.corrupted_ids.empty();
    sidecar["dialogues"] = mdt.corpus.entries.size();
    sidecar["corrupted_ids"] = mdt.corrupted_ids;
    sidecar["unchanged_ids"] = mdt.unchanged_ids;
    result = std::move(mdt.corpus);
  } else {
    throw DomainError("--strategy must be ldt or mdt");
  }

  // An untouched corpus is copied byte for byte.
  if (identity) {
    fs::copy_file(f.corpus, f.out, fs::copy_options::overwrite_existing);
  } else {
    SaveCorpus(result, f.out);
  }
  ordered_json doc = {{"run", run}};
  doc.update(sidecar);
  WriteJsonFile(f.out + ".config.json", doc);

  out << fmt::format("{} knob {}: {} of {} dialogues written to {}\n",
                     f.strategy == "ldt" ? "LDT" : "MDT", f.knob,
                     result.entries.size(), corpus.entries.size(), f.out);
  if (sidecar.contains("corrupted_ids")) {
    out << fmt::format("corrupted: {}  selected but unchanged: {}\n",
                       sidecar["corrupted_ids"].size(),
                       sidecar["unchanged_ids"].size());
  }
  return kExitOk;
}

struct MetaFlags {
  std::vector<std::string> series;
  std::string scores;
  std::string out;
};

int MetaCommand(const MetaFlags& f, std::ostream& out) {
  std::vector<ModelSeries> series;
  for (const std::string& path : f.series) {
    series.push_back(LoadModelSeries(path));
  }
  const std::vector<MetricScoreRecord> scores = LoadMetricScores(f.scores);
  const CorrelationReport report = BuildCorrelationReport(series, scores);
  out << RenderCorrelationTable(report);
  if (!f.out.empty()) {
    ordered_json doc = {{"run",
                         {{"command", "meta"},
                          {"version", kVersion},
                          {"series", f.series},
                          {"scores", f.scores}}}};
    doc.update(CorrelationReportToJson(report));
    WriteJsonFile(f.out, doc);
  }
  return kExitOk;
}

struct StatsFlags {
  std::string corpus;
  std::string split = "test";
  std::string annotations;
  std::string out;
};

std::string Percent(double fraction) {
  return fmt::format("{:.1f}", 100.0 * fraction);
}

int StatsCommand(const StatsFlags& f, std::ostream& out) {
  if (f.corpus.empty() == f.annotations.empty()) {
    throw DomainError("stats needs exactly one of --corpus and --annotations");
  }
  ordered_json doc = {{"run",
                       {{"command", "stats"},
                        {"version", kVersion},
                        {"corpus", f.corpus},
                        {"split", f.split},
                        {"annotations", f.annotations}}}};
  if (!f.corpus.empty()) {
    const CorpusStats stats =
        ComputeCorpusStats(LoadCorpus(f.corpus, SplitFlag(f.split)));
    out << fmt::format("{:<24}{:>10}\n", "Split", f.split);
    out << fmt::format("{:<24}{:>10}\n", "Dialogues", stats.dialogues);
    out << fmt::format("{:<24}{:>10.2f}\n", "Speakers / dialogue",
                       stats.mean_speakers);
    out << fmt::format("{:<24}{:>10.2f}\n", "Turns / dialogue",
                       stats.mean_turns);
    out << fmt::format("{:<24}{:>10.2f}\n", "Words / summary",
                       stats.mean_summary_length);
    doc["corpus_stats"] = {{"dialogues", stats.dialogues},
                           {"mean_speakers", stats.mean_speakers},
                           {"mean_turns", stats.mean_turns},
                           {"mean_summary_length", stats.mean_summary_length}};
  } else {
    const AnnotationReport report =
        BuildAnnotationReport(LoadAnnotations(f.annotations));
    std::vector<AnnotationRow> rows = report.rows;
    if (report.pooled_models) rows.push_back(*report.pooled_models);
    out << fmt::format("{:<18}{:>6}{:>8}", "Source", "N", ">=1err");
    for (ErrorType type : kAllErrorTypes) {
      out << fmt::format("{:>8}", ErrorTypeName(type));
    }
    out << '\n';
    ordered_json json_rows = ordered_json::array();
    for (const AnnotationRow& row : rows) {
      out << fmt::format("{:<18}{:>6}{:>8}", row.source, row.records,
                         Percent(row.any_error));
      ordered_json per_type = ordered_json::object();
      for (ErrorType type : kAllErrorTypes) {
        auto it = row.per_type.find(type);
        const double v = it == row.per_type.end() ? 0.0 : it->second;
        out << fmt::format("{:>8}", Percent(v));
        per_type[std::string(ErrorTypeName(type))] = v;
      }
      out << '\n';
      json_rows.push_back({{"source", row.source},
                           {"records", row.records},
                           {"any_error", row.any_error},
                           {"per_type", per_type}});
    }
    doc["annotation_rows"] = json_rows;
  }
  if (!f.out.empty()) WriteJsonFile(f.out, doc);
  return kExitOk;
}

struct BaselineFlags {
  std::string pairs;
  std::string out;
  std::string model_id;
  std::string scores_out;
};

int BaselineCommand(const BaselineFlags& f, std::ostream& out) {
  std::ifstream in(f.pairs, std::ios::binary);
  if (!in) throw IoError("cannot open pairs file " + f.pairs);
  std::vector<double> sums(kBaselineMetrics.size(), 0.0);
  std::size_t n = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string candidate, reference;
    try {
      json j = json::parse(line);
      candidate = j.at("candidate").get<std::string>();
      reference = j.at("reference").get<std::string>();
    } catch (const json::exception& e) {
      throw ParseError(e.what(), line_no);
    }
    const std::vector<MetricScore> scores = ScoreBaselines(candidate, reference);
    for (std::size_t i = 0; i < scores.size(); ++i) sums[i] += scores[i].value;
    ++n;
  }
  if (n == 0) throw DomainError("pairs file " + f.pairs + " is empty");

  ordered_json means = ordered_json::object();
  std::vector<MetricScoreRecord> records;
  for (std::size_t i = 0; i < kBaselineMetrics.size(); ++i) {
    const std::string name(BaselineMetricName(kBaselineMetrics[i]));
    const double mean = sums[i] / static_cast<double>(n);
    out << fmt::format("{:<10}{:>10.4f}\n", name, mean);
    means[name] = mean;
    records.push_back({f.model_id, name, mean});
  }
  out << fmt::format("pairs: {}\n", n);
  if (!f.out.empty()) {
    WriteJsonFile(f.out, {{"run",
                           {{"command", "baseline"},
                            {"version", kVersion},
                            {"pairs", f.pairs},
                            {"model_id", f.model_id}}},
                          {"pairs", n},
                          {"means", means}});
  }
  if (!f.scores_out.empty()) {
    if (f.model_id.empty()) throw DomainError("--scores-out needs --model-id");
    AppendMetricScores(f.scores_out, records);
  }
  return kExitOk;
}

void ReportError(std::ostream& err, std::string_view kind,
                 std::string_view message) {
  err << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int RunCli(std::span<const std::string> args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Model-level faithfulness evaluation for dialogue summarization",
               "faceval"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);
  std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
  bool verbose = false;
  app.add_option("--jobs,-j", jobs, "Worker threads")
      ->check(CLI::PositiveNumber);
  app.add_flag("--verbose,-v", verbose, "Debug logging on stderr");

  BuildProbesFlags bp;
  CLI::App* build = app.add_subcommand("build-probes",
                                       "Generate positive and negative probes");
  build->add_option("--corpus", bp.corpus, "Corpus JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  build->add_option("--split", bp.split, "train, validation or test");
  build->add_option("--out", bp.out, "Probe file to write")->required();
  build->add_option("--seed", bp.seed, "Random seed");
  build->add_option("--cap", bp.cap, "Negatives per kind per dialogue (0: all)");
  build->add_option("--paraphrases", bp.paraphrases,
                    "Paraphrases per reference")
      ->check(CLI::NonNegativeNumber);
  build->add_option("--provider", bp.provider,
                    "none, static:FILE or a paraphrase service URL");
  build->add_option("--pronoun-source", bp.pronoun_source,
                    "dialogue-first, dialogue-only or lexicon");
  build->add_option("--kinds", bp.kinds, "Negative kinds (default: all)")
      ->delimiter(',');
  build->add_flag("--reference-only", bp.reference_only,
                  "Corrupt only the reference, not its paraphrases");

  ScoreFlags sc;
  CLI::App* score = app.add_subcommand("score", "Score a probe file");
  score->add_option("--probes", sc.probes, "Probe file")
      ->required()
      ->check(CLI::ExistingFile);
  score->add_option("--scorer-url", sc.scorer_url,
                    std::string("Scoring service; ") + kScorerUrlEnv +
                        " overrides");
  score->add_option("--replay", sc.replay, "Recorded responses (JSONL)")
      ->check(CLI::ExistingFile);
  score->add_option("--mock", sc.mock,
                    "oracle, anti, noisy, random or lexical");
  score->add_option("--p", sc.p, "Noisy mock: probability of a correct rank")
      ->check(CLI::Range(0.0, 1.0));
  score->add_option("--seed", sc.seed, "Seed for the noisy and random mocks");
  score->add_option("--alpha", sc.alpha, "Length penalty exponent");
  score->add_option("--out", sc.out, "Factuality report JSON");
  score->add_option("--dump", sc.dump, "Per-summary scores JSON");
  score->add_option("--record", sc.record, "Write responses as a cassette");
  score->add_option("--model-id", sc.model_id, "Model label");
  score->add_option("--scores-out", sc.scores_out,
                    "Append FS lines to a metric score file");
  score->add_option("--batch-size", sc.batch_size, "Pairs per request")
      ->check(CLI::PositiveNumber);
  score->add_option("--timeout", sc.timeout_s, "Read timeout in seconds")
      ->check(CLI::PositiveNumber);

  CorruptFlags co;
  CLI::App* corrupt =
      app.add_subcommand("corrupt", "Write an LDT or MDT training corpus");
  corrupt->add_option("--corpus", co.corpus, "Corpus JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  corrupt->add_option("--split", co.split, "train, validation or test");
  corrupt->add_option("--strategy", co.strategy, "ldt or mdt")->required();
  corrupt->add_option("--knob", co.knob,
                      "LDT: data fraction; MDT: noise ratio")
      ->required();
  corrupt->add_option("--seed", co.seed, "Random seed");
  corrupt->add_option("--out", co.out, "Corpus JSONL to write")->required();
  corrupt->add_option("--kinds", co.kinds, "MDT transform kinds")
      ->delimiter(',');
  corrupt->add_option("--edits", co.edits, "MDT edits per dialogue")
      ->check(CLI::PositiveNumber);

  MetaFlags me;
  CLI::App* meta =
      app.add_subcommand("meta", "Rank correlation of metrics with series");
  meta->add_option("--series", me.series, "Model series JSON (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  meta->add_option("--scores", me.scores, "Metric score JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  meta->add_option("--out", me.out, "Correlation report JSON");

  StatsFlags st;
  CLI::App* stats = app.add_subcommand("stats", "Corpus or annotation stats");
  stats->add_option("--corpus", st.corpus, "Corpus JSONL")
      ->check(CLI::ExistingFile);
  stats->add_option("--split", st.split, "train, validation or test");
  stats->add_option("--annotations", st.annotations, "Annotation JSONL")
      ->check(CLI::ExistingFile);
  stats->add_option("--out", st.out, "Statistics JSON");

  BaselineFlags bl;
  CLI::App* baseline =
      app.add_subcommand("baseline", "ROUGE and BLEU over summary pairs");
  baseline->add_option("--pairs", bl.pairs,
                       "JSONL of {\"candidate\", \"reference\"}")
      ->required()
      ->check(CLI::ExistingFile);
  baseline->add_option("--out", bl.out, "Mean scores JSON");
  baseline->add_option("--model-id", bl.model_id, "Model label");
  baseline->add_option("--scores-out", bl.scores_out,
                       "Append metric lines to a metric score file");

  std::vector<std::string> argv_storage = {"faceval"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& a : argv_storage) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    ReportError(err, "usage_error", e.what());
    return kExitDataError;
  }

  ScopedLogger logger(err, verbose);
  try {
    if (build->parsed()) return BuildProbesCommand(bp, jobs, out);
    if (score->parsed()) return ScoreCommand(sc, jobs, out);
    if (corrupt->parsed()) return CorruptCommand(co, jobs, out);
    if (meta->parsed()) return MetaCommand(me, out);
    if (stats->parsed()) return StatsCommand(st, out);
    if (baseline->parsed()) return BaselineCommand(bl, out);
  } catch (const ServiceError& e) {
    ReportError(err, e.kind(), e.what());
    return kExitServiceError;
  } catch (const Error& e) {
    ReportError(err, e.kind(), e.what());
    return kExitDataError;
  } catch (const fs::filesystem_error& e) {
    ReportError(err, "io_error", e.what());
    return kExitDataError;
  } catch (const std::exception& e) {
    ReportError(err, "internal_error", e.what());
    return kExitDataError;
  }
  ReportError(err, "usage_error", "no command given");
  return kExitDataError;
}

}  // namespace faceval
