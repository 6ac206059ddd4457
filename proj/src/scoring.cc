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

#include "faceval/scoring.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>

#include "faceval/baselines.h"
#include "faceval/error.h"
#include "faceval/parallel.h"
#include "faceval/random.h"

namespace faceval {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string PairKey(std::string_view dialogue, std::string_view summary) {
  std::string key;
  key.reserve(dialogue.size() + summary.size() + 1);
  key.append(dialogue);
  key.push_back('\x1f');
  key.append(summary);
  return key;
}

ScoreResult Uniform(const ScoreRequest& request, double logprob) {
  TokenLogProbs tlp;
  tlp.tokens = MockTokens(request.summary);
  tlp.logprobs.assign(tlp.tokens.size(), logprob);
  return {request.id, std::move(tlp), {}};
}

ScoreResult Unknown(const ScoreRequest& request) {
  return {request.id, std::nullopt,
          "pair is not part of the labelled probe corpus"};
}

double PairDraw(std::uint64_t seed, const ScoreRequest& request) {
  return SeededRng(DeriveSeed(seed, request.dialogue, request.summary))
      .UniformReal();
}

ScoredSummary ToScored(const std::string& text, const ScoreResult* result,
                       double alpha) {
  ScoredSummary out;
  out.text = text;
  if (result == nullptr) {
    out.error = "scorer returned no result for this pair";
    return out;
  }
  if (!result->ok()) {
    out.error = result->error.empty() ? "scorer error" : result->error;
    return out;
  }
  try {
    GenerationScore gs = ComputeGenerationScore(*result->logprobs, alpha);
    out.gs = gs.value;
    out.length = gs.length;
    out.logprob_sum = std::accumulate(result->logprobs->logprobs.begin(),
                                      result->logprobs->logprobs.end(), 0.0);
  } catch (const DomainError& e) {
    out.error = std::string("protocol violation: ") + e.what();
  }
  return out;
}

}  // namespace

void TokenLogProbs::Validate() const {
  if (tokens.size() != logprobs.size()) {
    throw DomainError("token and log-probability counts differ (" +
                      std::to_string(tokens.size()) + " vs " +
                      std::to_string(logprobs.size()) + ")");
  }
  if (logprobs.empty()) throw DomainError("empty token sequence (L = 0)");
  for (double lp : logprobs) {
    if (!std::isfinite(lp) || lp > 0.0) {
      throw DomainError("log-probability must be finite and <= 0, got " +
                        fmt::format("{}", lp));
    }
  }
}

GenerationScore ComputeGenerationScore(const TokenLogProbs& tlp,
                                       double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw DomainError("length penalty alpha must be >= 0");
  }
  tlp.Validate();
  double sum = 0.0;
  for (double lp : tlp.logprobs) sum += lp;
  const std::size_t length = tlp.logprobs.size();
  const double normalizer =
      alpha == 1.0 ? static_cast<double>(length)
                   : std::pow(static_cast<double>(length), alpha);
  return {sum / normalizer, length, alpha};
}

json ScoreRequestsToJson(std::span<const ScoreRequest> requests) {
  json pairs = json::array();
  for (const ScoreRequest& r : requests) {
    pairs.push_back(
        {{"id", r.id}, {"dialogue", r.dialogue}, {"summary", r.summary}});
  }
  return {{"pairs", std::move(pairs)}};
}

std::vector<ScoreRequest> ScoreRequestsFromJson(const json& body) {
  std::vector<ScoreRequest> out;
  try {
    for (const json& p : body.at("pairs")) {
      out.push_back({p.at("id").get<std::string>(),
                     p.at("dialogue").get<std::string>(),
                     p.at("summary").get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed score request: ") + e.what());
  }
  return out;
}

json ScoreResultsToJson(std::span<const ScoreResult> results) {
  json out = json::array();
  for (const ScoreResult& r : results) {
    if (r.ok()) {
      out.push_back({{"id", r.id},
                     {"tokens", r.logprobs->tokens},
                     {"logprobs", r.logprobs->logprobs}});
    } else {
      out.push_back({{"id", r.id}, {"error", r.error}});
    }
  }
  return {{"results", std::move(out)}};
}

std::vector<ScoreResult> ScoreResultsFromJson(const json& body) {
  std::vector<ScoreResult> out;
  try {
    for (const json& r : body.at("results")) {
      ScoreResult result;
      result.id = r.at("id").get<std::string>();
      if (r.contains("error")) {
        result.error = r["error"].is_string() ? r["error"].get<std::string>()
                                              : r["error"].dump();
      } else {
        TokenLogProbs tlp;
        tlp.tokens = r.at("tokens").get<std::vector<std::string>>();
        tlp.logprobs = r.at("logprobs").get<std::vector<double>>();
        result.logprobs = std::move(tlp);
      }
      out.push_back(std::move(result));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed score response: ") + e.what());
  }
  return out;
}

bool ScoredProbeSet::failed() const {
  auto bad = [](const ScoredSummary& s) { return !s.gs.has_value(); };
  return std::any_of(positives.begin(), positives.end(), bad) ||
         std::any_of(negatives.begin(), negatives.end(), bad);
}

ScoredCorpus ScoreProbeCorpus(const ProbeCorpus& probes, const Scorer& scorer,
                              const ScoringOptions& options) {
  if (!(options.alpha >= 0.0)) {
    throw DomainError("length penalty alpha must be >= 0");
  }
  std::vector<ScoreRequest> requests;
  for (std::size_t s = 0; s < probes.sets.size(); ++s) {
    const ProbeSet& set = probes.sets[s];
    for (std::size_t m = 0; m < set.positives.size(); ++m) {
      requests.push_back({fmt::format("s{}/p{}", s, m), set.dialogue,
                          set.positives[m].text});
    }
    for (std::size_t n = 0; n < set.negatives.size(); ++n) {
      requests.push_back({fmt::format("s{}/n{}", s, n), set.dialogue,
                          set.negatives[n].text});
    }
  }

  const std::size_t batch = std::max<std::size_t>(1, options.batch_size);
  const std::size_t batches = (requests.size() + batch - 1) / batch;
  std::vector<std::vector<ScoreResult>> responses(batches);
  ParallelFor(batches, options.max_in_flight, [&](std::size_t b) {
    std::span<const ScoreRequest> chunk(
        requests.data() + b * batch,
        std::min(batch, requests.size() - b * batch));
    try {
      responses[b] = scorer.Score(chunk);
    } catch (const ServiceError&) {
      throw;
    } catch (const std::exception& e) {
      for (const ScoreRequest& r : chunk) {
        responses[b].push_back({r.id, std::nullopt, e.what()});
      }
    }
  });

  std::unordered_map<std::string, const ScoreResult*> by_id;
  for (const auto& batch_results : responses) {
    for (const ScoreResult& r : batch_results) by_id.emplace(r.id, &r);
  }
  auto lookup = [&](const std::string& id) -> const ScoreResult* {
    auto it = by_id.find(id);
    return it == by_id.end() ? nullptr : it->second;
  };

  ScoredCorpus scored;
  scored.alpha = options.alpha;
  for (std::size_t s = 0; s < probes.sets.size(); ++s) {
    const ProbeSet& set = probes.sets[s];
    ScoredProbeSet out;
    out.dialogue_id = set.dialogue_id;
    for (std::size_t m = 0; m < set.positives.size(); ++m) {
      out.positives.push_back(ToScored(set.positives[m].text,
                                       lookup(fmt::format("s{}/p{}", s, m)),
                                       options.alpha));
    }
    for (std::size_t n = 0; n < set.negatives.size(); ++n) {
      out.negatives.push_back(ToScored(set.negatives[n].text,
                                       lookup(fmt::format("s{}/n{}", s, n)),
                                       options.alpha));
      out.negative_kinds.push_back(NegativeOrigin(set.negatives[n]).kind);
    }
    scored.sets.push_back(std::move(out));
  }
  return scored;
}

FactualityReport ComputeFactualityScore(const ScoredCorpus& scored) {
  std::vector<const ScoredProbeSet*> order;
  for (const ScoredProbeSet& set : scored.sets) order.push_back(&set);
  std::sort(order.begin(), order.end(),
            [](const ScoredProbeSet* a, const ScoredProbeSet* b) {
              return a->dialogue_id < b->dialogue_id;
            });

  FactualityReport report;
  report.alpha = scored.alpha;
  double fs_sum = 0.0;
  std::map<TransformKind, double> kind_sums;
  for (const ScoredProbeSet* set : order) {
    if (set->failed()) {
      ++report.dialogues_failed;
      continue;
    }
    if (set->positives.empty() || set->negatives.empty()) {
      ++report.dialogues_without_negatives;
      continue;
    }
    DialogueOutcome outcome;
    outcome.dialogue_id = set->dialogue_id;
    std::map<TransformKind, std::pair<std::size_t, std::size_t>> kinds;
    for (std::size_t n = 0; n < set->negatives.size(); ++n) {
      auto& [wins, comparisons] = kinds[set->negative_kinds[n]];
      for (const ScoredSummary& positive : set->positives) {
        const bool win = *positive.gs > *set->negatives[n].gs;
        wins += win;
        ++comparisons;
        outcome.wins += win;
        ++outcome.comparisons;
      }
    }
    fs_sum += static_cast<double>(outcome.wins) /
              static_cast<double>(outcome.comparisons);
    for (const auto& [kind, tally] : kinds) {
      KindOutcome& k = report.per_kind[kind];
      ++k.dialogues;
      k.wins += tally.first;
      k.comparisons += tally.second;
      kind_sums[kind] += static_cast<double>(tally.first) /
                         static_cast<double>(tally.second);
    }
    report.total_wins += outcome.wins;
    report.total_comparisons += outcome.comparisons;
    report.dialogues.push_back(std::move(outcome));
  }
  report.dialogues_used = report.dialogues.size();
  if (report.dialogues_used == 0) {
    throw DomainError(
        "no dialogue has both scored positives and scored negatives");
  }
  report.fs_overall = fs_sum / static_cast<double>(report.dialogues_used);
  for (auto& [kind, k] : report.per_kind) {
    k.fs = kind_sums[kind] / static_cast<double>(k.dialogues);
  }
  return report;
}

ordered_json FactualityReportToJson(const FactualityReport& report) {
  ordered_json per_kind = ordered_json::object();
  for (TransformKind kind : kNegativeKinds) {
    auto it = report.per_kind.find(kind);
    if (it == report.per_kind.end()) continue;
    per_kind[std::string(TransformKindName(kind))] = {
        {"fs", it->second.fs},
        {"dialogues", it->second.dialogues},
        {"wins", it->second.wins},
        {"comparisons", it->second.comparisons}};
  }
  ordered_json dialogues = ordered_json::array();
  for (const DialogueOutcome& d : report.dialogues) {
    dialogues.push_back({{"dialogue_id", d.dialogue_id},
                         {"wins", d.wins},
                         {"comparisons", d.comparisons}});
  }
  return {{"fs_overall", report.fs_overall},
          {"alpha", report.alpha},
          {"dialogues_used", report.dialogues_used},
          {"dialogues_failed", report.dialogues_failed},
          {"dialogues_without_negatives", report.dialogues_without_negatives},
          {"total_wins", report.total_wins},
          {"total_comparisons", report.total_comparisons},
          {"per_kind", std::move(per_kind)},
          {"dialogues", std::move(dialogues)}};
}

ordered_json ScoredCorpusToJson(const ScoredCorpus& scored) {
  auto summary_json = [](const ScoredSummary& s) {
    ordered_json j = {{"text", s.text}};
    if (s.gs) {
      j["gs"] = *s.gs;
      j["logprob_sum"] = s.logprob_sum;
      j["length"] = s.length;
    } else {
      j["error"] = s.error;
    }
    return j;
  };
  ordered_json sets = ordered_json::array();
  for (const ScoredProbeSet& set : scored.sets) {
    ordered_json positives = ordered_json::array();
    for (const ScoredSummary& s : set.positives) {
      positives.push_back(summary_json(s));
    }
    ordered_json negatives = ordered_json::array();
    for (std::size_t n = 0; n < set.negatives.size(); ++n) {
      ordered_json j = summary_json(set.negatives[n]);
      j["kind"] = TransformKindName(set.negative_kinds[n]);
      negatives.push_back(std::move(j));
    }
    sets.push_back({{"dialogue_id", set.dialogue_id},
                    {"positives", std::move(positives)},
                    {"negatives", std::move(negatives)}});
  }
  return {{"alpha", scored.alpha}, {"sets", std::move(sets)}};
}

std::string RenderFactualityTable(const FactualityReport& report,
                                  std::string_view model_label) {
  std::ostringstream out;
  out << fmt::format("{:<16}{:>8}", "Model", "All");
  for (TransformKind kind : kNegativeKinds) {
    out << fmt::format("{:>8}", TransformKindName(kind));
  }
  out << '\n';
  out << fmt::format("{:<16}{:>8.2f}", model_label, 100.0 * report.fs_overall);
  for (TransformKind kind : kNegativeKinds) {
    auto it = report.per_kind.find(kind);
    if (it == report.per_kind.end()) {
      out << fmt::format("{:>8}", "-");
    } else {
      out << fmt::format("{:>8.2f}", 100.0 * it->second.fs);
    }
  }
  out << '\n';
  out << fmt::format("{:<16}{:>8}", "# Comparisons", report.total_comparisons);
  for (TransformKind kind : kNegativeKinds) {
    auto it = report.per_kind.find(kind);
    out << fmt::format("{:>8}",
                       it == report.per_kind.end() ? 0 : it->second.comparisons);
  }
  out << '\n';
  return out.str();
}

ProbeLabels::ProbeLabels(const ProbeCorpus& probes) {
  for (const ProbeSet& set : probes.sets) {
    for (const Summary& s : set.positives) {
      labels_[PairKey(set.dialogue, s.text)] = true;
    }
    for (const Summary& s : set.negatives) {
      labels_[PairKey(set.dialogue, s.text)] = false;
    }
  }
}

std::optional<bool> ProbeLabels::IsPositive(std::string_view dialogue,
                                            std::string_view summary) const {
  auto it = labels_.find(PairKey(dialogue, summary));
  if (it == labels_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> MockTokens(std::string_view summary) {
  std::vector<std::string> tokens;
  std::istringstream in{std::string(summary)};
  std::string token;
  while (in >> token) tokens.push_back(token);
  tokens.push_back("</s>");
  return tokens;
}

OracleScorer::OracleScorer(std::shared_ptr<const ProbeLabels> labels,
                           bool inverted)
    : labels_(std::move(labels)), inverted_(inverted) {}

std::vector<ScoreResult> OracleScorer::Score(
    std::span<const ScoreRequest> requests) const {
  std::vector<ScoreResult> out;
  for (const ScoreRequest& r : requests) {
    std::optional<bool> positive = labels_->IsPositive(r.dialogue, r.summary);
    if (!positive) {
      out.push_back(Unknown(r));
      continue;
    }
    out.push_back(Uniform(r, *positive != inverted_ ? 0.0 : -1.0));
  }
  return out;
}

NoisyScorer::NoisyScorer(std::shared_ptr<const ProbeLabels> labels, double p,
                         std::uint64_t seed)
    : labels_(std::move(labels)), p_(p), seed_(seed) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("noisy scorer probability must be in [0, 1]");
  }
}

std::string NoisyScorer::id() const { return fmt::format("noisy({})", p_); }

std::vector<ScoreResult> NoisyScorer::Score(
    std::span<const ScoreRequest> requests) const {
  std::vector<ScoreResult> out;
  for (const ScoreRequest& r : requests) {
    std::optional<bool> positive = labels_->IsPositive(r.dialogue, r.summary);
    if (!positive) {
      out.push_back(Unknown(r));
    } else if (*positive) {
      out.push_back(Uniform(r, -1.0));
    } else {
      out.push_back(Uniform(r, PairDraw(seed_, r) < p_ ? -2.0 : -0.5));
    }
  }
  return out;
}

std::string RandomScorer::id() const { return fmt::format("random({})", seed_); }

std::vector<ScoreResult> RandomScorer::Score(
    std::span<const ScoreRequest> requests) const {
  std::vector<ScoreResult> out;
  for (const ScoreRequest& r : requests) {
    out.push_back(Uniform(r, -3.0 + 2.99 * PairDraw(seed_, r)));
  }
  return out;
}

std::vector<ScoreResult> LexicalScorer::Score(
    std::span<const ScoreRequest> requests) const {
  static const double kSeen = std::log(0.9);
  static const double kUnseen = std::log(0.1);
  std::vector<ScoreResult> out;
  for (const ScoreRequest& r : requests) {
    std::vector<std::string> dialogue_tokens = MetricTokens(r.dialogue);
    std::unordered_set<std::string> vocabulary(dialogue_tokens.begin(),
                                               dialogue_tokens.end());
    TokenLogProbs tlp;
    for (std::string& token : MetricTokens(r.summary)) {
      tlp.logprobs.push_back(vocabulary.count(token) ? kSeen : kUnseen);
      tlp.tokens.push_back(std::move(token));
    }
    tlp.tokens.push_back("</s>");
    tlp.logprobs.push_back(kSeen);
    out.push_back({r.id, std::move(tlp), {}});
  }
  return out;
}

ReplayScorer ReplayScorer::FromFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open cassette " + path.string());
  ReplayScorer scorer;
  scorer.id_ = "replay:" + path.filename().string();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json record = json::parse(line);
      ScoreResult result;
      if (record.contains("error")) {
        result.error = record["error"].get<std::string>();
      } else {
        TokenLogProbs tlp;
        tlp.tokens = record.at("tokens").get<std::vector<std::string>>();
        tlp.logprobs = record.at("logprobs").get<std::vector<double>>();
        result.logprobs = std::move(tlp);
      }
      scorer.responses_[PairKey(record.at("dialogue").get<std::string>(),
                                record.at("summary").get<std::string>())] =
          std::move(result);
    } catch (const json::exception& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return scorer;
}

std::vector<ScoreResult> ReplayScorer::Score(
    std::span<const ScoreRequest> requests) const {
  std::vector<ScoreResult> out;
  for (const ScoreRequest& r : requests) {
    auto it = responses_.find(PairKey(r.dialogue, r.summary));
    if (it == responses_.end()) {
      out.push_back({r.id, std::nullopt, "pair not found in cassette"});
      continue;
    }
    ScoreResult result = it->second;
    result.id = r.id;
    out.push_back(std::move(result));
  }
  return out;
}

std::vector<ScoreResult> RecordingScorer::Score(
    std::span<const ScoreRequest> requests) const {
  std::vector<ScoreResult> results = inner_.Score(requests);
  std::unordered_map<std::string, const ScoreRequest*> by_id;
  for (const ScoreRequest& r : requests) by_id[r.id] = &r;
  std::lock_guard<std::mutex> lock(mu_);
  for (const ScoreResult& result : results) {
    auto it = by_id.find(result.id);
    if (it == by_id.end()) continue;
    const ScoreRequest& r = *it->second;
    entries_[{r.dialogue, r.summary}] = {r.dialogue, r.summary, result};
  }
  return results;
}

void RecordingScorer::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write cassette " + path.string());
  std::lock_guard<std::mutex> lock(mu_);
  for (const auto& [key, entry] : entries_) {
    ordered_json record = {{"dialogue", entry.dialogue},
                           {"summary", entry.summary}};
    if (entry.result.ok()) {
      record["tokens"] = entry.result.logprobs->tokens;
      record["logprobs"] = entry.result.logprobs->logprobs;
    } else {
      record["error"] = entry.result.error;
    }
    out << record.dump() << '\n';
  }
}

}  // namespace faceval
