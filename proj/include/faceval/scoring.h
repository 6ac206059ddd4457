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

// Model-level faithfulness scoring.
//
// A scorer returns, for a (dialogue, summary) pair, the teacher-forced
// natural-log probability of every summary token (end-of-sequence
// included). The generation score of a summary is
//
//   GS = (sum of token log-probabilities) / L^alpha
//
// and the factuality score of a model is the per-dialogue fraction of
// (positive, negative) pairs with GS(positive) > GS(negative), averaged
// over dialogues. Ties count as losses.

#ifndef FACEVAL_SCORING_H_
#define FACEVAL_SCORING_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "faceval/probes.h"
#include "faceval/transform_kind.h"
#include "json.hpp"

namespace faceval {

struct TokenLogProbs {
  std::vector<std::string> tokens;
  std::vector<double> logprobs;

  // Throws DomainError unless lengths match, L >= 1, and every logprob is
  // finite and <= 0.
  void Validate() const;
  bool operator==(const TokenLogProbs&) const = default;
};

struct GenerationScore {
  double value = 0.0;
  std::size_t length = 0;
  double alpha = 1.0;
};

// Throws DomainError for L = 0, alpha < 0 or invalid log-probabilities.
GenerationScore ComputeGenerationScore(const TokenLogProbs& tlp,
                                       double alpha = 1.0);

struct ScoreRequest {
  std::string id;
  std::string dialogue;
  std::string summary;
};

struct ScoreResult {
  std::string id;
  std::optional<TokenLogProbs> logprobs;
  std::string error;  // Set when logprobs is empty.

  bool ok() const { return logprobs.has_value(); }
};

// Implementations must be safe to call from several threads at once.
// Throwing ServiceError aborts the whole scoring run; any other exception
// fails only the pairs of that call.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::vector<ScoreResult> Score(
      std::span<const ScoreRequest> requests) const = 0;
  virtual std::string id() const = 0;
};

// Wire protocol bodies.
nlohmann::json ScoreRequestsToJson(std::span<const ScoreRequest> requests);
std::vector<ScoreRequest> ScoreRequestsFromJson(const nlohmann::json& body);
nlohmann::json ScoreResultsToJson(std::span<const ScoreResult> results);
// Throws ParseError when the body does not follow the protocol.
std::vector<ScoreResult> ScoreResultsFromJson(const nlohmann::json& body);

struct ScoredSummary {
  std::string text;
  std::optional<double> gs;
  double logprob_sum = 0.0;
  std::size_t length = 0;
  std::string error;
};

struct ScoredProbeSet {
  std::string dialogue_id;
  std::vector<ScoredSummary> positives;
  std::vector<ScoredSummary> negatives;
  std::vector<TransformKind> negative_kinds;  // Parallel to negatives.

  // True when any summary of the set could not be scored.
  bool failed() const;
};

struct ScoredCorpus {
  double alpha = 1.0;
  std::vector<ScoredProbeSet> sets;
};

struct ScoringOptions {
  double alpha = 1.0;
  std::size_t batch_size = 16;
  std::size_t max_in_flight = 4;
};

// Scores every positive and negative of every probe set. Per-pair failures
// are recorded on the summary; ServiceError from the scorer propagates.
ScoredCorpus ScoreProbeCorpus(const ProbeCorpus& probes, const Scorer& scorer,
                              const ScoringOptions& options = {});

struct DialogueOutcome {
  std::string dialogue_id;
  std::size_t wins = 0;
  std::size_t comparisons = 0;
};

struct KindOutcome {
  double fs = 0.0;
  std::size_t dialogues = 0;
  std::size_t wins = 0;
  std::size_t comparisons = 0;
};

struct FactualityReport {
  double fs_overall = 0.0;
  std::map<TransformKind, KindOutcome> per_kind;  // Kinds with data only.
  std::size_t dialogues_used = 0;
  std::size_t dialogues_failed = 0;
  std::size_t dialogues_without_negatives = 0;
  std::size_t total_wins = 0;
  std::size_t total_comparisons = 0;
  double alpha = 1.0;
  std::vector<DialogueOutcome> dialogues;  // Sorted by dialogue id.
};

// Throws DomainError when no dialogue has M >= 1 and N >= 1 scored
// summaries.
FactualityReport ComputeFactualityScore(const ScoredCorpus& scored);

nlohmann::ordered_json FactualityReportToJson(const FactualityReport& report);
nlohmann::ordered_json ScoredCorpusToJson(const ScoredCorpus& scored);
// Percent table with an All column followed by NG PS SS ES DS NS.
std::string RenderFactualityTable(const FactualityReport& report,
                                  std::string_view model_label);

// Positive/negative lookup for the mock scorers, keyed by the exact
// (dialogue, summary) strings of a probe corpus.
class ProbeLabels {
 public:
  explicit ProbeLabels(const ProbeCorpus& probes);
  std::optional<bool> IsPositive(std::string_view dialogue,
                                 std::string_view summary) const;

 private:
  std::unordered_map<std::string, bool> labels_;
};

// Whitespace tokens of the summary plus "</s>".
std::vector<std::string> MockTokens(std::string_view summary);

// Positives get log-probability 0 per token and negatives -1, so
// GS(positive) > GS(negative) for every alpha. `inverted` swaps the roles.
class OracleScorer : public Scorer {
 public:
  OracleScorer(std::shared_ptr<const ProbeLabels> labels, bool inverted = false);
  std::vector<ScoreResult> Score(
      std::span<const ScoreRequest> requests) const override;
  std::string id() const override {
    return inverted_ ? "anti-oracle" : "oracle";
  }

 private:
  std::shared_ptr<const ProbeLabels> labels_;
  bool inverted_;
};

// Positives score GS = -1; each negative independently scores -2 (ranked
// correctly) with probability p and -0.5 otherwise, at alpha = 1. Draws are
// keyed by (seed, dialogue, summary), so results do not depend on batching.
class NoisyScorer : public Scorer {
 public:
  NoisyScorer(std::shared_ptr<const ProbeLabels> labels, double p,
              std::uint64_t seed);
  std::vector<ScoreResult> Score(
      std::span<const ScoreRequest> requests) const override;
  std::string id() const override;

 private:
  std::shared_ptr<const ProbeLabels> labels_;
  double p_;
  std::uint64_t seed_;
};

// Every summary gets a constant per-token log-probability drawn uniformly
// from [-3, -0.01), keyed by (seed, dialogue, summary). Model-free.
class RandomScorer : public Scorer {
 public:
  explicit RandomScorer(std::uint64_t seed) : seed_(seed) {}
  std::vector<ScoreResult> Score(
      std::span<const ScoreRequest> requests) const override;
  std::string id() const override;

 private:
  std::uint64_t seed_;
};

// log(0.9) for tokens that occur in the dialogue (and for "</s>"), log(0.1)
// otherwise. Tokens are lowercased with surrounding punctuation stripped.
class LexicalScorer : public Scorer {
 public:
  std::vector<ScoreResult> Score(
      std::span<const ScoreRequest> requests) const override;
  std::string id() const override { return "lexical"; }
};

// Serves recorded responses, keyed by (dialogue, summary). Cassette files
// are JSON lines of {"dialogue", "summary", "tokens", "logprobs"} or
// {"dialogue", "summary", "error"}.
class ReplayScorer : public Scorer {
 public:
  static ReplayScorer FromFile(const std::filesystem::path& path);
  std::vector<ScoreResult> Score(
      std::span<const ScoreRequest> requests) const override;
  std::string id() const override { return id_; }

 private:
  std::unordered_map<std::string, ScoreResult> responses_;
  std::string id_ = "replay";
};

// Forwards to another scorer and keeps every response for writing a
// cassette.
class RecordingScorer : public Scorer {
 public:
  explicit RecordingScorer(const Scorer& inner) : inner_(inner) {}
  std::vector<ScoreResult> Score(
      std::span<const ScoreRequest> requests) const override;
  std::string id() const override { return inner_.id(); }
  // Entries sorted by (dialogue, summary).
  void Save(const std::filesystem::path& path) const;

 private:
  struct Entry {
    std::string dialogue;
    std::string summary;
    ScoreResult result;
  };
  const Scorer& inner_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<std::string, std::string>, Entry> entries_;
};

}  // namespace faceval

#endif  // FACEVAL_SCORING_H_
