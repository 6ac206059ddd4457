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

// Meta-evaluation of faithfulness metrics against model series of known
// capability order.
//
// Two series are prepared on the corpus side. Limited data training (LDT)
// trains on growing fractions of the clean training set; mixed data
// training (MDT) replaces a fraction of training dialogues with corrupted
// copies. Training happens elsewhere; this module writes the training
// corpora and correlates externally produced metric scores with the
// intended ranks.

#ifndef FACEVAL_METAEVAL_H_
#define FACEVAL_METAEVAL_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "faceval/corpus.h"
#include "faceval/textproc.h"
#include "faceval/transforms.h"
#include "json.hpp"

namespace faceval {

enum class SeriesStrategy { kLdt, kMdt };

std::string_view SeriesStrategyName(SeriesStrategy strategy);

struct SeriesPoint {
  std::string model_id;
  // Training-data fraction (LDT) or clean-data ratio (MDT). Higher means a
  // more capable model.
  double knob = 0.0;
};

struct ModelSeries {
  std::string name;
  SeriesStrategy strategy = SeriesStrategy::kMdt;
  std::vector<SeriesPoint> points;

  // Throws DomainError unless knobs are strictly increasing and there are
  // at least three points.
  void Validate() const;
};

// {"name": str, "strategy": "LDT"|"MDT",
//  "points": [{"model_id": str, "knob": float}]}
ModelSeries ModelSeriesFromJson(const nlohmann::json& j);
ModelSeries LoadModelSeries(const std::filesystem::path& path);

// Data fractions step, 2*step, ..., 1.0 (20 points for step 0.05).
std::vector<double> LdtSchedule(double step = 0.05);
// Noise ratios 1.0, 1.0 - step, ..., 0.0 (21 points for step 0.05).
std::vector<double> MdtNoiseSchedule(double step = 0.05);

// Uniform sample without replacement of floor(fraction * n) entries, in
// corpus order. fraction == 1 returns the corpus unchanged. Throws
// DomainError when fraction is outside (0, 1] or the sample would be empty.
Corpus MakeLdtSplit(const Corpus& corpus, double fraction, std::uint64_t seed);

struct CorruptionResult {
  Dialogue dialogue;
  std::optional<TransformKind> applied;  // Empty: nothing applied.
  std::size_t turn_index = 0;
  std::optional<Perturbation> edit;  // On the utterance of turn_index.

  bool changed() const { return applied.has_value(); }
};

// Applies one transform to the dialogue with the dialogue as its own
// source. Kinds are tried in a seeded random order; the first kind with an
// applicable site contributes one uniformly chosen edit. Edits are confined
// to utterances, and an edit that would change the turn structure is
// rejected. Returns the dialogue unchanged when nothing applies.
CorruptionResult CorruptDialogue(const Dialogue& dialogue,
                                 std::span<const TransformKind> kinds,
                                 std::uint64_t seed, const EntityTagger& tagger,
                                 const SwapOptions& options = {});

struct MdtResult {
  Corpus corpus;
  std::vector<std::string> corrupted_ids;
  // Selected for corruption but with no applicable site.
  std::vector<std::string> unchanged_ids;
};

struct MdtOptions {
  std::vector<TransformKind> kinds{kNegativeKinds.begin(),
                                   kNegativeKinds.end()};
  // Successive CorruptDialogue passes per selected dialogue.
  std::size_t edits_per_dialogue = 1;
  SwapOptions swap;
  std::size_t jobs = 1;
};

// Corrupts the dialogues (never the summaries) of floor(noise_ratio * n)
// seeded-chosen entries. Throws DomainError for a ratio outside [0, 1].
MdtResult MakeMdtCorpus(const Corpus& corpus, double noise_ratio,
                        std::uint64_t seed, const EntityTagger& tagger,
                        const MdtOptions& options = {});

// Average ranks (1-based); tied values share the mean of their ranks.
std::vector<double> AverageRanks(std::span<const double> values);

// Pearson correlation of the average-ranked vectors. Throws DomainError for
// mismatched lengths or fewer than three points, and
// UndefinedCorrelationError when either vector is constant.
double Spearman(std::span<const double> x, std::span<const double> y);

struct MetricScoreRecord {
  std::string model_id;
  std::string metric;
  double score = 0.0;
};

// JSON lines of {"model_id": str, "metric": str, "score": float}. Throws
// ParseError with the line number, IntegrityError on a repeated
// (model_id, metric).
std::vector<MetricScoreRecord> ParseMetricScores(std::istream& in);
std::vector<MetricScoreRecord> LoadMetricScores(
    const std::filesystem::path& path);
void AppendMetricScores(const std::filesystem::path& path,
                        std::span<const MetricScoreRecord> records);

struct CorrelationCell {
  std::string series;
  std::string metric;
  std::optional<double> rho;  // Empty when undefined (constant scores).
  std::size_t n = 0;
};

struct CorrelationReport {
  std::vector<std::string> series;   // Column order.
  std::vector<std::string> metrics;  // Row order (first appearance).
  std::vector<CorrelationCell> cells;

  const CorrelationCell* Find(std::string_view series,
                              std::string_view metric) const;
};

// One Spearman rho per (series, metric) between knobs and scores. A metric
// scored for any model of a series must be scored for all of its models,
// otherwise MissingScoreError names the gap.
CorrelationReport BuildCorrelationReport(
    std::span<const ModelSeries> series,
    std::span<const MetricScoreRecord> scores);

// Rows are metrics, columns are series, values are rho x 100 with "—" for
// undefined correlations.
std::string RenderCorrelationTable(const CorrelationReport& report);
nlohmann::ordered_json CorrelationReportToJson(const CorrelationReport& report);

}  // namespace faceval

#endif  // FACEVAL_METAEVAL_H_
