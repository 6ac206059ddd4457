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

// Reference-based n-gram metrics. Different ROUGE/BLEU packages disagree
// in tokenization and smoothing, so both are pinned here:
//
//  * tokens: lowercase, split on whitespace, strip leading and trailing
//    punctuation from each token, drop tokens that become empty;
//  * ROUGE scores are F1 of clipped overlap precision and recall;
//  * BLEU-4 is sentence level with uniform weights and the closest
//    reference length for the brevity penalty. For n >= 2, an n-gram order
//    with zero matches uses (0 + 1) / (total + 1).

#ifndef FACEVAL_BASELINES_H_
#define FACEVAL_BASELINES_H_

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace faceval {

std::vector<std::string> MetricTokens(std::string_view text);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// n must be >= 1. When neither text has an n-gram (both shorter than n),
// identical token sequences score 1 and anything else 0.
PrecisionRecall RougeNScores(std::string_view candidate,
                             std::string_view reference, int n);
double RougeN(std::string_view candidate, std::string_view reference, int n);

PrecisionRecall RougeLScores(std::string_view candidate,
                             std::string_view reference);
double RougeL(std::string_view candidate, std::string_view reference);

// Length of the longest common subsequence of two token sequences.
std::size_t LcsLength(std::span<const std::string> a,
                      std::span<const std::string> b);

struct BleuBreakdown {
  std::array<std::size_t, 4> matches{};
  std::array<std::size_t, 4> totals{};
  std::array<double, 4> precisions{};
  std::size_t candidate_length = 0;
  std::size_t reference_length = 0;
  double brevity_penalty = 1.0;
  double bleu = 0.0;
};

// Throws DomainError when `references` is empty.
BleuBreakdown Bleu4Breakdown(std::string_view candidate,
                             std::span<const std::string> references);
double Bleu4(std::string_view candidate,
             std::span<const std::string> references);

enum class BaselineMetric { kRouge1, kRouge2, kRougeL, kBleu4 };

inline constexpr std::array<BaselineMetric, 4> kBaselineMetrics = {
    BaselineMetric::kRouge1, BaselineMetric::kRouge2, BaselineMetric::kRougeL,
    BaselineMetric::kBleu4};

std::string_view BaselineMetricName(BaselineMetric metric);

struct MetricScore {
  BaselineMetric metric;
  double value = 0.0;
};

// All four metrics for one candidate against one reference.
std::vector<MetricScore> ScoreBaselines(std::string_view candidate,
                                        std::string_view reference);

}  // namespace faceval

#endif  // FACEVAL_BASELINES_H_
