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

#include "faceval/baselines.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

#include <spdlog/spdlog.h>

#include "faceval/error.h"

namespace faceval {

namespace {

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

NgramCounts CountNgrams(const std::vector<std::string>& tokens, int n) {
  NgramCounts counts;
  if (n <= 0 || tokens.size() < static_cast<std::size_t>(n)) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + i,
                                      tokens.begin() + i + n)];
  }
  return counts;
}

std::size_t Total(const NgramCounts& counts) {
  std::size_t total = 0;
  for (const auto& [gram, c] : counts) total += c;
  return total;
}

std::size_t ClippedOverlap(const NgramCounts& candidate,
                           const NgramCounts& reference) {
  std::size_t overlap = 0;
  for (const auto& [gram, c] : candidate) {
    auto it = reference.find(gram);
    if (it != reference.end()) overlap += std::min(c, it->second);
  }
  return overlap;
}

PrecisionRecall FromCounts(std::size_t overlap, std::size_t candidate_total,
                           std::size_t reference_total) {
  PrecisionRecall out;
  if (candidate_total == 0 || reference_total == 0 || overlap == 0) return out;
  out.precision = static_cast<double>(overlap) / candidate_total;
  out.recall = static_cast<double>(overlap) / reference_total;
  out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  return out;
}

bool WarnIfEmpty(const std::vector<std::string>& candidate,
                 const std::vector<std::string>& reference) {
  if (!candidate.empty() && !reference.empty()) return false;
  spdlog::warn("metric input tokenizes to nothing; scoring 0");
  return true;
}

}  // namespace

std::vector<std::string> MetricTokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::istringstream in{std::string(text)};
  std::string raw;
  auto punct = [](char c) { return std::ispunct(static_cast<unsigned char>(c)); };
  while (in >> raw) {
    std::size_t begin = 0;
    std::size_t end = raw.size();
    while (begin < end && punct(raw[begin])) ++begin;
    while (end > begin && punct(raw[end - 1])) --end;
    if (begin == end) continue;
    std::string token = raw.substr(begin, end - begin);
    for (char& c : token) {
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    tokens.push_back(std::move(token));
  }
  return tokens;
}

PrecisionRecall RougeNScores(std::string_view candidate,
                             std::string_view reference, int n) {
  if (n < 1) throw DomainError("ROUGE-N needs n >= 1");
  const auto cand = MetricTokens(candidate);
  const auto ref = MetricTokens(reference);
  if (WarnIfEmpty(cand, ref)) return {};
  const NgramCounts c = CountNgrams(cand, n);
  const NgramCounts r = CountNgrams(ref, n);
  if (c.empty() && r.empty()) {
    return cand == ref ? PrecisionRecall{1.0, 1.0, 1.0} : PrecisionRecall{};
  }
  return FromCounts(ClippedOverlap(c, r), Total(c), Total(r));
}

double RougeN(std::string_view candidate, std::string_view reference, int n) {
  return RougeNScores(candidate, reference, n).f1;
}

std::size_t LcsLength(std::span<const std::string> a,
                      std::span<const std::string> b) {
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t above = row[j];
      row[j] = a[i - 1] == b[j - 1] ? diagonal + 1 : std::max(row[j], row[j - 1]);
      diagonal = above;
    }
  }
  return row[b.size()];
}

PrecisionRecall RougeLScores(std::string_view candidate,
                             std::string_view reference) {
  const auto cand = MetricTokens(candidate);
  const auto ref = MetricTokens(reference);
  if (WarnIfEmpty(cand, ref)) return {};
  return FromCounts(LcsLength(cand, ref), cand.size(), ref.size());
}

double RougeL(std::string_view candidate, std::string_view reference) {
  return RougeLScores(candidate, reference).f1;
}

BleuBreakdown Bleu4Breakdown(std::string_view candidate,
                             std::span<const std::string> references) {
  if (references.empty()) throw DomainError("BLEU needs at least one reference");
  BleuBreakdown out;
  const auto cand = MetricTokens(candidate);
  std::vector<std::vector<std::string>> refs;
  for (const std::string& r : references) refs.push_back(MetricTokens(r));
  out.candidate_length = cand.size();
  if (cand.empty()) {
    spdlog::warn("BLEU candidate tokenizes to nothing; scoring 0");
    return out;
  }

  double log_sum = 0.0;
  for (int n = 1; n <= 4; ++n) {
    const NgramCounts c = CountNgrams(cand, n);
    NgramCounts max_ref;
    for (const auto& ref : refs) {
      for (const auto& [gram, count] : CountNgrams(ref, n)) {
        max_ref[gram] = std::max(max_ref[gram], count);
      }
    }
    const std::size_t matches = ClippedOverlap(c, max_ref);
    const std::size_t total = Total(c);
    out.matches[n - 1] = matches;
    out.totals[n - 1] = total;
    double precision;
    if (matches > 0) {
      precision = static_cast<double>(matches) / total;
    } else if (n >= 2) {
      precision = 1.0 / static_cast<double>(total + 1);
    } else {
      precision = 0.0;
    }
    out.precisions[n - 1] = precision;
    if (precision == 0.0) return out;
    log_sum += std::log(precision);
  }

  std::size_t closest = refs.front().size();
  for (const auto& ref : refs) {
    const auto diff = [&](std::size_t len) {
      return len > cand.size() ? len - cand.size() : cand.size() - len;
    };
    if (diff(ref.size()) < diff(closest) ||
        (diff(ref.size()) == diff(closest) && ref.size() < closest)) {
      closest = ref.size();
    }
  }
  out.reference_length = closest;
  out.brevity_penalty =
      cand.size() >= closest
          ? 1.0
          : std::exp(1.0 - static_cast<double>(closest) / cand.size());
  out.bleu = out.brevity_penalty * std::exp(log_sum / 4.0);
  return out;
}

double Bleu4(std::string_view candidate,
             std::span<const std::string> references) {
  return Bleu4Breakdown(candidate, references).bleu;
}

std::string_view BaselineMetricName(BaselineMetric metric) {
  switch (metric) {
    case BaselineMetric::kRouge1: return "ROUGE-1";
    case BaselineMetric::kRouge2: return "ROUGE-2";
    case BaselineMetric::kRougeL: return "ROUGE-L";
    case BaselineMetric::kBleu4: return "BLEU-4";
  }
  return "?";
}

std::vector<MetricScore> ScoreBaselines(std::string_view candidate,
                                        std::string_view reference) {
  const std::string refs[] = {std::string(reference)};
  return {{BaselineMetric::kRouge1, RougeN(candidate, reference, 1)},
          {BaselineMetric::kRouge2, RougeN(candidate, reference, 2)},
          {BaselineMetric::kRougeL, RougeL(candidate, reference)},
          {BaselineMetric::kBleu4, Bleu4(candidate, refs)}};
}

}  // namespace faceval
