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

#include "faceval/metaeval.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "faceval/error.h"
#include "faceval/parallel.h"
#include "faceval/random.h"

namespace faceval {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// floor(fraction * n) without losing whole units to rounding
// (0.29 * 100 = 28.999999999999996).
std::size_t FloorCount(double fraction, std::size_t n) {
  return static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(n) + 1e-9));
}

}  // namespace

std::string_view SeriesStrategyName(SeriesStrategy strategy) {
  return strategy == SeriesStrategy::kLdt ? "LDT" : "MDT";
}

void ModelSeries::Validate() const {
  if (points.size() < 3) {
    throw DomainError("model series '" + name + "' needs at least 3 points");
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].knob > points[i - 1].knob)) {
      throw DomainError("model series '" + name +
                        "' knobs must be strictly increasing");
    }
  }
}

ModelSeries ModelSeriesFromJson(const json& j) {
  ModelSeries series;
  try {
    series.name = j.value("name", std::string("series"));
    const std::string strategy = j.at("strategy").get<std::string>();
    if (strategy == "LDT") {
      series.strategy = SeriesStrategy::kLdt;
    } else if (strategy == "MDT") {
      series.strategy = SeriesStrategy::kMdt;
    } else {
      throw ParseError("unknown series strategy '" + strategy + "'");
    }
    for (const json& p : j.at("points")) {
      series.points.push_back(
          {p.at("model_id").get<std::string>(), p.at("knob").get<double>()});
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid model series: ") + e.what());
  }
  series.Validate();
  return series;
}

ModelSeries LoadModelSeries(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open series file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), std::nullopt, e.byte);
  }
  return ModelSeriesFromJson(j);
}

std::vector<double> LdtSchedule(double step) {
  if (!(step > 0.0 && step <= 1.0)) throw DomainError("step must be in (0, 1]");
  const long steps = std::lround(1.0 / step);
  std::vector<double> out;
  for (long i = 1; i <= steps; ++i) {
    out.push_back(static_cast<double>(i) / static_cast<double>(steps));
  }
  return out;
}

std::vector<double> MdtNoiseSchedule(double step) {
  if (!(step > 0.0 && step <= 1.0)) throw DomainError("step must be in (0, 1]");
  const long steps = std::lround(1.0 / step);
  std::vector<double> out;
  for (long i = steps; i >= 0; --i) {
    out.push_back(static_cast<double>(i) / static_cast<double>(steps));
  }
  return out;
}

Corpus MakeLdtSplit(const Corpus& corpus, double fraction,
                    std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw DomainError("LDT fraction must be in (0, 1], got " +
                      fmt::format("{}", fraction));
  }
  if (fraction == 1.0) return corpus;
  const std::size_t keep = FloorCount(fraction, corpus.entries.size());
  if (keep < 1) {
    throw DomainError(fmt::format(
        "LDT fraction {} of {} dialogues selects nothing", fraction,
        corpus.entries.size()));
  }
  SeededRng rng(DeriveSeed(seed, "ldt-split"));
  Corpus out;
  out.split = corpus.split;
  for (std::size_t i : rng.SampleIndices(corpus.entries.size(), keep)) {
    out.entries.push_back(corpus.entries[i]);
  }
  return out;
}

CorruptionResult CorruptDialogue(const Dialogue& dialogue,
                                 std::span<const TransformKind> kinds,
                                 std::uint64_t seed, const EntityTagger& tagger,
                                 const SwapOptions& options) {
  SeededRng rng(DeriveSeed(seed, dialogue.id, "corrupt"));
  std::vector<TransformKind> order;
  for (TransformKind kind : kinds) {
    if (!IsNegativeKind(kind)) {
      throw DomainError("dialogue corruption cannot use BT");
    }
    if (std::find(order.begin(), order.end(), kind) == order.end()) {
      order.push_back(kind);
    }
  }
  rng.Shuffle(order);

  const std::vector<std::string> speakers = ExtractSpeakers(dialogue);
  for (TransformKind kind : order) {
    std::vector<std::pair<std::size_t, Perturbation>> sites;
    for (std::size_t t = 0; t < dialogue.turns.size(); ++t) {
      const std::string& utterance = dialogue.turns[t].utterance;
      if (utterance.empty()) continue;
      for (Perturbation& p :
           ApplyTransform(kind, utterance, dialogue, tagger, rng, options)) {
        if (p.replacement.find_first_of("\r\n") != std::string::npos) continue;
        Dialogue edited = dialogue;
        edited.turns[t].utterance = p.result_text;
        Dialogue reparsed = ParseDialogueText(dialogue.id, edited.Render());
        if (reparsed.turns.size() != dialogue.turns.size() ||
            ExtractSpeakers(reparsed) != speakers) {
          continue;
        }
        sites.emplace_back(t, std::move(p));
      }
    }
    if (sites.empty()) continue;
    auto& [turn, edit] = sites[rng.UniformIndex(sites.size())];
    CorruptionResult result;
    result.dialogue = dialogue;
    result.dialogue.turns[turn].utterance = edit.result_text;
    result.applied = kind;
    result.turn_index = turn;
    result.edit = std::move(edit);
    return result;
  }
  return {dialogue, std::nullopt, 0, std::nullopt};
}

MdtResult MakeMdtCorpus(const Corpus& corpus, double noise_ratio,
                        std::uint64_t seed, const EntityTagger& tagger,
                        const MdtOptions& options) {
  if (!(noise_ratio >= 0.0 && noise_ratio <= 1.0)) {
    throw DomainError("MDT noise ratio must be in [0, 1], got " +
                      fmt::format("{}", noise_ratio));
  }
  MdtResult result;
  result.corpus = corpus;
  const std::size_t n = corpus.entries.size();
  const std::size_t k = noise_ratio == 1.0 ? n : FloorCount(noise_ratio, n);
  if (k == 0) return result;

  SeededRng rng(DeriveSeed(seed, "mdt-select"));
  const std::vector<std::size_t> chosen = rng.SampleIndices(n, k);
  std::vector<CorruptionResult> corrupted(chosen.size());
  ParallelFor(chosen.size(), options.jobs, [&](std::size_t i) {
    CorruptionResult& out = corrupted[i];
    out.dialogue = corpus.entries[chosen[i]].dialogue;
    for (std::size_t e = 0; e < options.edits_per_dialogue; ++e) {
      const std::uint64_t edit_seed =
          e == 0 ? seed : DeriveSeed(seed, "edit", std::to_string(e));
      CorruptionResult step = CorruptDialogue(out.dialogue, options.kinds,
                                              edit_seed, tagger, options.swap);
      if (!step.changed()) break;
      out = std::move(step);
    }
  });
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    CorpusEntry& entry = result.corpus.entries[chosen[i]];
    if (corrupted[i].changed()) {
      entry.dialogue = std::move(corrupted[i].dialogue);
      result.corrupted_ids.push_back(entry.dialogue.id);
    } else {
      result.unchanged_ids.push_back(entry.dialogue.id);
    }
  }
  return result;
}

std::vector<double> AverageRanks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) {
      ++j;
    }
    // Ranks i+1 .. j+1 share their mean.
    const double mean_rank = (static_cast<double>(i + 1) +
                              static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

double Spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DomainError("Spearman needs vectors of equal length");
  }
  if (x.size() < 3) throw DomainError("Spearman needs at least 3 points");
  for (double v : x) {
    if (!std::isfinite(v)) throw DomainError("non-finite value in ranks");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw DomainError("non-finite value in scores");
  }
  const std::vector<double> rx = AverageRanks(x);
  const std::vector<double> ry = AverageRanks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw UndefinedCorrelationError(
        "rank correlation is undefined for a constant vector");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<MetricScoreRecord> ParseMetricScores(std::istream& in) {
  std::vector<MetricScoreRecord> out;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    MetricScoreRecord record;
    try {
      json j = json::parse(line);
      record = {j.at("model_id").get<std::string>(),
                j.at("metric").get<std::string>(), j.at("score").get<double>()};
    } catch (const json::exception& e) {
      throw ParseError(e.what(), line_no);
    }
    if (!seen.insert({record.model_id, record.metric}).second) {
      throw IntegrityError(fmt::format("line {}: repeated score for model '{}' "
                                       "metric '{}'",
                                       line_no, record.model_id, record.metric));
    }
    out.push_back(std::move(record));
  }
  return out;
}

std::vector<MetricScoreRecord> LoadMetricScores(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open score file " + path.string());
  return ParseMetricScores(in);
}

void AppendMetricScores(const std::filesystem::path& path,
                        std::span<const MetricScoreRecord> records) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot append to score file " + path.string());
  for (const MetricScoreRecord& r : records) {
    ordered_json j = {{"model_id", r.model_id},
                      {"metric", r.metric},
                      {"score", r.score}};
    out << j.dump() << '\n';
  }
}

const CorrelationCell* CorrelationReport::Find(std::string_view series_name,
                                               std::string_view metric) const {
  for (const CorrelationCell& cell : cells) {
    if (cell.series == series_name && cell.metric == metric) return &cell;
  }
  return nullptr;
}

CorrelationReport BuildCorrelationReport(
    std::span<const ModelSeries> series,
    std::span<const MetricScoreRecord> scores) {
  std::map<std::pair<std::string, std::string>, double> table;
  CorrelationReport report;
  for (const MetricScoreRecord& r : scores) {
    table[{r.model_id, r.metric}] = r.score;
  }
  for (const ModelSeries& s : series) {
    s.Validate();
    report.series.push_back(s.name);
    std::set<std::string> models;
    for (const SeriesPoint& p : s.points) models.insert(p.model_id);
    // Metrics this series is scored with, in first-appearance order.
    std::vector<std::string> metrics;
    for (const MetricScoreRecord& r : scores) {
      if (models.count(r.model_id) &&
          std::find(metrics.begin(), metrics.end(), r.metric) == metrics.end()) {
        metrics.push_back(r.metric);
      }
    }
    for (const std::string& metric : metrics) {
      if (std::find(report.metrics.begin(), report.metrics.end(), metric) ==
          report.metrics.end()) {
        report.metrics.push_back(metric);
      }
      std::vector<double> knobs, values;
      for (const SeriesPoint& p : s.points) {
        auto it = table.find({p.model_id, metric});
        if (it == table.end()) {
          throw MissingScoreError("series '" + s.name + "': no '" + metric +
                                  "' score for model '" + p.model_id + "'");
        }
        knobs.push_back(p.knob);
        values.push_back(it->second);
      }
      CorrelationCell cell{s.name, metric, std::nullopt, knobs.size()};
      try {
        cell.rho = Spearman(knobs, values);
      } catch (const UndefinedCorrelationError&) {
        cell.rho.reset();
      }
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

std::string RenderCorrelationTable(const CorrelationReport& report) {
  std::size_t metric_width = 8;
  for (const std::string& m : report.metrics) {
    metric_width = std::max(metric_width, m.size() + 2);
  }
  std::vector<std::size_t> widths;
  for (const std::string& s : report.series) {
    widths.push_back(std::max<std::size_t>(9, s.size() + 2));
  }
  std::ostringstream out;
  out << fmt::format("{:<{}}", "Metric", metric_width);
  for (std::size_t c = 0; c < report.series.size(); ++c) {
    out << fmt::format("{:>{}}", report.series[c], widths[c]);
  }
  out << '\n';
  for (const std::string& metric : report.metrics) {
    out << fmt::format("{:<{}}", metric, metric_width);
    for (std::size_t c = 0; c < report.series.size(); ++c) {
      const CorrelationCell* cell = report.Find(report.series[c], metric);
      std::string value = "";
      if (cell == nullptr) {
        value = "";
      } else if (!cell->rho) {
        value = "—";
      } else {
        value = fmt::format("{:.2f}", 100.0 * *cell->rho);
      }
      // Pad by code points so the em dash lines up.
      const std::size_t shown = value == "—" ? 1 : value.size();
      out << std::string(widths[c] > shown ? widths[c] - shown : 0, ' ')
          << value;
    }
    out << '\n';
  }
  return out.str();
}

ordered_json CorrelationReportToJson(const CorrelationReport& report) {
  ordered_json cells = ordered_json::array();
  for (const CorrelationCell& cell : report.cells) {
    ordered_json j = {{"series", cell.series},
                      {"metric", cell.metric},
                      {"n", cell.n}};
    if (cell.rho) {
      j["rho"] = *cell.rho;
      j["rho_x100"] = 100.0 * *cell.rho;
    } else {
      j["rho"] = nullptr;
      j["rho_x100"] = nullptr;
    }
    cells.push_back(std::move(j));
  }
  return {{"series", report.series},
          {"metrics", report.metrics},
          {"cells", std::move(cells)}};
}

}  // namespace faceval
