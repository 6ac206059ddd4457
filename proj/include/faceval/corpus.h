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

// Dialogue-summary corpora and released faithfulness annotations.
//
// Corpus files are JSON lines, one dialogue per line:
//
//   {"id": "13818513", "dialogue": [{"speaker": "Amanda",
//     "utterance": "I baked cookies."}], "summary": "Amanda baked cookies."}
//
// For convenience "dialogue" may also be the raw flat text
// ("Amanda: I baked cookies.\nJerry: ..."), which is split into turns with
// ParseDialogueText(). Files are always written in the array form.

#ifndef FACEVAL_CORPUS_H_
#define FACEVAL_CORPUS_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "faceval/transform_kind.h"

namespace faceval {

enum class Split { kTrain, kVal, kTest };

std::string_view SplitName(Split split);
// Accepts "train", "val", "validation", "test".
std::optional<Split> ParseSplit(std::string_view name);

struct Turn {
  std::string speaker;
  std::string utterance;

  bool operator==(const Turn&) const = default;
};

struct Dialogue {
  std::string id;
  std::vector<Turn> turns;

  // "speaker: utterance" per turn, joined by '\n'.
  std::string Render() const;

  bool operator==(const Dialogue&) const = default;
};

// Splits flat dialogue text into turns by the colon rule: each line is
// "Speaker: utterance", split at the first colon. Lines without a colon
// continue the previous turn. Throws ParseError when the first non-empty
// line has no speaker or a speaker name is empty.
Dialogue ParseDialogueText(std::string id, std::string_view text);

struct ReferenceOrigin {
  bool operator==(const ReferenceOrigin&) const = default;
};
struct ParaphraseOrigin {
  bool operator==(const ParaphraseOrigin&) const = default;
};
struct PerturbedOrigin {
  TransformKind kind;
  std::size_t parent_index;
  bool operator==(const PerturbedOrigin&) const = default;
};
struct ModelOutputOrigin {
  std::string model_id;
  bool operator==(const ModelOutputOrigin&) const = default;
};

using SummaryOrigin = std::variant<ReferenceOrigin, ParaphraseOrigin,
                                   PerturbedOrigin, ModelOutputOrigin>;

// "reference", "paraphrase", "perturbed:NG:0", "model:<id>".
std::string OriginToString(const SummaryOrigin& origin);
SummaryOrigin ParseOrigin(std::string_view text);

struct Summary {
  std::string text;
  SummaryOrigin origin;

  bool operator==(const Summary&) const = default;
};

struct CorpusEntry {
  Dialogue dialogue;
  Summary reference;

  bool operator==(const CorpusEntry&) const = default;
};

struct Corpus {
  Split split = Split::kTest;
  std::vector<CorpusEntry> entries;

  bool operator==(const Corpus&) const = default;
};

// Throws ParseError (with line number) on malformed records and
// IntegrityError on duplicate dialogue ids.
Corpus ParseCorpus(std::istream& in, Split split);
Corpus LoadCorpus(const std::filesystem::path& path, Split split);

void WriteCorpus(const Corpus& corpus, std::ostream& out);
std::string SerializeCorpus(const Corpus& corpus);
void SaveCorpus(const Corpus& corpus, const std::filesystem::path& path);

struct CorpusStats {
  std::size_t dialogues = 0;
  double mean_speakers = 0.0;
  double mean_turns = 0.0;
  // Whitespace tokens.
  double mean_summary_length = 0.0;
};

// Throws DomainError on an empty corpus.
CorpusStats ComputeCorpusStats(const Corpus& corpus);

enum class ErrorType { kSubObjE, kProE, kNegE, kParE, kHalE, kOthE };

inline constexpr std::array<ErrorType, 6> kAllErrorTypes = {
    ErrorType::kSubObjE, ErrorType::kProE, ErrorType::kNegE,
    ErrorType::kParE,    ErrorType::kHalE, ErrorType::kOthE};

std::string_view ErrorTypeName(ErrorType type);
std::optional<ErrorType> ParseErrorType(std::string_view name);

// Final adjudicated verdict for one (dialogue, summary source). An empty
// error set means the summary was judged faithful.
struct AnnotationRecord {
  std::string dialogue_id;
  std::string summary_source;
  std::set<ErrorType> errors;
  bool adjudicated = false;

  bool faithful() const { return errors.empty(); }
  bool operator==(const AnnotationRecord&) const = default;
};

struct AnnotationIssue {
  std::size_t line;
  std::string message;
};

struct AnnotationParseResult {
  std::vector<AnnotationRecord> records;
  std::vector<AnnotationIssue> issues;
};

// Lenient parse: every bad line becomes an issue and is skipped.
AnnotationParseResult ParseAnnotations(std::istream& in);
// Strict load: throws ParseError listing every issue (unknown labels are
// named).
std::vector<AnnotationRecord> LoadAnnotations(
    const std::filesystem::path& path);

struct AnnotationRow {
  std::string source;
  std::size_t records = 0;
  double any_error = 0.0;
  std::map<ErrorType, double> per_type;
};

// Sources named "human" or "reference" (case-insensitive) are the human
// references; everything else is a model.
bool IsHumanSource(std::string_view source);

struct AnnotationReport {
  // One row per source, sorted by source name.
  std::vector<AnnotationRow> rows;
  // All model sources pooled; absent when there are none.
  std::optional<AnnotationRow> pooled_models;
};

// Throws DomainError on empty input.
AnnotationReport BuildAnnotationReport(
    const std::vector<AnnotationRecord>& records);

}  // namespace faceval

#endif  // FACEVAL_CORPUS_H_
