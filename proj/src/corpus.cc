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

#include "faceval/corpus.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "faceval/error.h"
#include "json.hpp"

namespace faceval {

namespace {

using json = nlohmann::ordered_json;

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool IsBlank(std::string_view s) { return Trim(s).empty(); }

std::string FlattenNewlines(std::string_view s) {
  std::string out(s);
  std::replace(out.begin(), out.end(), '\n', ' ');
  std::replace(out.begin(), out.end(), '\r', ' ');
  return out;
}

void ValidateSpeaker(std::string_view speaker) {
  if (speaker.empty()) throw ParseError("empty speaker name");
  if (speaker.find_first_of(":\n\r") != std::string_view::npos) {
    throw ParseError("speaker name contains a colon or newline: '" +
                     std::string(speaker) + "'");
  }
}

std::size_t CountWhitespaceTokens(std::string_view text) {
  std::size_t count = 0;
  bool in_token = false;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      in_token = false;
    } else if (!in_token) {
      in_token = true;
      ++count;
    }
  }
  return count;
}

std::string Lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

CorpusEntry ParseEntry(const std::string& line) {
  json record = json::parse(line);
  if (!record.is_object()) throw ParseError("record is not a JSON object");
  for (const char* key : {"id", "dialogue", "summary"}) {
    if (!record.contains(key)) {
      throw ParseError(std::string("missing field '") + key + "'");
    }
  }
  if (!record["id"].is_string()) throw ParseError("'id' must be a string");
  if (!record["summary"].is_string()) {
    throw ParseError("'summary' must be a string");
  }

  CorpusEntry entry;
  std::string id = record["id"].get<std::string>();
  if (id.empty()) throw ParseError("empty dialogue id");
  const json& dialogue = record["dialogue"];
  if (dialogue.is_string()) {
    entry.dialogue = ParseDialogueText(id, dialogue.get<std::string>());
  } else if (dialogue.is_array()) {
    entry.dialogue.id = id;
    for (const json& turn : dialogue) {
      if (!turn.is_object() || !turn.contains("speaker") ||
          !turn.contains("utterance") || !turn["speaker"].is_string() ||
          !turn["utterance"].is_string()) {
        throw ParseError(
            "turn must be {\"speaker\": str, \"utterance\": str}");
      }
      std::string speaker = turn["speaker"].get<std::string>();
      ValidateSpeaker(speaker);
      entry.dialogue.turns.push_back(
          {std::move(speaker),
           FlattenNewlines(turn["utterance"].get<std::string>())});
    }
  } else {
    throw ParseError("'dialogue' must be an array of turns or a string");
  }
  if (entry.dialogue.turns.empty()) {
    throw ParseError("dialogue '" + id + "' has no turns");
  }

  std::string summary = record["summary"].get<std::string>();
  if (IsBlank(summary)) throw ParseError("empty summary for '" + id + "'");
  entry.reference = Summary{std::move(summary), ReferenceOrigin{}};
  return entry;
}

}  // namespace

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "test";
}

std::optional<Split> ParseSplit(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "val" || name == "validation") return Split::kVal;
  if (name == "test") return Split::kTest;
  return std::nullopt;
}

std::string Dialogue::Render() const {
  std::string out;
  for (std::size_t i = 0; i < turns.size(); ++i) {
    if (i > 0) out += '\n';
    out += turns[i].speaker;
    out += ": ";
    out += turns[i].utterance;
  }
  return out;
}

Dialogue ParseDialogueText(std::string id, std::string_view text) {
  Dialogue dialogue;
  dialogue.id = std::move(id);
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = eol + 1;
    if (IsBlank(line)) continue;

    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) {
      if (dialogue.turns.empty()) {
        throw ParseError("dialogue text does not start with 'Speaker:'");
      }
      std::string& utterance = dialogue.turns.back().utterance;
      if (!utterance.empty()) utterance += ' ';
      utterance += Trim(line);
      continue;
    }
    std::string_view speaker = Trim(line.substr(0, colon));
    ValidateSpeaker(speaker);
    dialogue.turns.push_back(
        {std::string(speaker), std::string(Trim(line.substr(colon + 1)))});
  }
  return dialogue;
}

std::string OriginToString(const SummaryOrigin& origin) {
  struct Visitor {
    std::string operator()(const ReferenceOrigin&) const {
      return "reference";
    }
    std::string operator()(const ParaphraseOrigin&) const {
      return "paraphrase";
    }
    std::string operator()(const PerturbedOrigin& p) const {
      return "perturbed:" + std::string(TransformKindName(p.kind)) + ":" +
             std::to_string(p.parent_index);
    }
    std::string operator()(const ModelOutputOrigin& m) const {
      return "model:" + m.model_id;
    }
  };
  return std::visit(Visitor{}, origin);
}

SummaryOrigin ParseOrigin(std::string_view text) {
  if (text == "reference") return ReferenceOrigin{};
  if (text == "paraphrase") return ParaphraseOrigin{};
  if (text.starts_with("model:")) {
    return ModelOutputOrigin{std::string(text.substr(6))};
  }
  if (text.starts_with("perturbed:")) {
    std::string_view rest = text.substr(10);
    std::size_t colon = rest.find(':');
    if (colon != std::string_view::npos) {
      auto kind = ParseTransformKind(rest.substr(0, colon));
      std::string_view index = rest.substr(colon + 1);
      if (kind && IsNegativeKind(*kind) && !index.empty() &&
          std::all_of(index.begin(), index.end(),
                      [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        return PerturbedOrigin{*kind, std::stoul(std::string(index))};
      }
    }
  }
  throw ParseError("unknown summary origin '" + std::string(text) + "'");
}

Corpus ParseCorpus(std::istream& in, Split split) {
  Corpus corpus;
  corpus.split = split;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    CorpusEntry entry;
    try {
      entry = ParseEntry(line);
    } catch (const json::exception& e) {
      throw ParseError(e.what(), line_no);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
    if (!seen.insert(entry.dialogue.id).second) {
      throw IntegrityError("line " + std::to_string(line_no) +
                           ": duplicate dialogue id '" + entry.dialogue.id +
                           "'");
    }
    corpus.entries.push_back(std::move(entry));
  }
  return corpus;
}

Corpus LoadCorpus(const std::filesystem::path& path, Split split) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus file " + path.string());
  return ParseCorpus(in, split);
}

void WriteCorpus(const Corpus& corpus, std::ostream& out) {
  for (const CorpusEntry& entry : corpus.entries) {
    json turns = json::array();
    for (const Turn& turn : entry.dialogue.turns) {
      turns.push_back({{"speaker", turn.speaker},
                       {"utterance", turn.utterance}});
    }
    json record = {{"id", entry.dialogue.id},
                   {"dialogue", std::move(turns)},
                   {"summary", entry.reference.text}};
    out << record.dump() << '\n';
  }
}

std::string SerializeCorpus(const Corpus& corpus) {
  std::ostringstream out;
  WriteCorpus(corpus, out);
  return out.str();
}

void SaveCorpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write corpus file " + path.string());
  WriteCorpus(corpus, out);
}

CorpusStats ComputeCorpusStats(const Corpus& corpus) {
  if (corpus.entries.empty()) {
    throw DomainError("corpus statistics need at least one dialogue");
  }
  double speakers = 0.0;
  double turns = 0.0;
  double length = 0.0;
  for (const CorpusEntry& entry : corpus.entries) {
    std::set<std::string_view> names;
    for (const Turn& turn : entry.dialogue.turns) names.insert(turn.speaker);
    speakers += static_cast<double>(names.size());
    turns += static_cast<double>(entry.dialogue.turns.size());
    length += static_cast<double>(CountWhitespaceTokens(entry.reference.text));
  }
  const double n = static_cast<double>(corpus.entries.size());
  return {corpus.entries.size(), speakers / n, turns / n, length / n};
}

std::string_view ErrorTypeName(ErrorType type) {
  switch (type) {
    case ErrorType::kSubObjE: return "SubObjE";
    case ErrorType::kProE: return "ProE";
    case ErrorType::kNegE: return "NegE";
    case ErrorType::kParE: return "ParE";
    case ErrorType::kHalE: return "HalE";
    case ErrorType::kOthE: return "OthE";
  }
  return "?";
}

std::optional<ErrorType> ParseErrorType(std::string_view name) {
  for (ErrorType type : kAllErrorTypes) {
    if (ErrorTypeName(type) == name) return type;
  }
  return std::nullopt;
}

AnnotationParseResult ParseAnnotations(std::istream& in) {
  AnnotationParseResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    try {
      json record = json::parse(line);
      if (!record.is_object()) throw ParseError("record is not an object");
      if (!record.contains("dialogue_id") || !record["dialogue_id"].is_string()) {
        throw ParseError("missing string field 'dialogue_id'");
      }
      if (!record.contains("source") || !record["source"].is_string()) {
        throw ParseError("missing string field 'source'");
      }
      if (!record.contains("errors") || !record["errors"].is_array()) {
        throw ParseError("missing array field 'errors'");
      }
      AnnotationRecord out;
      out.dialogue_id = record["dialogue_id"].get<std::string>();
      out.summary_source = record["source"].get<std::string>();
      out.adjudicated = record.value("adjudicated", false);
      std::vector<std::string> unknown;
      for (const json& label : record["errors"]) {
        if (!label.is_string()) {
          unknown.push_back(label.dump());
          continue;
        }
        auto type = ParseErrorType(label.get<std::string>());
        if (!type) {
          unknown.push_back(label.get<std::string>());
          continue;
        }
        out.errors.insert(*type);
      }
      if (!unknown.empty()) {
        std::string names;
        for (const std::string& u : unknown) {
          if (!names.empty()) names += ", ";
          names += "'" + u + "'";
        }
        throw ParseError("unknown error-type label " + names);
      }
      result.records.push_back(std::move(out));
    } catch (const json::exception& e) {
      result.issues.push_back({line_no, e.what()});
    } catch (const ParseError& e) {
      result.issues.push_back({line_no, e.what()});
    }
  }
  return result;
}

std::vector<AnnotationRecord> LoadAnnotations(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open annotation file " + path.string());
  AnnotationParseResult parsed = ParseAnnotations(in);
  if (!parsed.issues.empty()) {
    std::string message = std::to_string(parsed.issues.size()) +
                          " malformed annotation record(s)";
    for (const AnnotationIssue& issue : parsed.issues) {
      message += "; line " + std::to_string(issue.line) + ": " + issue.message;
    }
    throw ParseError(message, parsed.issues.front().line);
  }
  return std::move(parsed.records);
}

bool IsHumanSource(std::string_view source) {
  std::string lower = Lowercase(source);
  return lower == "human" || lower == "reference";
}

namespace {

AnnotationRow Tally(std::string source,
                    const std::vector<const AnnotationRecord*>& records) {
  AnnotationRow row;
  row.source = std::move(source);
  row.records = records.size();
  std::size_t any = 0;
  std::map<ErrorType, std::size_t> counts;
  for (const AnnotationRecord* r : records) {
    if (!r->errors.empty()) ++any;
    for (ErrorType type : r->errors) ++counts[type];
  }
  const double n = static_cast<double>(records.size());
  row.any_error = static_cast<double>(any) / n;
  for (ErrorType type : kAllErrorTypes) {
    row.per_type[type] = static_cast<double>(counts[type]) / n;
  }
  return row;
}

}  // namespace

AnnotationReport BuildAnnotationReport(
    const std::vector<AnnotationRecord>& records) {
  if (records.empty()) {
    throw DomainError("annotation report needs at least one record");
  }
  std::map<std::string, std::vector<const AnnotationRecord*>> by_source;
  std::vector<const AnnotationRecord*> models;
  for (const AnnotationRecord& r : records) {
    by_source[r.summary_source].push_back(&r);
    if (!IsHumanSource(r.summary_source)) models.push_back(&r);
  }
  AnnotationReport report;
  for (const auto& [source, group] : by_source) {
    report.rows.push_back(Tally(source, group));
  }
  if (!models.empty()) report.pooled_models = Tally("models (pooled)", models);
  return report;
}

}  // namespace faceval
