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
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "faceval/error.h"
#include "faceval/random.h"
#include "test_util.h"

namespace faceval {
namespace {

using ::faceval::testing::DataPath;

Corpus ParseString(const std::string& text, Split split = Split::kTest) {
  std::istringstream in(text);
  return ParseCorpus(in, split);
}

TEST(DialogueTest, RenderJoinsTurnsWithNewlines) {
  Dialogue d{"x", {{"Fiona", "Turning 50."}, {"Jonathan", "Wow."}}};
  EXPECT_EQ(d.Render(), "Fiona: Turning 50.\nJonathan: Wow.");
}

TEST(DialogueTest, ParseDialogueTextSplitsAtFirstColon) {
  Dialogue d = ParseDialogueText(
      "x", "Kate: the train leaves at 8:15\nTom: ok\nsee you there");
  ASSERT_EQ(d.turns.size(), 2u);
  EXPECT_EQ(d.turns[0].speaker, "Kate");
  EXPECT_EQ(d.turns[0].utterance, "the train leaves at 8:15");
  EXPECT_EQ(d.turns[1].speaker, "Tom");
  EXPECT_EQ(d.turns[1].utterance, "ok see you there");
}

TEST(DialogueTest, ParseDialogueTextRejectsMissingSpeaker) {
  EXPECT_THROW(ParseDialogueText("x", "no speaker here"), ParseError);
  EXPECT_THROW(ParseDialogueText("x", ": empty speaker"), ParseError);
}

TEST(DialogueTest, RenderParseRoundTrip) {
  Dialogue d{"x", {{"A", "hi"}, {"B", ""}, {"A", "one: two"}}};
  EXPECT_EQ(ParseDialogueText("x", d.Render()), d);
}

TEST(OriginTest, StringRoundTrip) {
  for (const SummaryOrigin& origin :
       {SummaryOrigin{ReferenceOrigin{}}, SummaryOrigin{ParaphraseOrigin{}},
        SummaryOrigin{PerturbedOrigin{TransformKind::kNG, 2}},
        SummaryOrigin{ModelOutputOrigin{"bart-large"}}}) {
    EXPECT_EQ(ParseOrigin(OriginToString(origin)), origin);
  }
  EXPECT_EQ(OriginToString(PerturbedOrigin{TransformKind::kSS, 0}),
            "perturbed:SS:0");
  EXPECT_THROW(ParseOrigin("perturbed:BT:0"), ParseError);
  EXPECT_THROW(ParseOrigin("nonsense"), ParseError);
}

TEST(SplitTest, Names) {
  EXPECT_EQ(ParseSplit("validation"), Split::kVal);
  EXPECT_EQ(ParseSplit("val"), Split::kVal);
  EXPECT_EQ(ParseSplit("test"), Split::kTest);
  EXPECT_FALSE(ParseSplit("dev").has_value());
  EXPECT_EQ(SplitName(Split::kTrain), "train");
}

TEST(LoadCorpusTest, FixtureHasTenEntriesInFileOrder) {
  Corpus c = LoadCorpus(DataPath("corpus10.jsonl"), Split::kTest);
  ASSERT_EQ(c.entries.size(), 10u);
  EXPECT_EQ(c.split, Split::kTest);
  EXPECT_EQ(c.entries.front().dialogue.id, "d01");
  EXPECT_EQ(c.entries.back().dialogue.id, "d10");
  EXPECT_EQ(c.entries[0].dialogue.turns[2].utterance, "Turning 50.");
  EXPECT_TRUE(
      std::holds_alternative<ReferenceOrigin>(c.entries[0].reference.origin));
  // Newlines inside an utterance are folded to spaces.
  EXPECT_EQ(c.entries[4].dialogue.turns[1].utterance,
            "Bring two copies of the report. The room is on the second floor.");
}

TEST(LoadCorpusTest, EmptyInputGivesEmptyCorpus) {
  EXPECT_TRUE(ParseString("").entries.empty());
  EXPECT_TRUE(ParseString("\n  \n").entries.empty());
}

TEST(LoadCorpusTest, FlatTextDialoguesAreSplitByTheColonRule) {
  Corpus c = ParseString(
      R"({"id":"a","dialogue":"Amanda: hi\nJerry: hello","summary":"s"})");
  ASSERT_EQ(c.entries[0].dialogue.turns.size(), 2u);
  EXPECT_EQ(c.entries[0].dialogue.turns[1].speaker, "Jerry");
}

TEST(LoadCorpusTest, MalformedRecordReportsLineNumber) {
  const std::string text =
      "{\"id\":\"a\",\"dialogue\":[{\"speaker\":\"A\",\"utterance\":\"x\"}],"
      "\"summary\":\"s\"}\n"
      "\n"
      "{\"id\":\"b\",\"dialogue\":[],\"summary\":\"s\"}\n";
  try {
    ParseString(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  try {
    ParseString("{\"id\": 3}\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  EXPECT_THROW(ParseString("not json\n"), ParseError);
}

TEST(LoadCorpusTest, SpeakerWithColonIsRejected) {
  EXPECT_THROW(
      ParseString(R"({"id":"a","dialogue":[{"speaker":"A:B","utterance":"x"}],)"
                  R"("summary":"s"})"),
      ParseError);
}

TEST(LoadCorpusTest, DuplicateIdIsIntegrityError) {
  const std::string rec =
      R"({"id":"a","dialogue":[{"speaker":"A","utterance":"x"}],"summary":"s"})";
  EXPECT_THROW(ParseString(rec + "\n" + rec + "\n"), IntegrityError);
}

TEST(LoadCorpusTest, MissingFileIsIoError) {
  EXPECT_THROW(LoadCorpus("/nonexistent/corpus.jsonl", Split::kTest), IoError);
}

TEST(LoadCorpusTest, SerializeThenParseIsIdentity) {
  Corpus c = LoadCorpus(DataPath("corpus10.jsonl"), Split::kTest);
  EXPECT_EQ(ParseString(SerializeCorpus(c)), c);
  Corpus s = LoadCorpus(DataPath("synthetic150.jsonl"), Split::kTrain);
  const std::string once = SerializeCorpus(s);
  EXPECT_EQ(ParseString(once, Split::kTrain), s);
  EXPECT_EQ(SerializeCorpus(ParseString(once, Split::kTrain)), once);
}

TEST(LoadCorpusTest, RoundTripOverRandomCorpora) {
  SeededRng rng(3);
  const std::vector<std::string> alphabet = {"a", "b", " ",  ":",        "\"",
                                             "\\", "\t", "\xc3\xa9", ".", "!"};
  for (int trial = 0; trial < 50; ++trial) {
    Corpus c;
    const std::size_t n = 1 + rng.UniformIndex(5);
    for (std::size_t i = 0; i < n; ++i) {
      CorpusEntry e;
      e.dialogue.id = "id" + std::to_string(i);
      const std::size_t turns = 1 + rng.UniformIndex(4);
      for (std::size_t t = 0; t < turns; ++t) {
        std::string utt;
        const std::size_t len = rng.UniformIndex(12);
        for (std::size_t k = 0; k < len; ++k) {
          utt += alphabet[rng.UniformIndex(alphabet.size())];
        }
        e.dialogue.turns.push_back(
            {"S" + std::to_string(rng.UniformIndex(3)), utt});
      }
      e.reference = {"summary " + std::to_string(i), ReferenceOrigin{}};
      c.entries.push_back(e);
    }
    EXPECT_EQ(ParseString(SerializeCorpus(c)), c);
  }
}

// Expected values from tests/data/recount_stats.py.
TEST(CorpusStatsTest, FixtureMatchesIndependentRecount) {
  CorpusStats s =
      ComputeCorpusStats(LoadCorpus(DataPath("corpus10.jsonl"), Split::kTest));
  EXPECT_EQ(s.dialogues, 10u);
  EXPECT_DOUBLE_EQ(s.mean_speakers, 2.0);
  EXPECT_DOUBLE_EQ(s.mean_turns, 6.0);
  EXPECT_DOUBLE_EQ(s.mean_summary_length, 16.9);
}

TEST(CorpusStatsTest, SingleDialogue) {
  Corpus c;
  c.entries.push_back({{"x", {{"A", "1"}, {"B", "2"}, {"A", "3"}, {"B", "4"}}},
                       {"five words in this summary", ReferenceOrigin{}}});
  CorpusStats s = ComputeCorpusStats(c);
  EXPECT_EQ(s.dialogues, 1u);
  EXPECT_EQ(s.mean_speakers, 2.0);
  EXPECT_EQ(s.mean_turns, 4.0);
  EXPECT_EQ(s.mean_summary_length, 5.0);
}

TEST(CorpusStatsTest, MeansMatchSinglePassFold) {
  Corpus c = LoadCorpus(DataPath("synthetic150.jsonl"), Split::kTrain);
  double speakers = 0, turns = 0, words = 0;
  for (const CorpusEntry& e : c.entries) {
    std::vector<std::string> seen;
    for (const Turn& t : e.dialogue.turns) {
      if (std::find(seen.begin(), seen.end(), t.speaker) == seen.end()) {
        seen.push_back(t.speaker);
      }
    }
    speakers += seen.size();
    turns += e.dialogue.turns.size();
    std::istringstream in(e.reference.text);
    std::string w;
    while (in >> w) ++words;
  }
  const double n = c.entries.size();
  CorpusStats s = ComputeCorpusStats(c);
  EXPECT_NEAR(s.mean_speakers, speakers / n, 1e-12);
  EXPECT_NEAR(s.mean_turns, turns / n, 1e-12);
  EXPECT_NEAR(s.mean_summary_length, words / n, 1e-12);
}

TEST(CorpusStatsTest, EmptyCorpusIsDomainError) {
  EXPECT_THROW(ComputeCorpusStats(Corpus{}), DomainError);
}

TEST(AnnotationTest, FixtureNamesBothUnknownLabels) {
  std::ifstream in(DataPath("annotations5.jsonl"));
  AnnotationParseResult r = ParseAnnotations(in);
  EXPECT_EQ(r.records.size(), 3u);
  ASSERT_EQ(r.issues.size(), 2u);
  EXPECT_EQ(r.issues[0].line, 3u);
  EXPECT_NE(r.issues[0].message.find("SubjE"), std::string::npos);
  EXPECT_EQ(r.issues[1].line, 5u);
  EXPECT_NE(r.issues[1].message.find("Negation"), std::string::npos);

  try {
    LoadAnnotations(DataPath("annotations5.jsonl"));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("SubjE"), std::string::npos);
    EXPECT_NE(msg.find("Negation"), std::string::npos);
  }
}

TEST(AnnotationTest, EmptyErrorListIsFaithful) {
  std::istringstream in(
      R"({"dialogue_id":"d","source":"human","errors":[],"adjudicated":true})");
  AnnotationParseResult r = ParseAnnotations(in);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_TRUE(r.records[0].faithful());
  EXPECT_TRUE(r.records[0].adjudicated);
}

TEST(AnnotationTest, RepeatedLabelsCollapseToASet) {
  std::istringstream in(
      R"({"dialogue_id":"d","source":"BART","errors":["ProE","ProE"],"adjudicated":true})");
  AnnotationParseResult r = ParseAnnotations(in);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].errors.size(), 1u);
}

TEST(AnnotationTest, ErrorTypeNamesRoundTrip) {
  EXPECT_EQ(kAllErrorTypes.size(), 6u);
  for (ErrorType t : kAllErrorTypes) {
    EXPECT_EQ(ParseErrorType(ErrorTypeName(t)), t);
  }
  EXPECT_FALSE(ParseErrorType("SubjE").has_value());
}

AnnotationRecord Rec(std::string source, std::set<ErrorType> errors,
                     bool adjudicated = true) {
  return {"d", std::move(source), std::move(errors), adjudicated};
}

TEST(AnnotationReportTest, FractionsPerSourceAndPooled) {
  std::vector<AnnotationRecord> records = {
      Rec("human", {}),
      Rec("human", {}),
      Rec("human", {}),
      Rec("human", {ErrorType::kProE}),
      Rec("BART", {ErrorType::kSubObjE, ErrorType::kProE}),
      Rec("BART", {}),
      Rec("T5", {ErrorType::kHalE}),
      Rec("T5", {ErrorType::kHalE, ErrorType::kNegE}),
  };
  AnnotationReport r = BuildAnnotationReport(records);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_EQ(r.rows[0].source, "BART");
  EXPECT_EQ(r.rows[1].source, "T5");
  EXPECT_EQ(r.rows[2].source, "human");
  EXPECT_DOUBLE_EQ(r.rows[2].any_error, 0.25);
  EXPECT_DOUBLE_EQ(r.rows[0].any_error, 0.5);
  EXPECT_DOUBLE_EQ(r.rows[1].any_error, 1.0);
  EXPECT_DOUBLE_EQ(r.rows[1].per_type.at(ErrorType::kHalE), 1.0);
  ASSERT_TRUE(r.pooled_models.has_value());
  EXPECT_EQ(r.pooled_models->records, 4u);
  EXPECT_DOUBLE_EQ(r.pooled_models->any_error, 0.75);
  // Per-type fractions may add up to more than the any-error fraction.
  double per_type_sum = 0.0;
  for (const auto& [type, f] : r.pooled_models->per_type) per_type_sum += f;
  EXPECT_GT(per_type_sum, r.pooled_models->any_error);
}

TEST(AnnotationReportTest, AllFaithfulGivesZeros) {
  AnnotationReport r =
      BuildAnnotationReport({Rec("human", {}), Rec("BART", {})});
  for (const AnnotationRow& row : r.rows) {
    EXPECT_EQ(row.any_error, 0.0);
    for (const auto& [type, f] : row.per_type) EXPECT_EQ(f, 0.0);
  }
}

TEST(AnnotationReportTest, PerTypeBoundsHoldOnRandomRecords) {
  SeededRng rng(5);
  std::vector<AnnotationRecord> records;
  const char* sources[] = {"human", "BART", "T5"};
  for (int i = 0; i < 300; ++i) {
    std::set<ErrorType> errors;
    for (ErrorType t : kAllErrorTypes) {
      if (rng.Bernoulli(0.15)) errors.insert(t);
    }
    records.push_back(
        Rec(sources[rng.UniformIndex(3)], errors, rng.Bernoulli(0.7)));
  }
  AnnotationReport r = BuildAnnotationReport(records);
  for (const AnnotationRow& row : r.rows) {
    std::size_t total = 0;
    std::map<ErrorType, std::size_t> adjudicated_hits;
    for (const AnnotationRecord& rec : records) {
      if (rec.summary_source != row.source) continue;
      ++total;
      if (!rec.adjudicated) continue;
      for (ErrorType t : rec.errors) ++adjudicated_hits[t];
    }
    for (ErrorType t : kAllErrorTypes) {
      const double f = row.per_type.count(t) ? row.per_type.at(t) : 0.0;
      EXPECT_LE(f, 1.0);
      EXPECT_GE(f + 1e-12, static_cast<double>(adjudicated_hits[t]) / total);
    }
  }
}

TEST(AnnotationReportTest, EmptyInputIsDomainError) {
  EXPECT_THROW(BuildAnnotationReport({}), DomainError);
}

TEST(AnnotationReportTest, HumanSourceNames) {
  EXPECT_TRUE(IsHumanSource("human"));
  EXPECT_TRUE(IsHumanSource("Reference"));
  EXPECT_FALSE(IsHumanSource("BART"));
}

}  // namespace
}  // namespace faceval
