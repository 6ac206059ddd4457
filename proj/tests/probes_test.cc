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

#include "faceval/probes.h"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "faceval/corpus.h"
#include "faceval/error.h"
#include "faceval/textproc.h"
#include "test_util.h"

namespace faceval {
namespace {

using ::faceval::testing::DataPath;
using ::faceval::testing::ReadFile;
using ::faceval::testing::TempDir;

Corpus Fixture() { return LoadCorpus(DataPath("corpus10.jsonl"), Split::kTest); }
Corpus Synthetic() {
  return LoadCorpus(DataPath("synthetic150.jsonl"), Split::kTrain);
}

ProbeCorpus Build(const Corpus& c, ProbeConfig config = {},
                  std::uint64_t seed = 13, std::size_t jobs = 1) {
  static const RuleBasedTagger tagger;
  return BuildProbeCorpus(c, config, seed, nullptr, tagger, jobs);
}

std::vector<std::string> NegativeTexts(const ProbeSet& set) {
  std::vector<std::string> out;
  for (const Summary& s : set.negatives) out.push_back(s.text);
  return out;
}

TEST(ProbeSetTest, GiftDialogueNegatives) {
  ProbeCorpus probes = Build(Fixture());
  const ProbeSet* set = probes.Find("d01");
  ASSERT_NE(set, nullptr);
  ASSERT_EQ(set->positives.size(), 1u);
  EXPECT_TRUE(std::holds_alternative<ReferenceOrigin>(set->positives[0].origin));
  const auto texts = NegativeTexts(*set);
  const std::string ss =
      "Jonathan doesn't know what she should give to her dad as a birthday "
      "gift. He likes military. Jonathan suggests a paintball match.";
  const std::string ps =
      "Fiona doesn't know what he should give to her dad as a birthday "
      "gift. He likes military. Jonathan suggests a paintball match.";
  EXPECT_NE(std::find(texts.begin(), texts.end(), ss), texts.end());
  EXPECT_NE(std::find(texts.begin(), texts.end(), ps), texts.end());
  EXPECT_EQ(set->dialogue, Fixture().entries[0].dialogue.Render());
}

TEST(ProbeSetTest, NoApplicableTransform) {
  RuleBasedTagger tagger;
  Dialogue d{"solo", {{"Ola", "Fine."}}};
  ProbeSet set = BuildProbeSet(d, {"Ola likes tea.", ReferenceOrigin{}}, {}, 1,
                               nullptr, tagger);
  EXPECT_FALSE(set.has_negatives());
  EXPECT_TRUE(set.CountByKind().empty());
}

TEST(ProbeCorpusTest, CountsMatchIndependentRecount) {
  ProbeCorpus probes = Build(Fixture());
  EXPECT_EQ(probes.sets.size(), 10u);
  // Recount from the serialized document rather than the in-memory sets.
  const auto doc = nlohmann::json::parse(SerializeProbeCorpus(probes));
  std::map<std::string, std::size_t> recount;
  std::size_t total = 0;
  for (const auto& set : doc["probe_sets"]) {
    for (const auto& neg : set["negatives"]) {
      ++recount[neg["kind"].get<std::string>()];
      ++total;
    }
  }
  std::map<std::string, std::size_t> counts;
  for (const auto& [k, v] : doc["counts"].items()) {
    if (v.get<std::size_t>() > 0) counts[k] = v.get<std::size_t>();
  }
  EXPECT_EQ(counts, recount);
  EXPECT_EQ(probes.TotalNegatives(), total);
  EXPECT_GT(total, 20u);
}

TEST(ProbeCorpusTest, InvariantsHoldOnSyntheticCorpus) {
  ProbeCorpus probes = Build(Synthetic());
  for (const ProbeSet& set : probes.sets) {
    std::set<std::string> positives;
    for (const Summary& p : set.positives) positives.insert(p.text);
    std::set<std::string> seen;
    for (const Summary& n : set.negatives) {
      EXPECT_FALSE(positives.count(n.text)) << set.dialogue_id;
      EXPECT_TRUE(seen.insert(n.text).second) << "duplicate negative";
      const PerturbedOrigin& origin = NegativeOrigin(n);
      EXPECT_LT(origin.parent_index, set.positives.size());
      EXPECT_TRUE(IsNegativeKind(origin.kind));
    }
    for (const auto& [kind, count] : set.CountByKind()) {
      EXPECT_LE(count, probes.config.cap_per_kind);
    }
  }
}

TEST(ProbeCorpusTest, CapIsRespected) {
  ProbeConfig config;
  config.cap_per_kind = 1;
  ProbeCorpus capped = Build(Synthetic(), config);
  ProbeCorpus open = Build(Synthetic(), ProbeConfig{.cap_per_kind = 0});
  for (std::size_t i = 0; i < capped.sets.size(); ++i) {
    auto c = capped.sets[i].CountByKind();
    auto o = open.sets[i].CountByKind();
    EXPECT_EQ(c.size(), o.size());
    for (const auto& [kind, count] : c) EXPECT_EQ(count, 1u);
    // Capped negatives are a subset of the uncapped ones.
    const auto all = NegativeTexts(open.sets[i]);
    for (const auto& t : NegativeTexts(capped.sets[i])) {
      EXPECT_NE(std::find(all.begin(), all.end(), t), all.end());
    }
  }
}

TEST(ProbeCorpusTest, ByteIdenticalRebuildsAcrossJobCounts) {
  const Corpus c = Synthetic();
  const std::string a = SerializeProbeCorpus(Build(c, {}, 13, 1));
  const std::string b = SerializeProbeCorpus(Build(c, {}, 13, 1));
  const std::string d = SerializeProbeCorpus(Build(c, {}, 13, 8));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, d);
}

TEST(ProbeCorpusTest, SeedChangesOnlyRandomChoices) {
  const Corpus c = Synthetic();
  ProbeConfig config;
  config.cap_per_kind = 0;
  ProbeCorpus a = Build(c, config, 1);
  ProbeCorpus b = Build(c, config, 2);
  bool any_difference = false;
  for (std::size_t i = 0; i < a.sets.size(); ++i) {
    auto only = [](const ProbeSet& s, TransformKind k) {
      std::vector<std::string> out;
      for (const Summary& n : s.negatives) {
        if (NegativeOrigin(n).kind == k) out.push_back(n.text);
      }
      return out;
    };
    // Negation involves no random choice.
    EXPECT_EQ(only(a.sets[i], TransformKind::kNG),
              only(b.sets[i], TransformKind::kNG));
    EXPECT_EQ(a.sets[i].CountByKind(), b.sets[i].CountByKind());
    any_difference |= a.sets[i].negatives != b.sets[i].negatives;
  }
  EXPECT_TRUE(any_difference);
}

TEST(ProbeCorpusTest, EmptyCorpusIsAnError) {
  EXPECT_THROW(Build(Corpus{}), DomainError);
}

TEST(ProbeFileTest, RoundTrip) {
  ProbeCorpus probes = Build(Fixture());
  probes.run = {{"command", "build-probes"}, {"cap", 5}};
  TempDir dir;
  SaveProbeCorpus(probes, dir / "p.json");
  ProbeCorpus back = LoadProbeCorpus(dir / "p.json");
  EXPECT_EQ(back, probes);
  EXPECT_EQ(SerializeProbeCorpus(back), ReadFile(dir / "p.json"));
}

TEST(ProbeFileTest, KeyOrder) {
  ProbeCorpus probes = Build(Fixture());
  const std::string text = SerializeProbeCorpus(probes);
  const auto doc = nlohmann::ordered_json::parse(text);
  std::vector<std::string> keys;
  for (const auto& [k, v] : doc.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"schema", "seed", "config",
                                            "counts", "probe_sets"}));
  EXPECT_EQ(doc["schema"], "faceval-probes/1");
}

TEST(ProbeFileTest, TruncatedFileReportsByteOffset) {
  const std::string text = SerializeProbeCorpus(Build(Fixture()));
  const std::string truncated = text.substr(0, text.size() / 2);
  try {
    ParseProbeCorpus(truncated);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    ASSERT_TRUE(e.byte_offset().has_value());
    EXPECT_LE(*e.byte_offset(), truncated.size() + 1);
    EXPECT_GT(*e.byte_offset(), truncated.size() / 2);
  }
}

TEST(ProbeFileTest, OtherVersionIsRejected) {
  auto doc = nlohmann::ordered_json::parse(
      SerializeProbeCorpus(Build(Fixture())));
  doc["schema"] = "faceval-probes/2";
  EXPECT_THROW(ParseProbeCorpus(doc.dump()), VersionError);
  doc["schema"] = "something-else";
  EXPECT_THROW(ParseProbeCorpus(doc.dump()), ParseError);
}

TEST(ProbeFileTest, BrokenInvariantsAreParseErrors) {
  auto doc = nlohmann::ordered_json::parse(
      SerializeProbeCorpus(Build(Fixture())));
  auto bad_parent = doc;
  bad_parent["probe_sets"][0]["negatives"][0]["parent_index"] = 7;
  EXPECT_THROW(ParseProbeCorpus(bad_parent.dump()), ParseError);
  auto negative_is_positive = doc;
  negative_is_positive["probe_sets"][0]["negatives"][0]["text"] =
      doc["probe_sets"][0]["positives"][0]["text"];
  EXPECT_THROW(ParseProbeCorpus(negative_is_positive.dump()), ParseError);
  auto bad_kind = doc;
  bad_kind["probe_sets"][0]["negatives"][0]["kind"] = "BT";
  EXPECT_THROW(ParseProbeCorpus(bad_kind.dump()), ParseError);
  auto no_sets = doc;
  no_sets.erase("probe_sets");
  EXPECT_THROW(ParseProbeCorpus(no_sets.dump()), ParseError);
}

TEST(ProbeConfigTest, JsonRoundTrip) {
  ProbeConfig config;
  config.cap_per_kind = 3;
  config.max_paraphrases = 0;
  config.perturb_all_positives = false;
  config.kinds = {TransformKind::kNG, TransformKind::kSS};
  config.swap.pronoun_source = PronounSource::kLexicon;
  config.provider_id = "static:x";
  EXPECT_EQ(ProbeConfig::FromJson(config.ToJson()), config);
}

}  // namespace
}  // namespace faceval
