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

// Per-dialogue probe sets: positive summaries (the reference plus
// paraphrases) and single-edit corrupted negatives tagged with the transform
// that produced them.
//
// Probe file layout (a single JSON document):
//
//   {"schema": "faceval-probes/1", "seed": 13, "config": {...},
//    "counts": {"NG": 12, ...},
//    "probe_sets": [{"dialogue_id": "d1", "dialogue": "A: hi\nB: hey",
//                    "positives": [{"text": "...", "origin": "reference"}],
//                    "negatives": [{"text": "...", "kind": "SS",
//                                   "parent_index": 0}]}]}

#ifndef FACEVAL_PROBES_H_
#define FACEVAL_PROBES_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "faceval/corpus.h"
#include "faceval/textproc.h"
#include "faceval/transform_kind.h"
#include "faceval/transforms.h"
#include "json.hpp"

namespace faceval {

inline constexpr std::string_view kProbeSchema = "faceval-probes/1";

struct ProbeConfig {
  // Negatives kept per kind per dialogue; 0 means unlimited.
  std::size_t cap_per_kind = 5;
  int max_paraphrases = 2;
  // Corrupt every positive, or only the reference.
  bool perturb_all_positives = true;
  std::vector<TransformKind> kinds = {kNegativeKinds.begin(),
                                      kNegativeKinds.end()};
  SwapOptions swap;
  std::string provider_id = "none";

  nlohmann::ordered_json ToJson() const;
  static ProbeConfig FromJson(const nlohmann::ordered_json& j);
  bool operator==(const ProbeConfig&) const;
};

struct ProbeSet {
  std::string dialogue_id;
  // Rendered dialogue ("speaker: utterance" lines), the scoring condition.
  std::string dialogue;
  std::vector<Summary> positives;  // positives[0] is the reference.
  std::vector<Summary> negatives;  // Origins are PerturbedOrigin.

  bool has_negatives() const { return !negatives.empty(); }
  std::map<TransformKind, std::size_t> CountByKind() const;
  bool operator==(const ProbeSet&) const = default;
};

const PerturbedOrigin& NegativeOrigin(const Summary& negative);

struct ProbeCorpus {
  std::uint64_t seed = 0;
  ProbeConfig config;
  std::vector<ProbeSet> sets;  // Corpus order.
  std::map<TransformKind, std::size_t> counts;
  // Free-form record of the invocation that produced the file; null when
  // absent.
  nlohmann::ordered_json run;

  std::size_t TotalNegatives() const;
  // Sets `counts` from the probe sets.
  void Recount();
  const ProbeSet* Find(std::string_view dialogue_id) const;
  bool operator==(const ProbeCorpus&) const = default;
};

// Positives from MakePositives(); negatives are every configured transform
// applied to every positive (or only the reference), deduplicated by text,
// never equal to a positive, at most cap_per_kind per kind. Randomness for
// kind K comes from DeriveSeed(seed, dialogue id, K).
ProbeSet BuildProbeSet(const Dialogue& dialogue, const Summary& reference,
                       const ProbeConfig& config, std::uint64_t seed,
                       const ParaphraseProvider* provider,
                       const EntityTagger& tagger);

// Throws DomainError on an empty corpus. Output does not depend on `jobs`.
ProbeCorpus BuildProbeCorpus(const Corpus& corpus, const ProbeConfig& config,
                             std::uint64_t seed,
                             const ParaphraseProvider* provider,
                             const EntityTagger& tagger, std::size_t jobs = 1);

std::string SerializeProbeCorpus(const ProbeCorpus& probes);
void SaveProbeCorpus(const ProbeCorpus& probes,
                     const std::filesystem::path& path);

// Throws ParseError (with byte offset for truncated or malformed JSON),
// VersionError for another faceval-probes version, and ParseError when an
// invariant does not hold.
ProbeCorpus ParseProbeCorpus(std::string_view text);
ProbeCorpus LoadProbeCorpus(const std::filesystem::path& path);

}  // namespace faceval

#endif  // FACEVAL_PROBES_H_
