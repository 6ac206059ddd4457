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

#include <fstream>
#include <set>
#include <sstream>

#include "faceval/error.h"
#include "faceval/parallel.h"
#include "faceval/random.h"

namespace faceval {

namespace {

using json = nlohmann::ordered_json;

std::string_view PronounSourceName(PronounSource source) {
  switch (source) {
    case PronounSource::kDialogueFirst: return "dialogue_first";
    case PronounSource::kDialogueOnly: return "dialogue_only";
    case PronounSource::kLexicon: return "lexicon";
  }
  return "dialogue_first";
}

PronounSource ParsePronounSource(std::string_view name) {
  if (name == "dialogue_first") return PronounSource::kDialogueFirst;
  if (name == "dialogue_only") return PronounSource::kDialogueOnly;
  if (name == "lexicon") return PronounSource::kLexicon;
  throw ParseError("unknown pronoun source '" + std::string(name) + "'");
}

TransformKind KindFromJson(const json& j) {
  auto kind = ParseTransformKind(j.get<std::string>());
  if (!kind || !IsNegativeKind(*kind)) {
    throw ParseError("invalid negative kind '" + j.get<std::string>() + "'");
  }
  return *kind;
}

json CountsToJson(const std::map<TransformKind, std::size_t>& counts) {
  json out = json::object();
  for (TransformKind kind : kNegativeKinds) {
    auto it = counts.find(kind);
    out[std::string(TransformKindName(kind))] =
        it == counts.end() ? 0 : it->second;
  }
  return out;
}

json SetToJson(const ProbeSet& set) {
  json positives = json::array();
  for (const Summary& s : set.positives) {
    positives.push_back({{"text", s.text}, {"origin", OriginToString(s.origin)}});
  }
  json negatives = json::array();
  for (const Summary& s : set.negatives) {
    const PerturbedOrigin& origin = NegativeOrigin(s);
    negatives.push_back({{"text", s.text},
                         {"kind", TransformKindName(origin.kind)},
                         {"parent_index", origin.parent_index}});
  }
  return {{"dialogue_id", set.dialogue_id},
          {"dialogue", set.dialogue},
          {"positives", std::move(positives)},
          {"negatives", std::move(negatives)}};
}

ProbeSet SetFromJson(const json& j) {
  ProbeSet set;
  set.dialogue_id = j.at("dialogue_id").get<std::string>();
  set.dialogue = j.at("dialogue").get<std::string>();
  for (const json& p : j.at("positives")) {
    SummaryOrigin origin = ParseOrigin(p.at("origin").get<std::string>());
    if (!std::holds_alternative<ReferenceOrigin>(origin) &&
        !std::holds_alternative<ParaphraseOrigin>(origin)) {
      throw ParseError("positive with origin '" + OriginToString(origin) +
                       "' in probe set '" + set.dialogue_id + "'");
    }
    set.positives.push_back({p.at("text").get<std::string>(), origin});
  }
  if (set.positives.empty()) {
    throw ParseError("probe set '" + set.dialogue_id + "' has no positives");
  }
  std::set<std::string> positive_texts;
  for (const Summary& s : set.positives) positive_texts.insert(s.text);
  for (const json& n : j.at("negatives")) {
    PerturbedOrigin origin{KindFromJson(n.at("kind")),
                           n.at("parent_index").get<std::size_t>()};
    if (origin.parent_index >= set.positives.size()) {
      throw ParseError("negative parent_index out of range in probe set '" +
                       set.dialogue_id + "'");
    }
    std::string text = n.at("text").get<std::string>();
    if (positive_texts.count(text)) {
      throw ParseError("negative equals a positive in probe set '" +
                       set.dialogue_id + "'");
    }
    set.negatives.push_back({std::move(text), origin});
  }
  return set;
}

}  // namespace

json ProbeConfig::ToJson() const {
  json kind_names = json::array();
  for (TransformKind k : kinds) kind_names.push_back(TransformKindName(k));
  return {{"cap_per_kind", cap_per_kind},
          {"max_paraphrases", max_paraphrases},
          {"perturb_all_positives", perturb_all_positives},
          {"kinds", std::move(kind_names)},
          {"pronoun_source", PronounSourceName(swap.pronoun_source)},
          {"provider", provider_id}};
}

ProbeConfig ProbeConfig::FromJson(const json& j) {
  ProbeConfig config;
  config.cap_per_kind = j.at("cap_per_kind").get<std::size_t>();
  config.max_paraphrases = j.at("max_paraphrases").get<int>();
  config.perturb_all_positives = j.at("perturb_all_positives").get<bool>();
  config.kinds.clear();
  for (const json& k : j.at("kinds")) config.kinds.push_back(KindFromJson(k));
  config.swap.pronoun_source =
      ParsePronounSource(j.at("pronoun_source").get<std::string>());
  config.provider_id = j.at("provider").get<std::string>();
  return config;
}

bool ProbeConfig::operator==(const ProbeConfig& other) const {
  return ToJson() == other.ToJson();
}

const PerturbedOrigin& NegativeOrigin(const Summary& negative) {
  const auto* origin = std::get_if<PerturbedOrigin>(&negative.origin);
  if (origin == nullptr) {
    throw DomainError("negative summary without a perturbed origin");
  }
  return *origin;
}

std::map<TransformKind, std::size_t> ProbeSet::CountByKind() const {
  std::map<TransformKind, std::size_t> counts;
  for (const Summary& s : negatives) ++counts[NegativeOrigin(s).kind];
  return counts;
}

std::size_t ProbeCorpus::TotalNegatives() const {
  std::size_t total = 0;
  for (const auto& [kind, n] : counts) total += n;
  return total;
}

void ProbeCorpus::Recount() {
  counts.clear();
  for (TransformKind kind : kNegativeKinds) counts[kind] = 0;
  for (const ProbeSet& set : sets) {
    for (const auto& [kind, n] : set.CountByKind()) counts[kind] += n;
  }
}

const ProbeSet* ProbeCorpus::Find(std::string_view dialogue_id) const {
  for (const ProbeSet& set : sets) {
    if (set.dialogue_id == dialogue_id) return &set;
  }
  return nullptr;
}

ProbeSet BuildProbeSet(const Dialogue& dialogue, const Summary& reference,
                       const ProbeConfig& config, std::uint64_t seed,
                       const ParaphraseProvider* provider,
                       const EntityTagger& tagger) {
  ProbeSet set;
  set.dialogue_id = dialogue.id;
  set.dialogue = dialogue.Render();
  set.positives = MakePositives(reference, provider, config.max_paraphrases);

  std::set<std::string> taken;
  for (const Summary& p : set.positives) taken.insert(p.text);
  const std::size_t parents =
      config.perturb_all_positives ? set.positives.size() : 1;

  for (TransformKind kind : config.kinds) {
    SeededRng rng(DeriveSeed(seed, dialogue.id, TransformKindName(kind)));
    std::vector<Summary> candidates;
    for (std::size_t parent = 0; parent < parents; ++parent) {
      for (Perturbation& p :
           ApplyTransform(kind, set.positives[parent].text, dialogue, tagger,
                          rng, config.swap)) {
        if (!taken.insert(p.result_text).second) continue;
        candidates.push_back(
            {std::move(p.result_text), PerturbedOrigin{kind, parent}});
      }
    }
    if (config.cap_per_kind > 0 && candidates.size() > config.cap_per_kind) {
      for (std::size_t i :
           rng.SampleIndices(candidates.size(), config.cap_per_kind)) {
        set.negatives.push_back(std::move(candidates[i]));
      }
    } else {
      for (Summary& s : candidates) set.negatives.push_back(std::move(s));
    }
  }
  return set;
}

ProbeCorpus BuildProbeCorpus(const Corpus& corpus, const ProbeConfig& config,
                             std::uint64_t seed,
                             const ParaphraseProvider* provider,
                             const EntityTagger& tagger, std::size_t jobs) {
  if (corpus.entries.empty()) {
    throw DomainError("cannot build probes for an empty corpus");
  }
  ProbeCorpus probes;
  probes.seed = seed;
  probes.config = config;
  probes.config.provider_id = provider ? provider->id() : "none";
  probes.sets.resize(corpus.entries.size());
  ParallelFor(corpus.entries.size(), jobs, [&](std::size_t i) {
    const CorpusEntry& entry = corpus.entries[i];
    probes.sets[i] = BuildProbeSet(entry.dialogue, entry.reference, config,
                                   seed, provider, tagger);
  });
  probes.Recount();
  return probes;
}

std::string SerializeProbeCorpus(const ProbeCorpus& probes) {
  json sets = json::array();
  for (const ProbeSet& set : probes.sets) sets.push_back(SetToJson(set));
  json doc = {{"schema", kProbeSchema},
              {"seed", probes.seed},
              {"config", probes.config.ToJson()}};
  if (!probes.run.is_null()) doc["run"] = probes.run;
  doc["counts"] = CountsToJson(probes.counts);
  doc["probe_sets"] = std::move(sets);
  return doc.dump(1) + "\n";
}

void SaveProbeCorpus(const ProbeCorpus& probes,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write probe file " + path.string());
  out << SerializeProbeCorpus(probes);
}

ProbeCorpus ParseProbeCorpus(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed probe file: ") + e.what(),
                     std::nullopt, e.byte);
  }
  if (!doc.is_object() || !doc.contains("schema") ||
      !doc["schema"].is_string()) {
    throw ParseError("probe file has no schema header");
  }
  const std::string schema = doc["schema"].get<std::string>();
  if (schema != kProbeSchema) {
    if (schema.starts_with("faceval-probes/")) {
      throw VersionError("probe file schema '" + schema +
                         "' is not supported (expected '" +
                         std::string(kProbeSchema) + "')");
    }
    throw ParseError("unknown probe file schema '" + schema + "'");
  }
  ProbeCorpus probes;
  try {
    probes.seed = doc.at("seed").get<std::uint64_t>();
    probes.config = ProbeConfig::FromJson(doc.at("config"));
    if (doc.contains("run")) probes.run = doc["run"];
    std::set<std::string> ids;
    for (const json& s : doc.at("probe_sets")) {
      probes.sets.push_back(SetFromJson(s));
      if (!ids.insert(probes.sets.back().dialogue_id).second) {
        throw ParseError("duplicate probe set '" +
                         probes.sets.back().dialogue_id + "'");
      }
    }
    probes.Recount();
    std::map<TransformKind, std::size_t> declared;
    for (const auto& [name, n] : doc.at("counts").items()) {
      auto kind = ParseTransformKind(name);
      if (!kind) throw ParseError("unknown kind '" + name + "' in counts");
      declared[*kind] = n.get<std::size_t>();
    }
    for (TransformKind kind : kNegativeKinds) declared.try_emplace(kind, 0);
    if (declared != probes.counts) {
      throw ParseError("header counts do not match the probe sets");
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid probe file: ") + e.what());
  }
  return probes;
}

ProbeCorpus LoadProbeCorpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open probe file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseProbeCorpus(buffer.str());
}

}  // namespace faceval
