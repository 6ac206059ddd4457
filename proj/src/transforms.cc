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

#include "faceval/transforms.h"

#include <algorithm>
#include <exception>
#include <fstream>
#include <set>

#include <spdlog/spdlog.h>

#include "faceval/error.h"
#include "json.hpp"

namespace faceval {

namespace {

bool IsSpeaker(std::string_view surface, std::span<const std::string> speakers) {
  return std::find(speakers.begin(), speakers.end(), surface) != speakers.end();
}

// Form in which a dialogue surface is offered as a replacement. Closed-class
// words are lowercased so they read naturally mid-sentence.
std::string CanonicalSurface(const EntitySpan& span) {
  const std::string lower = ToLower(span.surface);
  switch (span.kind) {
    case EntityKind::kPronoun:
      return lower == "i" ? "I" : lower;
    case EntityKind::kNumber:
      return std::any_of(span.surface.begin(), span.surface.end(),
                         [](char c) { return std::isalpha(static_cast<unsigned char>(c)); })
                 ? lower
                 : span.surface;
    case EntityKind::kDate:
      for (std::string_view prefix :
           {"today", "tomorrow", "yesterday", "tonight", "next ", "last ",
            "this "}) {
        if (lower.starts_with(prefix)) return lower;
      }
      return span.surface;
    default:
      return span.surface;
  }
}

struct Candidate {
  std::string surface;
  bool from_lexicon = false;
};

// 1, 2 or 3.
int PronounPerson(std::string_view word) {
  const std::string w = ToLower(word);
  if (w == "i" || w == "me" || w == "we" || w == "us") return 1;
  if (w == "you") return 2;
  return 3;
}

// Narrowest non-empty tier: same role and person, same role, anything.
std::vector<Candidate> PronounCandidates(const EntitySpan& target,
                                         const std::vector<std::string>& pool,
                                         PronounSource source) {
  const std::string target_key = ToLower(target.surface);
  const unsigned roles = PronounRoles(target.surface);
  const int person = PronounPerson(target.surface);
  auto pick = [&](const std::vector<std::string>& options, bool lexicon) {
    std::vector<Candidate> all, same_role, same_person;
    for (const std::string& p : options) {
      if (ToLower(p) == target_key) continue;
      all.push_back({p, lexicon});
      if (!(PronounRoles(p) & roles)) continue;
      same_role.push_back({p, lexicon});
      if (PronounPerson(p) == person) same_person.push_back({p, lexicon});
    }
    if (!same_person.empty()) return same_person;
    return same_role.empty() ? all : same_role;
  };
  std::vector<std::string> lexicon;
  for (std::string_view p : PronounLexicon()) lexicon.emplace_back(p);

  switch (source) {
    case PronounSource::kLexicon:
      return pick(lexicon, true);
    case PronounSource::kDialogueOnly:
      return pick(pool, false);
    case PronounSource::kDialogueFirst: {
      std::vector<Candidate> from_dialogue = pick(pool, false);
      if (!from_dialogue.empty()) return from_dialogue;
      return pick(lexicon, true);
    }
  }
  return {};
}

}  // namespace

Perturbation MakePerturbation(TransformKind kind, std::string_view parent,
                              TextRange span, std::string replacement) {
  Perturbation p;
  p.kind = kind;
  p.edited_span = span;
  p.original = std::string(parent.substr(span.start, span.size()));
  p.parent_text = std::string(parent);
  p.result_text = ReplaceRange(parent, span, replacement);
  p.replacement = std::move(replacement);
  return p;
}

std::string RevertPerturbation(const Perturbation& p) {
  return ReplaceRange(
      p.result_text,
      {p.edited_span.start, p.edited_span.start + p.replacement.size()},
      p.original);
}

std::vector<Perturbation> SpeakerSwap(std::string_view summary,
                                      const Dialogue& dialogue,
                                      SeededRng& rng) {
  const std::vector<std::string> speakers = ExtractSpeakers(dialogue);
  if (speakers.size() < 2) return {};

  std::vector<EntitySpan> mentions;
  for (const EntitySpan& span : RuleBasedTagger().Tag(summary, speakers)) {
    if (span.kind == EntityKind::kPerson && IsSpeaker(span.surface, speakers)) {
      mentions.push_back(span);
    }
  }
  std::vector<Perturbation> out;
  for (const EntitySpan& mention : mentions) {
    std::vector<const std::string*> others;
    for (const std::string& s : speakers) {
      if (s != mention.surface) others.push_back(&s);
    }
    const std::string& chosen = *others[rng.UniformIndex(others.size())];
    out.push_back(MakePerturbation(TransformKind::kSS, summary,
                                   {mention.start, mention.end}, chosen));
  }
  return out;
}

bool SwapTargets(TransformKind kind, const EntitySpan& span,
                 std::span<const std::string> speakers) {
  switch (kind) {
    case TransformKind::kES:
      return span.kind == EntityKind::kEntityOther ||
             (span.kind == EntityKind::kPerson &&
              !IsSpeaker(span.surface, speakers));
    case TransformKind::kPS: return span.kind == EntityKind::kPronoun;
    case TransformKind::kDS: return span.kind == EntityKind::kDate;
    case TransformKind::kNS: return span.kind == EntityKind::kNumber;
    default: return false;
  }
}

std::vector<Perturbation> TypedEntitySwap(std::string_view summary,
                                          const Dialogue& dialogue,
                                          TransformKind kind,
                                          const EntityTagger& tagger,
                                          SeededRng& rng,
                                          const SwapOptions& options) {
  if (kind != TransformKind::kES && kind != TransformKind::kPS &&
      kind != TransformKind::kDS && kind != TransformKind::kNS) {
    throw DomainError("typed entity swap needs ES, PS, DS or NS, got " +
                      std::string(TransformKindName(kind)));
  }
  if (summary.empty()) return {};
  const std::vector<std::string> speakers = ExtractSpeakers(dialogue);

  std::vector<EntitySpan> targets;
  for (EntitySpan& span : TagEntities(summary, tagger, speakers)) {
    if (SwapTargets(kind, span, speakers)) targets.push_back(std::move(span));
  }
  if (targets.empty()) return {};

  // Dialogue surfaces by entity kind, distinct case-insensitively, in
  // first-appearance order.
  std::map<EntityKind, std::vector<std::string>> pool;
  std::map<EntityKind, std::set<std::string>> seen;
  for (const Turn& turn : dialogue.turns) {
    if (turn.utterance.empty()) continue;
    for (const EntitySpan& span :
         TagEntities(turn.utterance, tagger, speakers)) {
      if (!SwapTargets(kind, span, speakers)) continue;
      std::string surface = CanonicalSurface(span);
      if (seen[span.kind].insert(ToLower(surface)).second) {
        pool[span.kind].push_back(std::move(surface));
      }
    }
  }

  const std::vector<std::size_t> initial = SentenceInitialOffsets(summary);
  std::vector<Perturbation> out;
  for (const EntitySpan& target : targets) {
    std::vector<Candidate> candidates;
    if (kind == TransformKind::kPS) {
      candidates = PronounCandidates(target, pool[EntityKind::kPronoun],
                                     options.pronoun_source);
    } else {
      const std::string key = ToLower(target.surface);
      for (const std::string& s : pool[target.kind]) {
        if (ToLower(s) != key) candidates.push_back({s, false});
      }
    }
    if (candidates.empty()) continue;
    const Candidate& chosen = candidates[rng.UniformIndex(candidates.size())];
    std::string replacement = chosen.surface;
    if (std::binary_search(initial.begin(), initial.end(), target.start)) {
      replacement = CapitalizeFirst(replacement);
    }
    Perturbation p = MakePerturbation(kind, summary, {target.start, target.end},
                                      std::move(replacement));
    p.from_lexicon = chosen.from_lexicon;
    if (p.result_text != p.parent_text) out.push_back(std::move(p));
  }
  return out;
}

std::vector<Perturbation> Negate(std::string_view summary) {
  std::vector<Perturbation> out;
  for (const TextRange& sentence : SentenceSpans(summary)) {
    for (const AuxSpan& aux :
         DetectAuxiliaries(summary.substr(sentence.start, sentence.size()))) {
      const TextRange span{sentence.start + aux.start, sentence.start + aux.end};
      out.push_back(MakePerturbation(TransformKind::kNG, summary, span,
                                     TogglePolarity(aux)));
    }
  }
  return out;
}

std::vector<Perturbation> ApplyTransform(TransformKind kind,
                                         std::string_view target,
                                         const Dialogue& source,
                                         const EntityTagger& tagger,
                                         SeededRng& rng,
                                         const SwapOptions& options) {
  switch (kind) {
    case TransformKind::kSS:
      return SpeakerSwap(target, source, rng);
    case TransformKind::kES:
    case TransformKind::kPS:
    case TransformKind::kDS:
    case TransformKind::kNS:
      return TypedEntitySwap(target, source, kind, tagger, rng, options);
    case TransformKind::kNG:
      return Negate(target);
    case TransformKind::kBT:
      break;
  }
  throw DomainError("BT is not a corrupting transform");
}

StaticParaphraseProvider::StaticParaphraseProvider(
    std::map<std::string, std::vector<std::string>> table, std::string id)
    : table_(table.begin(), table.end()), id_(std::move(id)) {}

StaticParaphraseProvider StaticParaphraseProvider::FromFile(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open paraphrase file " + path.string());
  std::map<std::string, std::vector<std::string>> table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto record = nlohmann::json::parse(line);
      auto& entry = table[record.at("source").get<std::string>()];
      for (const auto& p : record.at("paraphrases")) {
        entry.push_back(p.get<std::string>());
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return StaticParaphraseProvider(std::move(table),
                                  "static:" + path.filename().string());
}

std::vector<std::string> StaticParaphraseProvider::Paraphrase(
    std::string_view text, int k) const {
  auto it = table_.find(text);
  if (it == table_.end() || k <= 0) return {};
  std::vector<std::string> out = it->second;
  if (out.size() > static_cast<std::size_t>(k)) out.resize(k);
  return out;
}

std::vector<Summary> MakePositives(const Summary& reference,
                                   const ParaphraseProvider* provider,
                                   int max_paraphrases) {
  if (!std::holds_alternative<ReferenceOrigin>(reference.origin)) {
    throw DomainError("positives must be built from a reference summary");
  }
  std::vector<Summary> positives = {reference};
  if (provider == nullptr || max_paraphrases <= 0) return positives;

  std::vector<std::string> paraphrases;
  try {
    // One spare: providers often echo the input.
    paraphrases = provider->Paraphrase(reference.text, max_paraphrases + 1);
  } catch (const std::exception& e) {
    spdlog::warn("paraphrase provider '{}' failed, using the reference only: {}",
                 provider->id(), e.what());
    return positives;
  }
  std::set<std::string> seen = {reference.text};
  for (std::string& p : paraphrases) {
    if (static_cast<int>(positives.size()) > max_paraphrases) break;
    if (NormalizeWhitespace(p).empty() || !seen.insert(p).second) continue;
    positives.push_back({std::move(p), ParaphraseOrigin{}});
  }
  return positives;
}

}  // namespace faceval
