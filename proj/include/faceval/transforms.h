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

// Rule-based corruptions of a target text against a source dialogue, and
// paraphrase-based positive augmentation.
//
// Every corruption is a single span edit: a Perturbation records the span in
// the parent text, what was there, and what replaced it, so the edit can be
// reverted exactly.

#ifndef FACEVAL_TRANSFORMS_H_
#define FACEVAL_TRANSFORMS_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "faceval/corpus.h"
#include "faceval/random.h"
#include "faceval/textproc.h"
#include "faceval/transform_kind.h"

namespace faceval {

struct Perturbation {
  TransformKind kind = TransformKind::kNG;
  TextRange edited_span;  // In parent_text.
  std::string original;   // parent_text[edited_span].
  std::string replacement;
  std::string parent_text;
  std::string result_text;
  // PS only: the replacement came from the pronoun lexicon because the
  // dialogue had no usable pronoun.
  bool from_lexicon = false;

  bool operator==(const Perturbation&) const = default;
};

Perturbation MakePerturbation(TransformKind kind, std::string_view parent,
                              TextRange span, std::string replacement);

// parent_text reconstructed from result_text by undoing the edit.
std::string RevertPerturbation(const Perturbation& p);

// Replaces each speaker-name mention in `summary` with a different speaker
// of `dialogue`, one Perturbation per mention. Empty when the dialogue has
// fewer than two speakers.
std::vector<Perturbation> SpeakerSwap(std::string_view summary,
                                      const Dialogue& dialogue,
                                      SeededRng& rng);

enum class PronounSource {
  kDialogueFirst,  // Dialogue pronouns, lexicon when none qualifies.
  kDialogueOnly,
  kLexicon,
};

struct SwapOptions {
  PronounSource pronoun_source = PronounSource::kDialogueFirst;
};

// The entity kinds a typed swap edits: ES covers ENTITY_OTHER and
// non-speaker PERSON, PS/DS/NS cover PRONOUN/DATE/NUMBER.
bool SwapTargets(TransformKind kind, const EntitySpan& span,
                 std::span<const std::string> speakers);

// ES / PS / DS / NS. Each target span in the summary is replaced by a
// same-kind surface taken from the dialogue that differs from the original
// (case-insensitively). Pronoun replacements prefer pronouns sharing a
// grammatical role with the original. Replacements are capitalized at
// sentence-initial positions.
std::vector<Perturbation> TypedEntitySwap(std::string_view summary,
                                          const Dialogue& dialogue,
                                          TransformKind kind,
                                          const EntityTagger& tagger,
                                          SeededRng& rng,
                                          const SwapOptions& options = {});

// One Perturbation per auxiliary site, flipping its polarity. Sentences
// without an auxiliary contribute nothing.
std::vector<Perturbation> Negate(std::string_view summary);

// Dispatches on `kind` (which must be a negative kind).
std::vector<Perturbation> ApplyTransform(TransformKind kind,
                                         std::string_view target,
                                         const Dialogue& source,
                                         const EntityTagger& tagger,
                                         SeededRng& rng,
                                         const SwapOptions& options = {});

class ParaphraseProvider {
 public:
  virtual ~ParaphraseProvider() = default;
  // Up to `k` paraphrases of `text`. May throw on failure.
  virtual std::vector<std::string> Paraphrase(std::string_view text,
                                              int k) const = 0;
  virtual std::string id() const = 0;
};

class NullParaphraseProvider : public ParaphraseProvider {
 public:
  std::vector<std::string> Paraphrase(std::string_view, int) const override {
    return {};
  }
  std::string id() const override { return "none"; }
};

// Paraphrases read from a JSON-lines file of
// {"source": str, "paraphrases": [str]} records.
class StaticParaphraseProvider : public ParaphraseProvider {
 public:
  explicit StaticParaphraseProvider(
      std::map<std::string, std::vector<std::string>> table,
      std::string id = "static");
  static StaticParaphraseProvider FromFile(const std::filesystem::path& path);

  std::vector<std::string> Paraphrase(std::string_view text,
                                      int k) const override;
  std::string id() const override { return id_; }

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> table_;
  std::string id_;
};

// [reference] followed by up to `max_paraphrases` distinct paraphrases.
// Exact duplicates of the reference or of each other are dropped. A null or
// failing provider yields [reference] (failures are logged). Throws
// DomainError if `reference` does not have a reference origin.
std::vector<Summary> MakePositives(const Summary& reference,
                                   const ParaphraseProvider* provider,
                                   int max_paraphrases);

}  // namespace faceval

#endif  // FACEVAL_TRANSFORMS_H_
