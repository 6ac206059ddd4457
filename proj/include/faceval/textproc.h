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

// Deterministic text analysis used by the corrupting transforms: speaker
// extraction, entity tagging, auxiliary-verb detection and sentence
// segmentation. All offsets are byte offsets into UTF-8 text; bytes >= 0x80
// are treated as word characters so multi-byte letters are never split.

#ifndef FACEVAL_TEXTPROC_H_
#define FACEVAL_TEXTPROC_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "faceval/corpus.h"

namespace faceval {

struct TextRange {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool operator==(const TextRange&) const = default;
};

// Distinct speaker names in first-appearance order, case preserved.
std::vector<std::string> ExtractSpeakers(const Dialogue& dialogue);

enum class EntityKind { kPerson, kPronoun, kDate, kNumber, kEntityOther };

std::string_view EntityKindName(EntityKind kind);

struct EntitySpan {
  std::size_t start = 0;  // Half-open byte range.
  std::size_t end = 0;
  std::string surface;
  EntityKind kind = EntityKind::kEntityOther;

  bool operator==(const EntitySpan&) const = default;
};

// Pluggable named-entity tagger. Implementations return spans over `text`;
// `speakers` are the dialogue's speaker names and may be ignored.
class EntityTagger {
 public:
  virtual ~EntityTagger() = default;
  virtual std::vector<EntitySpan> Tag(
      std::string_view text, std::span<const std::string> speakers) const = 0;
};

// Built-in rule tagger.
//
//   PERSON       speaker names (exact, token-bounded) and title-case tokens
//                from a first-name lexicon
//   PRONOUN      closed lexicon, case-insensitive; not before a contraction
//                suffix ("I'm" is left alone)
//   DATE         weekdays, month names (optionally with a day number),
//                today/tomorrow/yesterday/tonight, "next/last/this <period>",
//                D/M/Y numerals
//   NUMBER       cardinal numerals (with ',' or '.' groups) and one..twenty
//   ENTITY_OTHER runs of title-case tokens that are not sentence-initial
//
// Earlier classes in the list above win on overlap, except that DATE and
// NUMBER are claimed first.
class RuleBasedTagger : public EntityTagger {
 public:
  std::vector<EntitySpan> Tag(
      std::string_view text,
      std::span<const std::string> speakers) const override;
};

// Runs `tagger` and validates its output: spans must be in range, match
// their surface, be sorted and not overlap. Any tagger exception or invalid
// output becomes a TaggingError.
std::vector<EntitySpan> TagEntities(std::string_view text,
                                    const EntityTagger& tagger,
                                    std::span<const std::string> speakers = {});

// Closed pronoun lexicon, lowercase except "I".
std::span<const std::string_view> PronounLexicon();
bool IsPronoun(std::string_view word);

// Grammatical roles a pronoun can fill (bitmask of kRole*).
inline constexpr unsigned kRoleSubject = 1;
inline constexpr unsigned kRoleObject = 2;
inline constexpr unsigned kRoleDeterminer = 4;
inline constexpr unsigned kRolePossessive = 8;
unsigned PronounRoles(std::string_view word);

enum class Polarity { kPositive, kNegative };

struct AuxSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  Polarity polarity = Polarity::kPositive;

  bool operator==(const AuxSpan&) const = default;
};

// Auxiliary verbs heading a verb chain. Attached "n't" and a following
// "not" are absorbed into a negative span ("don't", "do not", "cannot").
// Auxiliaries directly following another auxiliary ("will have", "don't
// have") and have/has/had + "to" are not reported.
std::vector<AuxSpan> DetectAuxiliaries(std::string_view sentence);

// The surface that flips the span's polarity: "will" -> "won't",
// "does" -> "doesn't", "may" -> "may not", "be" -> "not be", and the
// reverse for negative spans. Positive spans and contracted negatives
// round-trip exactly; "X not" for a contracting X and "cannot" come back in
// contracted form.
std::string TogglePolarity(const AuxSpan& span);

// Sentence byte ranges, trimmed. Terminator runs of . ! ? followed by space
// or end of text end a sentence, except after common abbreviations.
// Newlines always end a sentence.
std::vector<TextRange> SentenceSpans(std::string_view text);

// Whitespace-normalized sentences. Joining them with single spaces gives
// NormalizeWhitespace(text).
std::vector<std::string> SplitSentences(std::string_view text);

std::string NormalizeWhitespace(std::string_view text);

// Byte ranges of word tokens (runs of ASCII alphanumerics and bytes >= 0x80).
std::vector<TextRange> WordTokens(std::string_view text);

bool IsWordByte(char c);

// Offsets of the first word character of every sentence.
std::vector<std::size_t> SentenceInitialOffsets(std::string_view text);

std::string ToLower(std::string_view text);
// Uppercases the first ASCII letter.
std::string CapitalizeFirst(std::string_view text);
std::string ReplaceRange(std::string_view text, TextRange range,
                         std::string_view replacement);

}  // namespace faceval

#endif  // FACEVAL_TEXTPROC_H_
