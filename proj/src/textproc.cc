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

#include "faceval/textproc.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <exception>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "faceval/error.h"

namespace faceval {

namespace {

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)); }
bool IsDigit(char c) { return c >= '0' && c <= '9'; }
bool IsUpper(char c) { return c >= 'A' && c <= 'Z'; }
bool IsLower(char c) { return c >= 'a' && c <= 'z'; }
bool IsAlpha(char c) { return IsUpper(c) || IsLower(c); }

bool WhitespaceOnly(std::string_view text, std::size_t from, std::size_t to) {
  if (from > to) return false;
  for (std::size_t i = from; i < to; ++i) {
    if (!IsSpace(text[i])) return false;
  }
  return true;
}

constexpr std::array<std::string_view, 15> kPronouns = {
    "he", "she", "they", "him", "her", "them", "his", "hers",
    "their", "theirs", "I", "you", "we", "us", "me"};

constexpr std::array<std::string_view, 7> kWeekdays = {
    "monday", "tuesday", "wednesday", "thursday",
    "friday", "saturday", "sunday"};

constexpr std::array<std::string_view, 12> kMonths = {
    "January", "February", "March",     "April",   "May",      "June",
    "July",    "August",   "September", "October", "November", "December"};

constexpr std::array<std::string_view, 4> kRelativeDays = {
    "today", "tomorrow", "yesterday", "tonight"};

constexpr std::array<std::string_view, 3> kPeriodModifiers = {"next", "last",
                                                              "this"};

constexpr std::array<std::string_view, 8> kPeriods = {
    "week", "weekend", "month", "year", "morning", "afternoon", "evening",
    "night"};

constexpr std::array<std::string_view, 20> kSpelledNumbers = {
    "one",     "two",     "three",     "four",     "five",
    "six",     "seven",   "eight",     "nine",     "ten",
    "eleven",  "twelve",  "thirteen",  "fourteen", "fifteen",
    "sixteen", "seventeen", "eighteen", "nineteen", "twenty"};

// Common English first names. Names that double as frequent words ("Will",
// "May", "Bill", "Mark", "June") are left out.
const std::unordered_set<std::string_view>& NameLexicon() {
  static const std::unordered_set<std::string_view> names = {
      "Aaron",   "Adam",     "Adrian",  "Alan",     "Albert",  "Alex",
      "Alexander", "Alice",  "Amanda",  "Amelia",   "Amy",     "Andrew",
      "Andy",    "Angela",   "Anna",    "Anne",     "Anthony", "Ashley",
      "Barbara", "Ben",      "Benjamin", "Betty",   "Brian",   "Carl",
      "Caroline", "Catherine", "Charles", "Charlie", "Chloe",  "Chris",
      "Christopher", "Claire", "Daniel", "Dave",    "David",   "Debbie",
      "Dennis",  "Diana",    "Dorothy", "Edward",   "Eleanor", "Elizabeth",
      "Ella",    "Emily",    "Emma",    "Eric",     "Ethan",   "Eva",
      "Fiona",   "Frank",    "Freddie", "Gary",     "George",  "Grace",
      "Greg",    "Hannah",   "Harry",   "Helen",    "Henry",   "Ian",
      "Isabella", "Jack",    "Jacob",   "James",    "Jane",    "Jason",
      "Jennifer", "Jenny",   "Jerry",   "Jessica",  "Jim",     "Joe",
      "John",    "Jonathan", "Joseph",  "Josh",     "Julia",   "Kate",
      "Katie",   "Kelly",    "Kevin",   "Laura",    "Lauren",  "Leo",
      "Liam",    "Lily",     "Linda",   "Lisa",     "Lucas",   "Lucy",
      "Luke",    "Maria",    "Martha",  "Mary",     "Matt",    "Matthew",
      "Megan",   "Mia",      "Michael", "Mike",     "Monica",  "Nancy",
      "Natalie", "Nathan",   "Nicole",  "Noah",     "Olivia",  "Oliver",
      "Oscar",   "Patrick",  "Paul",    "Peter",    "Rachel",  "Rebecca",
      "Richard", "Robert",   "Ryan",    "Sam",      "Samuel",  "Sarah",
      "Scott",   "Sean",     "Sophia",  "Sophie",   "Steve",   "Steven",
      "Susan",   "Thomas",   "Tim",     "Tom",      "Tony",    "Victoria",
      "William", "Winnie",   "Zoe"};
  return names;
}

template <std::size_t N>
bool Contains(const std::array<std::string_view, N>& list,
              std::string_view word) {
  return std::find(list.begin(), list.end(), word) != list.end();
}

bool IsTitleCase(std::string_view token) {
  if (token.size() < 2 || !IsUpper(token[0])) return false;
  return std::any_of(token.begin() + 1, token.end(), IsLower);
}

// "5", "21st", "3rd": a day-of-month token.
bool IsDayNumber(std::string_view token) {
  std::size_t digits = 0;
  while (digits < token.size() && IsDigit(token[digits])) ++digits;
  if (digits == 0 || digits > 2) return false;
  std::string_view suffix = token.substr(digits);
  if (!suffix.empty() && suffix != "st" && suffix != "nd" && suffix != "rd" &&
      suffix != "th") {
    return false;
  }
  int day = std::stoi(std::string(token.substr(0, digits)));
  return day >= 1 && day <= 31;
}

// A run of digits joined by single separators, e.g. "12/05/2020", "3.5".
struct NumericRun {
  TextRange range;
  std::string separators;
  std::vector<std::size_t> part_lengths;
};

std::optional<EntityKind> ClassifyNumeric(const NumericRun& run) {
  const std::string& seps = run.separators;
  const auto& parts = run.part_lengths;
  if (seps.find(':') != std::string::npos) return std::nullopt;  // Times.
  auto all_same = [&](char c) {
    return !seps.empty() &&
           std::all_of(seps.begin(), seps.end(), [c](char s) { return s == c; });
  };
  if (all_same('/') && (parts.size() == 2 || parts.size() == 3) &&
      parts[0] <= 2 && parts[1] <= 2 &&
      (parts.size() == 2 || parts[2] == 2 || parts[2] == 4)) {
    return EntityKind::kDate;
  }
  if ((all_same('.') || all_same('-')) && parts.size() == 3 &&
      parts[0] <= 2 && parts[1] <= 2 && (parts[2] == 2 || parts[2] == 4)) {
    return EntityKind::kDate;
  }
  if (std::all_of(seps.begin(), seps.end(),
                  [](char s) { return s == '.' || s == ','; })) {
    return EntityKind::kNumber;
  }
  return std::nullopt;
}

std::vector<NumericRun> FindNumericRuns(std::string_view text) {
  std::vector<NumericRun> runs;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (!IsWordByte(text[i])) {
      ++i;
      continue;
    }
    if (!IsDigit(text[i])) {
      while (i < n && IsWordByte(text[i])) ++i;
      continue;
    }
    NumericRun run;
    run.range.start = i;
    std::size_t j = i;
    std::size_t part_start = j;
    while (j < n && IsDigit(text[j])) ++j;
    run.part_lengths.push_back(j - part_start);
    while (j + 1 < n && std::string_view("/.-,:").find(text[j]) !=
                            std::string_view::npos &&
           IsDigit(text[j + 1])) {
      run.separators += text[j];
      part_start = ++j;
      while (j < n && IsDigit(text[j])) ++j;
      run.part_lengths.push_back(j - part_start);
    }
    run.range.end = j;
    if (j < n && IsWordByte(text[j])) {
      // "50th", "5pm": not a bare numeral.
      while (j < n && IsWordByte(text[j])) ++j;
      i = j;
      continue;
    }
    runs.push_back(std::move(run));
    i = j;
  }
  return runs;
}

class SpanCollector {
 public:
  explicit SpanCollector(std::string_view text)
      : text_(text), claimed_(text.size(), false) {}

  bool Add(TextRange range, EntityKind kind) {
    if (range.start >= range.end || range.end > text_.size()) return false;
    for (std::size_t i = range.start; i < range.end; ++i) {
      if (claimed_[i]) return false;
    }
    std::fill(claimed_.begin() + range.start, claimed_.begin() + range.end,
              true);
    spans_.push_back({range.start, range.end,
                      std::string(text_.substr(range.start, range.size())),
                      kind});
    return true;
  }

  bool IsClaimed(TextRange range) const {
    for (std::size_t i = range.start; i < range.end; ++i) {
      if (claimed_[i]) return true;
    }
    return false;
  }

  std::vector<EntitySpan> Take() {
    std::sort(spans_.begin(), spans_.end(),
              [](const EntitySpan& a, const EntitySpan& b) {
                return a.start < b.start;
              });
    return std::move(spans_);
  }

 private:
  std::string_view text_;
  std::vector<bool> claimed_;
  std::vector<EntitySpan> spans_;
};

bool FollowedByContraction(std::string_view text, std::size_t end) {
  if (end + 1 < text.size() && text[end] == '\'' && IsAlpha(text[end + 1])) {
    return true;
  }
  return false;
}

bool IsAbbreviation(std::string_view word) {
  static const std::unordered_set<std::string> abbreviations = {
      "mr", "mrs", "ms", "dr", "st", "jr", "sr", "prof",
      "vs", "e.g", "i.e", "a.m", "p.m"};
  while (!word.empty() && !IsAlpha(word.front())) word.remove_prefix(1);
  return abbreviations.count(ToLower(word)) > 0;
}

}  // namespace

bool IsWordByte(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u);
}

std::string ToLower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (IsUpper(c)) c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string CapitalizeFirst(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (IsAlpha(c)) {
      if (IsLower(c)) c = static_cast<char>(c - 'a' + 'A');
      break;
    }
  }
  return out;
}

std::string ReplaceRange(std::string_view text, TextRange range,
                         std::string_view replacement) {
  std::string out;
  out.reserve(text.size() - range.size() + replacement.size());
  out.append(text.substr(0, range.start));
  out.append(replacement);
  out.append(text.substr(range.end));
  return out;
}

std::string NormalizeWhitespace(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char c : text) {
    if (IsSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

std::vector<TextRange> WordTokens(std::string_view text) {
  std::vector<TextRange> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!IsWordByte(text[i])) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < text.size() && IsWordByte(text[i])) ++i;
    tokens.push_back({start, i});
  }
  return tokens;
}

std::vector<std::string> ExtractSpeakers(const Dialogue& dialogue) {
  std::vector<std::string> speakers;
  for (const Turn& turn : dialogue.turns) {
    if (std::find(speakers.begin(), speakers.end(), turn.speaker) ==
        speakers.end()) {
      speakers.push_back(turn.speaker);
    }
  }
  return speakers;
}

std::string_view EntityKindName(EntityKind kind) {
  switch (kind) {
    case EntityKind::kPerson: return "PERSON";
    case EntityKind::kPronoun: return "PRONOUN";
    case EntityKind::kDate: return "DATE";
    case EntityKind::kNumber: return "NUMBER";
    case EntityKind::kEntityOther: return "ENTITY_OTHER";
  }
  return "?";
}

std::span<const std::string_view> PronounLexicon() { return kPronouns; }

bool IsPronoun(std::string_view word) {
  if (word == "I" || word == "i") return true;
  std::string lower = ToLower(word);
  return lower != "i" && Contains(kPronouns, lower);
}

unsigned PronounRoles(std::string_view word) {
  static const std::unordered_map<std::string, unsigned> roles = {
      {"i", kRoleSubject},
      {"you", kRoleSubject | kRoleObject},
      {"he", kRoleSubject},
      {"she", kRoleSubject},
      {"we", kRoleSubject},
      {"they", kRoleSubject},
      {"me", kRoleObject},
      {"him", kRoleObject},
      {"her", kRoleObject | kRoleDeterminer},
      {"us", kRoleObject},
      {"them", kRoleObject},
      {"his", kRoleDeterminer | kRolePossessive},
      {"their", kRoleDeterminer},
      {"hers", kRolePossessive},
      {"theirs", kRolePossessive}};
  auto it = roles.find(ToLower(word));
  return it == roles.end() ? 0u : it->second;
}

std::vector<TextRange> SentenceSpans(std::string_view text) {
  static constexpr std::string_view kTerminators = ".!?";
  static constexpr std::string_view kClosers = "\"')]";
  std::vector<TextRange> spans;
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    while (i < n && IsSpace(text[i])) ++i;
    if (i == n) break;
    const std::size_t start = i;
    std::size_t end = n;
    std::size_t j = i;
    while (j < n) {
      char c = text[j];
      if (c == '\n') {
        end = j;
        break;
      }
      if (kTerminators.find(c) == std::string_view::npos) {
        ++j;
        continue;
      }
      std::size_t k = j;
      while (k < n && kTerminators.find(text[k]) != std::string_view::npos) {
        ++k;
      }
      const bool single_period = (k == j + 1 && c == '.');
      while (k < n && kClosers.find(text[k]) != std::string_view::npos) ++k;
      if (k == n || IsSpace(text[k])) {
        std::size_t word_start = j;
        while (word_start > start && !IsSpace(text[word_start - 1])) {
          --word_start;
        }
        if (!(single_period &&
              IsAbbreviation(text.substr(word_start, j - word_start)))) {
          end = k;
          break;
        }
      }
      j = k;
    }
    std::size_t trimmed = end;
    while (trimmed > start && IsSpace(text[trimmed - 1])) --trimmed;
    spans.push_back({start, trimmed});
    i = end;
  }
  return spans;
}

std::vector<std::string> SplitSentences(std::string_view text) {
  std::vector<std::string> sentences;
  for (const TextRange& r : SentenceSpans(text)) {
    sentences.push_back(NormalizeWhitespace(text.substr(r.start, r.size())));
  }
  return sentences;
}

std::vector<std::size_t> SentenceInitialOffsets(std::string_view text) {
  std::vector<std::size_t> offsets;
  for (const TextRange& r : SentenceSpans(text)) {
    for (std::size_t i = r.start; i < r.end; ++i) {
      if (IsWordByte(text[i])) {
        offsets.push_back(i);
        break;
      }
    }
  }
  return offsets;
}

std::vector<EntitySpan> RuleBasedTagger::Tag(
    std::string_view text, std::span<const std::string> speakers) const {
  SpanCollector collector(text);
  const std::vector<TextRange> tokens = WordTokens(text);
  std::vector<std::string> lower(tokens.size());
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    lower[t] = ToLower(text.substr(tokens[t].start, tokens[t].size()));
  }
  auto surface = [&](std::size_t t) {
    return text.substr(tokens[t].start, tokens[t].size());
  };
  auto adjacent = [&](std::size_t a, std::size_t b) {
    return WhitespaceOnly(text, tokens[a].end, tokens[b].start) &&
           tokens[a].end < tokens[b].start;
  };
  const std::vector<std::size_t> initial = SentenceInitialOffsets(text);
  auto is_initial = [&](std::size_t t) {
    return std::binary_search(initial.begin(), initial.end(),
                              tokens[t].start);
  };

  // DATE: word patterns.
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    if (Contains(kPeriodModifiers, lower[t]) && t + 1 < tokens.size() &&
        adjacent(t, t + 1) &&
        (Contains(kPeriods, lower[t + 1]) ||
         Contains(kWeekdays, lower[t + 1]))) {
      collector.Add({tokens[t].start, tokens[t + 1].end}, EntityKind::kDate);
      ++t;
      continue;
    }
    if (Contains(kRelativeDays, lower[t]) || Contains(kWeekdays, lower[t])) {
      collector.Add(tokens[t], EntityKind::kDate);
      continue;
    }
    if (Contains(kMonths, surface(t)) &&
        !(surface(t) == "May" && is_initial(t))) {
      TextRange range = tokens[t];
      if (t + 1 < tokens.size() && adjacent(t, t + 1) &&
          IsDayNumber(surface(t + 1))) {
        range.end = tokens[t + 1].end;
      } else if (t > 0 && adjacent(t - 1, t) && IsDayNumber(surface(t - 1))) {
        range.start = tokens[t - 1].start;
      }
      collector.Add(range, EntityKind::kDate);
    }
  }

  // DATE and NUMBER: numerals.
  for (const NumericRun& run : FindNumericRuns(text)) {
    if (auto kind = ClassifyNumeric(run)) collector.Add(run.range, *kind);
  }
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    if (Contains(kSpelledNumbers, lower[t])) {
      collector.Add(tokens[t], EntityKind::kNumber);
    }
  }

  // PERSON: speakers first (longest names first), then the lexicon.
  std::vector<std::string_view> names(speakers.begin(), speakers.end());
  std::sort(names.begin(), names.end(),
            [](std::string_view a, std::string_view b) {
              return a.size() > b.size();
            });
  for (std::string_view name : names) {
    if (name.empty()) continue;
    std::size_t pos = text.find(name);
    while (pos != std::string_view::npos) {
      const std::size_t end = pos + name.size();
      const bool bounded = (pos == 0 || !IsWordByte(text[pos - 1])) &&
                           (end == text.size() || !IsWordByte(text[end]));
      if (bounded) collector.Add({pos, end}, EntityKind::kPerson);
      pos = text.find(name, pos + 1);
    }
  }
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    if (NameLexicon().count(surface(t))) {
      collector.Add(tokens[t], EntityKind::kPerson);
    }
  }

  // PRONOUN.
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    if (!IsPronoun(surface(t)) || surface(t) == "US") continue;
    if (FollowedByContraction(text, tokens[t].end)) continue;
    collector.Add(tokens[t], EntityKind::kPronoun);
  }

  // ENTITY_OTHER: title-case runs outside sentence-initial position.
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    auto qualifies = [&](std::size_t u) {
      return IsTitleCase(surface(u)) && !is_initial(u) &&
             !collector.IsClaimed(tokens[u]) &&
             !FollowedByContraction(text, tokens[u].end);
    };
    if (!qualifies(t)) continue;
    std::size_t last = t;
    while (last + 1 < tokens.size() && qualifies(last + 1) &&
           tokens[last + 1].start == tokens[last].end + 1 &&
           text[tokens[last].end] == ' ') {
      ++last;
    }
    collector.Add({tokens[t].start, tokens[last].end},
                  EntityKind::kEntityOther);
    t = last;
  }

  return collector.Take();
}

std::vector<EntitySpan> TagEntities(std::string_view text,
                                    const EntityTagger& tagger,
                                    std::span<const std::string> speakers) {
  std::vector<EntitySpan> spans;
  try {
    spans = tagger.Tag(text, speakers);
  } catch (const TaggingError&) {
    throw;
  } catch (const std::exception& e) {
    throw TaggingError(std::string("entity tagger failed: ") + e.what());
  }
  std::size_t previous_end = 0;
  for (const EntitySpan& span : spans) {
    if (span.start >= span.end || span.end > text.size()) {
      throw TaggingError("entity tagger returned an out-of-range span");
    }
    if (span.start < previous_end) {
      throw TaggingError("entity tagger returned unsorted or overlapping spans");
    }
    if (text.substr(span.start, span.end - span.start) != span.surface) {
      throw TaggingError("entity span surface '" + span.surface +
                         "' does not match the text");
    }
    previous_end = span.end;
  }
  return spans;
}

namespace {

constexpr std::array<std::string_view, 22> kAuxiliaries = {
    "is",    "are",    "was",   "were", "am",   "be",    "been",  "will",
    "would", "can",    "could", "shall", "should", "may", "might", "must",
    "do",    "does",   "did",   "has",  "have", "had"};

// Auxiliaries whose negation is written with an "n't" suffix.
constexpr std::array<std::string_view, 16> kContracting = {
    "do",  "does", "did",  "is",    "are",   "was",    "were", "has",
    "have", "had", "would", "could", "should", "must", "will", "can"};

std::optional<std::string> ContractedBase(std::string_view lower) {
  if (lower == "won't") return "will";
  if (lower == "can't" || lower == "cannot") return "can";
  if (lower == "shan't") return "shall";
  if (lower.size() > 3 && lower.ends_with("n't")) {
    std::string base(lower.substr(0, lower.size() - 3));
    if (Contains(kAuxiliaries, base)) return base;
  }
  return std::nullopt;
}

// Apostrophe-aware tokens for auxiliary scanning: "don't" is one token.
struct AuxToken {
  TextRange range;
  std::string norm;  // Lowercase, curly apostrophe folded to ASCII.
};

std::vector<AuxToken> AuxTokens(std::string_view text) {
  std::vector<AuxToken> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (!IsWordByte(text[i])) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < n) {
      if (IsWordByte(text[i])) {
        ++i;
      } else if (text[i] == '\'' && i + 1 < n && IsWordByte(text[i + 1])) {
        ++i;
      } else {
        break;
      }
    }
    std::string norm = ToLower(text.substr(start, i - start));
    for (std::size_t p = norm.find("\xE2\x80\x99"); p != std::string::npos;
         p = norm.find("\xE2\x80\x99")) {
      norm.replace(p, 3, "'");
    }
    tokens.push_back({{start, i}, std::move(norm)});
  }
  return tokens;
}

}  // namespace

std::vector<AuxSpan> DetectAuxiliaries(std::string_view sentence) {
  std::vector<AuxSpan> spans;
  const std::vector<AuxToken> tokens = AuxTokens(sentence);
  auto adjacent = [&](std::size_t a, std::size_t b) {
    return WhitespaceOnly(sentence, tokens[a].range.end, tokens[b].range.start);
  };
  auto emit = [&](std::size_t start, std::size_t end, Polarity polarity) {
    spans.push_back({start, end,
                     std::string(sentence.substr(start, end - start)),
                     polarity});
  };

  bool previous_aux = false;
  std::optional<std::size_t> free_not;  // "not" not absorbed by a span.
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    const std::string& norm = tokens[t].norm;
    const bool chained = t > 0 && previous_aux && adjacent(t - 1, t);
    const bool has_next = t + 1 < tokens.size() && adjacent(t, t + 1);

    if (ContractedBase(norm)) {
      if (!chained) {
        emit(tokens[t].range.start, tokens[t].range.end, Polarity::kNegative);
      }
      previous_aux = true;
      free_not.reset();
      continue;
    }
    if (Contains(kAuxiliaries, norm)) {
      if ((norm == "has" || norm == "have" || norm == "had") && has_next &&
          tokens[t + 1].norm == "to") {
        previous_aux = false;
        free_not.reset();
        continue;
      }
      if ((norm == "be" || norm == "been") && free_not &&
          *free_not + 1 == t && adjacent(t - 1, t)) {
        emit(tokens[t - 1].range.start, tokens[t].range.end,
             Polarity::kNegative);
        previous_aux = true;
        free_not.reset();
        continue;
      }
      free_not.reset();
      if (chained) {
        previous_aux = true;
        continue;
      }
      if (has_next && tokens[t + 1].norm == "not") {
        emit(tokens[t].range.start, tokens[t + 1].range.end,
             Polarity::kNegative);
        ++t;
      } else {
        emit(tokens[t].range.start, tokens[t].range.end, Polarity::kPositive);
      }
      previous_aux = true;
      continue;
    }
    if (norm == "not") {
      if (!(previous_aux && t > 0 && adjacent(t - 1, t))) {
        free_not = t;
        previous_aux = false;
      }
      continue;
    }
    previous_aux = false;
    free_not.reset();
  }
  return spans;
}

std::string TogglePolarity(const AuxSpan& span) {
  const std::string& surface = span.surface;
  const bool capital = !surface.empty() && IsUpper(surface[0]);
  auto cased = [capital](std::string word) {
    return capital ? CapitalizeFirst(word) : word;
  };
  std::string lower = ToLower(surface);
  for (std::size_t p = lower.find("\xE2\x80\x99"); p != std::string::npos;
       p = lower.find("\xE2\x80\x99")) {
    lower.replace(p, 3, "'");
  }

  if (span.polarity == Polarity::kPositive) {
    if (lower == "be" || lower == "been") return cased("not " + lower);
    if (lower == "will") return cased("won't");
    if (lower == "can") return cased("can't");
    if (Contains(kContracting, lower)) return surface + "n't";
    return surface + " not";
  }

  if (lower.starts_with("not") && lower.size() > 3 && IsSpace(lower[3])) {
    std::size_t rest = 3;
    while (rest < surface.size() && IsSpace(surface[rest])) ++rest;
    return cased(ToLower(surface.substr(rest)));
  }
  if (lower.ends_with("not") && lower.size() > 3 &&
      IsSpace(lower[lower.size() - 4])) {
    std::size_t end = surface.size() - 3;
    while (end > 0 && IsSpace(surface[end - 1])) --end;
    return surface.substr(0, end);
  }
  if (auto base = ContractedBase(lower)) {
    if (lower == "won't" || lower == "can't" || lower == "cannot" ||
        lower == "shan't") {
      return cased(*base);
    }
    // Keep the original casing of the stem: "Doesn't" -> "Does".
    return surface.substr(0, base->size());
  }
  return surface;
}

}  // namespace faceval
