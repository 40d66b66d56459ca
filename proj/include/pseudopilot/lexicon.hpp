// Copyright 2026 The Pseudopilot Authors.
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

// ATC vocabulary: radiotelephony alphabet, airline telephony designators,
// command phrases and unit phrases, plus conversion of callsigns between the
// coded form (RYR92BQ) and the spoken form (ryanair nine two bravo quebec).
//
// Everything here is immutable after construction and safe to share between
// threads.

#ifndef PSEUDOPILOT_LEXICON_HPP_
#define PSEUDOPILOT_LEXICON_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pseudopilot/text.hpp"

namespace pseudopilot::lexicon {

enum class ValueKind { kHeading, kLevel, kSpeed, kFrequency, kNone };

std::string_view ValueKindName(ValueKind kind);
std::optional<ValueKind> ParseValueKind(std::string_view name);

// Result of matching a multi-word phrase at some position of a word
// sequence. `index` identifies the phrase inside its table.
struct PhraseMatch {
  std::size_t index = 0;
  std::size_t length = 0;
};

// Set of multi-word phrases with deterministic longest-match lookup. The
// match only depends on the phrase set, never on insertion order.
class PhraseSet {
 public:
  // Returns false when the phrase is already present.
  bool Add(Words phrase);

  std::optional<PhraseMatch> LongestMatch(std::span<const std::string> words,
                                          std::size_t pos) const;

  // Longest phrase that is a word prefix of `words` (i.e. a match at 0).
  std::optional<PhraseMatch> LongestPrefix(
      std::span<const std::string> words) const {
    return LongestMatch(words, 0);
  }

  const std::vector<Words> &phrases() const { return phrases_; }
  std::size_t size() const { return phrases_.size(); }

 private:
  std::vector<Words> phrases_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_first_;
};

// ICAO radiotelephony spelling alphabet and digit words. Fixed table.
class SpokenAlphabet {
 public:
  static const SpokenAlphabet &Get();

  // Canonical word for '0'-'9' or 'A'-'Z' / 'a'-'z'; empty when unmapped.
  std::string_view WordFor(char c) const;

  // Inverse of WordFor on canonical words: digit or upper-case letter.
  std::optional<char> CharFor(std::string_view word) const;

  // Maps accepted spelling variants ("niner", "alpha", "tree", ...) onto
  // the canonical word; other words are returned unchanged.
  std::string_view Canonical(std::string_view word) const;

  bool IsDigitWord(std::string_view word) const;
  bool IsLetterWord(std::string_view word) const;
  bool IsTailWord(std::string_view word) const {
    return CharFor(word).has_value();
  }

 private:
  SpokenAlphabet();

  std::map<std::string, char, std::less<>> char_for_;
  std::map<std::string, std::string, std::less<>> variants_;
};

struct TelephonyEntry {
  std::string designator;
  Words spoken;
  bool canonical = true;
};

// Airline designator <-> telephony table. A designator may carry aliases;
// the first spoken form listed for it is the one used for expansion.
class TelephonyTable {
 public:
  // Parses `DESIGNATOR<TAB>spoken words` lines; `#` starts a comment.
  static TelephonyTable Parse(std::string_view text);
  static TelephonyTable Load(const std::string &path);
  static const TelephonyTable &Default();

  // Canonical spoken form, or nullptr for an unknown designator.
  const Words *Spoken(std::string_view designator) const;

  // Designator for an exact spoken form (canonical or alias).
  std::optional<std::string> Designator(
      std::span<const std::string> spoken) const;

  // Longest telephony phrase starting at `pos`; returns designator + length.
  std::optional<std::pair<std::string, std::size_t>> MatchAt(
      std::span<const std::string> words, std::size_t pos) const;

  const std::vector<TelephonyEntry> &entries() const { return entries_; }
  std::vector<std::string> Designators() const;

 private:
  std::vector<TelephonyEntry> entries_;
  std::map<std::string, std::size_t, std::less<>> canonical_;
  PhraseSet phrases_;
  std::vector<std::size_t> phrase_entry_;
};

struct CommandPhrase {
  Words words;
  ValueKind kind = ValueKind::kNone;
};

class CommandVocabulary {
 public:
  // Parses `command phrase<TAB>value_kind` lines; `#` starts a comment.
  static CommandVocabulary Parse(std::string_view text);
  static CommandVocabulary Load(const std::string &path);
  static const CommandVocabulary &Default();

  std::optional<PhraseMatch> LongestMatch(std::span<const std::string> words,
                                          std::size_t pos) const {
    return phrases_.LongestMatch(words, pos);
  }

  const std::vector<CommandPhrase> &commands() const { return commands_; }

 private:
  std::vector<CommandPhrase> commands_;
  PhraseSet phrases_;
};

// Units recognised after (or, for "flight level", before) a value.
const PhraseSet &UnitPhrases();

// Digit words plus the number words that may continue a value span.
bool IsValueWord(std::string_view word);

// Bundles the vocabulary tables used by parsing and generation.
class Lexicon {
 public:
  Lexicon(TelephonyTable telephony, CommandVocabulary commands)
      : telephony_(std::move(telephony)), commands_(std::move(commands)) {}

  static const Lexicon &Default();

  const TelephonyTable &telephony() const { return telephony_; }
  const CommandVocabulary &commands() const { return commands_; }
  const SpokenAlphabet &alphabet() const { return SpokenAlphabet::Get(); }

  // "RYR92BQ" -> ryanair nine two bravo quebec. Accepts a 3-letter
  // designator followed by 1-4 letters/digits, case-insensitively.
  Words ExpandCallsign(std::string_view icao) const;

  // Inverse of ExpandCallsign; telephony aliases are accepted.
  std::string CompressSpoken(std::span<const std::string> words) const;

 private:
  TelephonyTable telephony_;
  CommandVocabulary commands_;
};

// True when `icao` has the 3-letter + 1-4 alphanumeric shape.
bool IsWellFormedCallsign(std::string_view icao);

Words ExpandDigits(std::string_view digits);

// Lower-cases, strips punctuation, splits on whitespace and maps spelling
// variants to canonical words. Total and idempotent.
Words NormalizeWords(std::string_view text);

}  // namespace pseudopilot::lexicon

#endif  // PSEUDOPILOT_LEXICON_HPP_
