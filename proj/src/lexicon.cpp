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

#include "pseudopilot/lexicon.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "default_data.hpp"
#include "pseudopilot/error.hpp"

namespace pseudopilot::lexicon {

namespace {

constexpr std::array<std::string_view, 10> kDigitWords = {
    "zero", "one", "two", "three", "four",
    "five", "six", "seven", "eight", "nine"};

constexpr std::array<std::string_view, 26> kLetterWords = {
    "alfa",   "bravo",   "charlie", "delta",  "echo",   "foxtrot", "golf",
    "hotel",  "india",   "juliett", "kilo",   "lima",   "mike",    "november",
    "oscar",  "papa",    "quebec",  "romeo",  "sierra", "tango",   "uniform",
    "victor", "whiskey", "xray",    "yankee", "zulu"};

// Non-canonical spellings seen in transcripts.
constexpr std::array<std::pair<std::string_view, std::string_view>, 7>
    kVariants = {{{"niner", "nine"},
                  {"tree", "three"},
                  {"fife", "five"},
                  {"fower", "four"},
                  {"alpha", "alfa"},
                  {"juliet", "juliett"},
                  {"whisky", "whiskey"}}};

constexpr std::array<std::string_view, 4> kNumberWords = {
    "hundred", "thousand", "decimal", "point"};

constexpr std::array<std::string_view, 5> kUnitPhrases = {
    "flight level", "feet", "knots", "degrees", "miles"};

bool IsLowerWord(std::string_view w) {
  return !w.empty() &&
         std::none_of(w.begin(), w.end(), [](unsigned char c) {
           return std::isupper(c) || std::isspace(c);
         });
}

// Strips comments and blank lines; yields (line number, content).
template <typename Fn>
void ForEachDataLine(std::string_view text, Fn &&fn) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::string_view trimmed = Trim(line);
    if (!trimmed.empty() && trimmed.front() != '#') fn(line_no, line);
    start = end + 1;
  }
}

Error FormatError(std::string_view what, std::size_t line_no,
                  std::string_view detail) {
  return Error(ErrorCode::kDataFormat, std::string(what) + " line " +
                                           std::to_string(line_no) + ": " +
                                           std::string(detail));
}

}  // namespace

std::string_view ValueKindName(ValueKind kind) {
  switch (kind) {
    case ValueKind::kHeading: return "heading";
    case ValueKind::kLevel: return "level";
    case ValueKind::kSpeed: return "speed";
    case ValueKind::kFrequency: return "frequency";
    case ValueKind::kNone: return "none";
  }
  return "none";
}

std::optional<ValueKind> ParseValueKind(std::string_view name) {
  for (ValueKind k : {ValueKind::kHeading, ValueKind::kLevel,
                      ValueKind::kSpeed, ValueKind::kFrequency,
                      ValueKind::kNone}) {
    if (ValueKindName(k) == name) return k;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// PhraseSet

bool PhraseSet::Add(Words phrase) {
  if (phrase.empty()) return false;
  auto it = by_first_.find(phrase.front());
  if (it != by_first_.end()) {
    for (std::size_t idx : it->second) {
      if (phrases_[idx] == phrase) return false;
    }
  }
  by_first_[phrase.front()].push_back(phrases_.size());
  phrases_.push_back(std::move(phrase));
  return true;
}

std::optional<PhraseMatch> PhraseSet::LongestMatch(
    std::span<const std::string> words, std::size_t pos) const {
  if (pos >= words.size()) return std::nullopt;
  auto it = by_first_.find(words[pos]);
  if (it == by_first_.end()) return std::nullopt;
  std::optional<PhraseMatch> best;
  for (std::size_t idx : it->second) {
    const Words &p = phrases_[idx];
    if (pos + p.size() > words.size()) continue;
    if (!std::equal(p.begin(), p.end(), words.begin() + pos)) continue;
    // Distinct phrases of equal length cannot both match, so the longest
    // match is unique.
    if (!best || p.size() > best->length) best = PhraseMatch{idx, p.size()};
  }
  return best;
}

// ---------------------------------------------------------------------------
// SpokenAlphabet

SpokenAlphabet::SpokenAlphabet() {
  for (std::size_t i = 0; i < kDigitWords.size(); ++i) {
    char_for_.emplace(std::string(kDigitWords[i]), static_cast<char>('0' + i));
  }
  for (std::size_t i = 0; i < kLetterWords.size(); ++i) {
    char_for_.emplace(std::string(kLetterWords[i]), static_cast<char>('A' + i));
  }
  for (const auto &[variant, canonical] : kVariants) {
    variants_.emplace(std::string(variant), std::string(canonical));
  }
}

const SpokenAlphabet &SpokenAlphabet::Get() {
  static const SpokenAlphabet kAlphabet;
  return kAlphabet;
}

std::string_view SpokenAlphabet::WordFor(char c) const {
  if (c >= '0' && c <= '9') return kDigitWords[c - '0'];
  if (c >= 'A' && c <= 'Z') return kLetterWords[c - 'A'];
  if (c >= 'a' && c <= 'z') return kLetterWords[c - 'a'];
  return {};
}

std::optional<char> SpokenAlphabet::CharFor(std::string_view word) const {
  auto it = char_for_.find(word);
  if (it == char_for_.end()) return std::nullopt;
  return it->second;
}

std::string_view SpokenAlphabet::Canonical(std::string_view word) const {
  auto it = variants_.find(word);
  return it == variants_.end() ? word : std::string_view(it->second);
}

bool SpokenAlphabet::IsDigitWord(std::string_view word) const {
  auto c = CharFor(word);
  return c && *c >= '0' && *c <= '9';
}

bool SpokenAlphabet::IsLetterWord(std::string_view word) const {
  auto c = CharFor(word);
  return c && *c >= 'A' && *c <= 'Z';
}

// ---------------------------------------------------------------------------
// TelephonyTable

TelephonyTable TelephonyTable::Parse(std::string_view text) {
  TelephonyTable table;
  const SpokenAlphabet &alphabet = SpokenAlphabet::Get();
  ForEachDataLine(text, [&](std::size_t line_no, std::string_view line) {
    auto fields = SplitFields(line, '\t');
    if (fields.size() != 2) {
      throw FormatError("telephony", line_no, "expected DESIGNATOR<TAB>words");
    }
    std::string designator(Trim(fields[0]));
    if (designator.size() != 3 ||
        !std::all_of(designator.begin(), designator.end(),
                     [](unsigned char c) { return std::isupper(c); })) {
      throw FormatError("telephony", line_no,
                        "designator must be 3 upper-case letters");
    }
    Words spoken = SplitWords(fields[1]);
    if (spoken.empty() ||
        !std::all_of(spoken.begin(), spoken.end(), IsLowerWord)) {
      throw FormatError("telephony", line_no,
                        "spoken form must be lower-case words");
    }
    // A telephony word that is also a callsign tail word would make the
    // callsign boundary ambiguous.
    if (alphabet.IsTailWord(spoken.front())) {
      throw FormatError("telephony", line_no,
                        "spoken form starts with an alphabet word");
    }
    if (!table.phrases_.Add(spoken)) {
      throw Error(ErrorCode::kDuplicateEntry,
                  "telephony line " + std::to_string(line_no) +
                      ": duplicate spoken form '" + JoinWords(spoken) + "'");
    }
    bool canonical = !table.canonical_.contains(designator);
    if (canonical) table.canonical_.emplace(designator, table.entries_.size());
    table.phrase_entry_.push_back(table.entries_.size());
    table.entries_.push_back({designator, std::move(spoken), canonical});
  });
  return table;
}

TelephonyTable TelephonyTable::Load(const std::string &path) {
  return Parse(ReadFile(path));
}

const TelephonyTable &TelephonyTable::Default() {
  static const TelephonyTable kTable = Parse(data::kTelephonyTsv);
  return kTable;
}

const Words *TelephonyTable::Spoken(std::string_view designator) const {
  auto it = canonical_.find(designator);
  if (it == canonical_.end()) return nullptr;
  return &entries_[it->second].spoken;
}

std::optional<std::string> TelephonyTable::Designator(
    std::span<const std::string> spoken) const {
  auto m = phrases_.LongestPrefix(spoken);
  if (!m || m->length != spoken.size()) return std::nullopt;
  return entries_[phrase_entry_[m->index]].designator;
}

std::optional<std::pair<std::string, std::size_t>> TelephonyTable::MatchAt(
    std::span<const std::string> words, std::size_t pos) const {
  auto m = phrases_.LongestMatch(words, pos);
  if (!m) return std::nullopt;
  return std::make_pair(entries_[phrase_entry_[m->index]].designator,
                        m->length);
}

std::vector<std::string> TelephonyTable::Designators() const {
  std::vector<std::string> out;
  for (const auto &e : entries_) {
    if (e.canonical) out.push_back(e.designator);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CommandVocabulary

CommandVocabulary CommandVocabulary::Parse(std::string_view text) {
  CommandVocabulary vocab;
  ForEachDataLine(text, [&](std::size_t line_no, std::string_view line) {
    auto fields = SplitFields(line, '\t');
    if (fields.size() != 2) {
      throw FormatError("commands", line_no, "expected phrase<TAB>value_kind");
    }
    Words words = SplitWords(fields[0]);
    if (words.empty() || !std::all_of(words.begin(), words.end(), IsLowerWord)) {
      throw FormatError("commands", line_no, "phrase must be lower-case words");
    }
    auto kind = ParseValueKind(Trim(fields[1]));
    if (!kind) {
      throw FormatError("commands", line_no,
                        "unknown value kind '" + fields[1] + "'");
    }
    if (!vocab.phrases_.Add(words)) {
      throw Error(ErrorCode::kDuplicateEntry,
                  "commands line " + std::to_string(line_no) +
                      ": duplicate phrase '" + JoinWords(words) + "'");
    }
    vocab.commands_.push_back({std::move(words), *kind});
  });
  return vocab;
}

CommandVocabulary CommandVocabulary::Load(const std::string &path) {
  return Parse(ReadFile(path));
}

const CommandVocabulary &CommandVocabulary::Default() {
  static const CommandVocabulary kVocab = Parse(data::kCommandsTsv);
  return kVocab;
}

// ---------------------------------------------------------------------------

const PhraseSet &UnitPhrases() {
  static const PhraseSet kUnits = [] {
    PhraseSet set;
    for (std::string_view p : kUnitPhrases) set.Add(SplitWords(p));
    return set;
  }();
  return kUnits;
}

bool IsValueWord(std::string_view word) {
  return SpokenAlphabet::Get().IsDigitWord(word) ||
         std::find(kNumberWords.begin(), kNumberWords.end(), word) !=
             kNumberWords.end();
}

const Lexicon &Lexicon::Default() {
  static const Lexicon kLexicon(TelephonyTable::Default(),
                                CommandVocabulary::Default());
  return kLexicon;
}

bool IsWellFormedCallsign(std::string_view icao) {
  if (icao.size() < 4 || icao.size() > 7) return false;
  for (std::size_t i = 0; i < icao.size(); ++i) {
    unsigned char c = icao[i];
    if (i < 3 ? !std::isalpha(c) : !std::isalnum(c)) return false;
  }
  return true;
}

Words Lexicon::ExpandCallsign(std::string_view icao) const {
  if (!IsWellFormedCallsign(icao)) {
    throw Error(ErrorCode::kMalformedCallsign,
                "malformed callsign '" + std::string(icao) + "'");
  }
  std::string code(icao);
  std::transform(code.begin(), code.end(), code.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  const Words *spoken = telephony_.Spoken(std::string_view(code).substr(0, 3));
  if (spoken == nullptr) {
    throw Error(ErrorCode::kUnknownDesignator,
                "unknown designator '" + code.substr(0, 3) + "'");
  }
  Words out = *spoken;
  for (std::size_t i = 3; i < code.size(); ++i) {
    out.emplace_back(alphabet().WordFor(code[i]));
  }
  return out;
}

std::string Lexicon::CompressSpoken(std::span<const std::string> words) const {
  auto prefix = telephony_.MatchAt(words, 0);
  if (!prefix) {
    throw Error(ErrorCode::kNotACallsign,
                "'" + JoinWords(words) + "' has no telephony prefix");
  }
  std::string code = prefix->first;
  for (std::size_t i = prefix->second; i < words.size(); ++i) {
    auto c = alphabet().CharFor(words[i]);
    if (!c) {
      throw Error(ErrorCode::kUnmappableWord,
                  "'" + words[i] + "' is neither a digit nor a letter word");
    }
    code.push_back(*c);
  }
  if (!IsWellFormedCallsign(code)) {
    throw Error(ErrorCode::kNotACallsign,
                "'" + JoinWords(words) + "' does not form a callsign");
  }
  return code;
}

Words ExpandDigits(std::string_view digits) {
  Words out;
  out.reserve(digits.size());
  for (char c : digits) {
    if (c < '0' || c > '9') {
      throw Error(ErrorCode::kNonDigit,
                  "non-digit character in '" + std::string(digits) + "'");
    }
    out.emplace_back(kDigitWords[c - '0']);
  }
  return out;
}

Words NormalizeWords(std::string_view text) {
  const SpokenAlphabet &alphabet = SpokenAlphabet::Get();
  std::string cleaned;
  cleaned.reserve(text.size());
  for (unsigned char c : text) {
    if (c >= 0x80 || std::isalnum(c)) {
      cleaned.push_back(static_cast<char>(std::tolower(c)));
    } else if (std::isspace(c)) {
      cleaned.push_back(' ');
    }
    // Punctuation is dropped, so "x-ray" becomes "xray".
  }
  Words words = SplitWords(cleaned);
  for (auto &w : words) w = std::string(alphabet.Canonical(w));
  return words;
}

}  // namespace pseudopilot::lexicon
