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

// High-level ATC entity parsing: BIO tagging of a normalised transcript
// into callsign / command / value / unit spans, and grouping of those spans
// into a ParsedCommunication.

#ifndef PSEUDOPILOT_ENTITY_PARSER_HPP_
#define PSEUDOPILOT_ENTITY_PARSER_HPP_

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pseudopilot/lexicon.hpp"
#include "pseudopilot/text.hpp"
#include "pseudopilot/wire.hpp"

namespace pseudopilot::parser {

enum class EntityClass : std::uint8_t { kCallsign, kCommand, kValue, kUnit };

inline constexpr EntityClass kAllClasses[] = {
    EntityClass::kCallsign, EntityClass::kCommand, EntityClass::kValue,
    EntityClass::kUnit};

std::string_view ClassName(EntityClass cls);
std::optional<EntityClass> ParseClass(std::string_view name);

// The 9-label BIO set.
enum class Label : std::uint8_t {
  kO,
  kBCallsign,
  kICallsign,
  kBCommand,
  kICommand,
  kBValue,
  kIValue,
  kBUnit,
  kIUnit,
};

std::string_view LabelName(Label label);
std::optional<Label> ParseLabel(std::string_view name);
Label BeginLabel(EntityClass cls);
Label InsideLabel(EntityClass cls);
std::optional<EntityClass> LabelClass(Label label);
inline bool IsInside(Label l) {
  return l == Label::kICallsign || l == Label::kICommand ||
         l == Label::kIValue || l == Label::kIUnit;
}

// An I-x label may only follow B-x or I-x.
bool IsValidBio(std::span<const Label> labels);

// Half-open word range [begin, end) carrying an entity class.
struct Span {
  EntityClass cls = EntityClass::kCallsign;
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const Span &, const Span &) = default;
  friend auto operator<=>(const Span &a, const Span &b) {
    if (auto c = a.begin <=> b.begin; c != 0) return c;
    if (auto c = a.end <=> b.end; c != 0) return c;
    return a.cls <=> b.cls;
  }
};

// Decodes labels into spans. A stray I-x (after O or another class) opens a
// new span, so any label sequence decodes.
std::vector<Span> SpansFromLabels(std::span<const Label> labels);
std::vector<Label> LabelsFromSpans(std::span<const Span> spans,
                                   std::size_t size);

enum class SpeakerRole : std::uint8_t { kAtco, kPilot, kUnknown };
std::string_view RoleName(SpeakerRole role);

struct Transcript {
  Words words;  // lexicon::NormalizeWords fixpoint
  SpeakerRole speaker_role = SpeakerRole::kUnknown;
  std::string utterance_id;
  std::int64_t timestamp_us = 0;

  static Transcript FromText(std::string_view text,
                             std::string utterance_id = {});
};

struct CommandGroup {
  Span command;
  std::optional<Span> value;
  std::optional<Span> unit;

  friend bool operator==(const CommandGroup &, const CommandGroup &) = default;
};

struct ParsedCommunication {
  Words words;
  std::vector<Label> labels;  // consistent with the spans below
  std::optional<Span> callsign;
  std::optional<std::string> resolved_icao;  // filled by the resolver
  std::vector<CommandGroup> groups;
  std::vector<std::size_t> residual;  // indices of words outside any span
  std::string utterance_id;

  Words SpanWords(const Span &span) const;
  // Callsign and group spans in index order.
  std::vector<Span> EntitySpans() const;
};

// Any component mapping a word sequence to one BIO label per word.
class Tagger {
 public:
  virtual ~Tagger() = default;
  virtual std::vector<Label> Tag(std::span<const std::string> words) const = 0;
  virtual std::string Name() const = 0;
};

// Deterministic grammar tagger over a lexicon:
//   telephony prefix + up to 4 alphabet/digit words   -> callsign
//   utterance-initial run of <= 4 alphabet/digit words
//     containing a letter word (designator dropped)    -> callsign
//   longest command phrase                             -> command
//   after a command: digit/number words                -> value
//                    unit phrase                       -> unit
// Anything else is O.
class GrammarTagger final : public Tagger {
 public:
  explicit GrammarTagger(const lexicon::Lexicon &lexicon =
                             lexicon::Lexicon::Default())
      : lexicon_(&lexicon) {}

  std::vector<Label> Tag(std::span<const std::string> words) const override;
  std::string Name() const override { return "builtin"; }

 private:
  const lexicon::Lexicon *lexicon_;
};

// Tagger reached over the length-prefixed wire protocol. Request
// {"words": "w1 w2 ..."}, response {"tags": ["B-callsign", ...]}.
// Replies of the wrong length or with unknown labels raise kParseError.
class ExternalTagger final : public Tagger {
 public:
  ExternalTagger(wire::Endpoint endpoint, std::chrono::milliseconds timeout);

  std::vector<Label> Tag(std::span<const std::string> words) const override;
  std::string Name() const override;

 private:
  std::unique_ptr<wire::Client> client_;
};

// Builds a tagger from the `tagger=` configuration value:
// "builtin" or "external:<host:port>".
std::unique_ptr<Tagger> MakeTagger(
    std::string_view spec,
    std::chrono::milliseconds timeout = std::chrono::milliseconds(2000));

const Tagger &BuiltinTagger();

std::vector<Label> TagWords(const Transcript &transcript,
                            const Tagger &tagger = BuiltinTagger());

// Groups labelled words: each command opens a group, a following value and
// unit attach to it, the callsign is the span at index 0 if any, otherwise
// the last callsign span. Unattached spans fall into the residual.
ParsedCommunication Assemble(Words words, std::span<const Label> labels);

ParsedCommunication Parse(const Transcript &transcript,
                          const Tagger &tagger = BuiltinTagger());

// Callsign first -> ATCo, callsign last -> pilot, else unknown.
SpeakerRole DetectSpeakerRole(const ParsedCommunication &parsed);

// "<callsign> ryanair ... </callsign> <command> ... </command> ..."
std::string RenderTagged(const ParsedCommunication &parsed);

}  // namespace pseudopilot::parser

#endif  // PSEUDOPILOT_ENTITY_PARSER_HPP_
