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

// Pilot read-back generation: the word fixer rewrites ATCo command phrases
// into read-back phrasing, the grammar converter moves the callsign to the
// end, and the error injector optionally plants one read-back error for
// training controllers to catch.

#ifndef PSEUDOPILOT_READBACK_HPP_
#define PSEUDOPILOT_READBACK_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pseudopilot/entity_parser.hpp"
#include "pseudopilot/text.hpp"

namespace pseudopilot::readback {

struct FixRule {
  Words lhs;
  Words rhs;
  std::size_t line = 0;
};

class FixRuleSet {
 public:
  // One `lhs -> rhs` rule per non-comment line. Throws kParseError (with
  // the line number) or kDuplicateLhs.
  static FixRuleSet Parse(std::string_view text, std::string source = {});
  static FixRuleSet Load(const std::string &path);
  // The shipped 15-command rule file.
  static const FixRuleSet &Default();

  // Rule whose lhs is the longest word prefix of `command`, if any.
  const FixRule *Match(std::span<const std::string> command) const;

  // Rewrites a whole command phrase; unmatched commands pass through.
  Words Fix(std::span<const std::string> command) const;

  const std::vector<FixRule> &rules() const { return rules_; }
  const std::string &source_path() const { return source_; }

 private:
  std::vector<FixRule> rules_;
  lexicon::PhraseSet lhs_;
  std::string source_;
};

// Returns one message per rule whose rhs would be rewritten again by another
// rule; an empty result means Fix(Fix(x)) == Fix(x).
std::vector<std::string> LintRules(const FixRuleSet &rules);

enum class ErrorKind { kNone, kCommandFlip, kValuePerturb, kCallsignSwap };
std::string_view ErrorKindName(ErrorKind kind);
std::optional<ErrorKind> ParseErrorKind(std::string_view name);

struct ErrorSpec {
  ErrorKind kind = ErrorKind::kNone;
  double probability = 0.0;
  std::uint64_t seed = 0;

  void Validate() const;  // probability must be within [0, 1]
};

// A contiguous piece of a read-back that stems from one entity span.
struct Segment {
  parser::EntityClass cls = parser::EntityClass::kCommand;
  Words words;
  int group = -1;  // index into the source groups; -1 for the callsign

  friend bool operator==(const Segment &, const Segment &) = default;
};

struct InjectedError {
  ErrorKind kind = ErrorKind::kNone;
  std::size_t segment = 0;  // index of the altered segment
  Words original;           // faithful read-back fragment
  Words replaced;           // fragment actually emitted
  Words source;             // controller's words the fragment came from
};

struct ReadbackResult {
  Words words;
  std::vector<Segment> segments;
  std::optional<InjectedError> injected_error;
  std::vector<std::string> diagnostics;
  parser::ParsedCommunication source;
};

// Rewrites each group's command span with the longest matching rule,
// rebuilding indices; values, units, callsign and residual words are kept.
parser::ParsedCommunication ApplyWordFixer(const parser::ParsedCommunication &p,
                                           const FixRuleSet &rules);

// Entity segments in pilot order: every group (its spans in word order),
// then the callsign. Throws kEmptyCommunication with neither.
std::vector<Segment> ConvertGrammarSegments(const parser::ParsedCommunication &p);
Words ConvertGrammar(const parser::ParsedCommunication &p);

// Opposite controller instruction ("turn right" -> "turn left", climb <->
// descend, increase <-> reduce); nullopt when nothing in it can flip.
std::optional<Words> FlipCommand(std::span<const std::string> command);

// With probability spec.probability plants exactly one error of spec.kind.
// A pure function of (r, spec). An inapplicable kind leaves r unchanged
// and adds a diagnostic. `rules` re-fixes a flipped command.
ReadbackResult InjectError(const ReadbackResult &r, const ErrorSpec &spec,
                           const FixRuleSet &rules = FixRuleSet::Default());

ReadbackResult GenerateReadback(const parser::ParsedCommunication &p,
                                const FixRuleSet &rules = FixRuleSet::Default(),
                                const ErrorSpec &spec = {});

}  // namespace pseudopilot::readback

#endif  // PSEUDOPILOT_READBACK_HPP_
