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

#include "pseudopilot/readback.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "default_data.hpp"
#include "pseudopilot/error.hpp"

namespace pseudopilot::readback {

using parser::CommandGroup;
using parser::EntityClass;
using parser::ParsedCommunication;
using parser::Span;

// ---------------------------------------------------------------------------
// Rules

FixRuleSet FixRuleSet::Parse(std::string_view text, std::string source) {
  FixRuleSet set;
  set.source_ = std::move(source);
  std::size_t line_no = 0;
  for (const std::string &raw : SplitFields(text, '\n')) {
    ++line_no;
    std::string_view line = Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto fail = [&](const std::string &why) {
      return Error(ErrorCode::kParseError,
                   (set.source_.empty() ? std::string("rules") : set.source_) +
                       ":" + std::to_string(line_no) + ": " + why);
    };
    auto arrow = line.find("->");
    if (arrow == std::string_view::npos) throw fail("missing '->'");
    Words lhs = lexicon::NormalizeWords(line.substr(0, arrow));
    Words rhs = lexicon::NormalizeWords(line.substr(arrow + 2));
    if (lhs.empty()) throw fail("empty lhs");
    if (rhs.empty()) throw fail("empty rhs");
    if (!set.lhs_.Add(lhs)) {
      throw Error(ErrorCode::kDuplicateLhs,
                  (set.source_.empty() ? std::string("rules") : set.source_) +
                      ":" + std::to_string(line_no) + ": duplicate lhs '" +
                      JoinWords(lhs) + "'");
    }
    set.rules_.push_back({std::move(lhs), std::move(rhs), line_no});
  }
  return set;
}

FixRuleSet FixRuleSet::Load(const std::string &path) {
  return Parse(ReadFile(path), path);
}

const FixRuleSet &FixRuleSet::Default() {
  static const FixRuleSet kRules = Parse(data::kRulesTxt, "rules.txt");
  return kRules;
}

const FixRule *FixRuleSet::Match(std::span<const std::string> command) const {
  auto m = lhs_.LongestPrefix(command);
  return m ? &rules_[m->index] : nullptr;
}

Words FixRuleSet::Fix(std::span<const std::string> command) const {
  const FixRule *rule = Match(command);
  return rule ? rule->rhs : Words(command.begin(), command.end());
}

std::vector<std::string> LintRules(const FixRuleSet &rules) {
  std::vector<std::string> issues;
  for (const FixRule &r : rules.rules()) {
    const FixRule *again = rules.Match(r.rhs);
    if (again != nullptr && again->rhs != r.rhs) {
      issues.push_back("line " + std::to_string(r.line) + ": rhs '" +
                       JoinWords(r.rhs) + "' is rewritten again by line " +
                       std::to_string(again->line));
    }
  }
  return issues;
}

// ---------------------------------------------------------------------------
// Error spec

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNone: return "none";
    case ErrorKind::kCommandFlip: return "command_flip";
    case ErrorKind::kValuePerturb: return "value_perturb";
    case ErrorKind::kCallsignSwap: return "callsign_swap";
  }
  return "none";
}

std::optional<ErrorKind> ParseErrorKind(std::string_view name) {
  for (ErrorKind k : {ErrorKind::kNone, ErrorKind::kCommandFlip,
                      ErrorKind::kValuePerturb, ErrorKind::kCallsignSwap}) {
    if (ErrorKindName(k) == name) return k;
  }
  return std::nullopt;
}

void ErrorSpec::Validate() const {
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "error probability must be within [0, 1]");
  }
}

// ---------------------------------------------------------------------------
// Word fixer and grammar converter

ParsedCommunication ApplyWordFixer(const ParsedCommunication &p,
                                   const FixRuleSet &rules) {
  const std::size_t n = p.words.size();
  std::map<std::size_t, std::size_t> group_at;  // command begin -> group
  for (std::size_t g = 0; g < p.groups.size(); ++g) {
    group_at.emplace(p.groups[g].command.begin, g);
  }

  ParsedCommunication out;
  out.resolved_icao = p.resolved_icao;
  out.utterance_id = p.utterance_id;
  out.groups = p.groups;
  std::vector<std::size_t> new_index(n + 1, 0);
  for (std::size_t i = 0; i < n;) {
    auto it = group_at.find(i);
    if (it == group_at.end()) {
      new_index[i] = out.words.size();
      out.words.push_back(p.words[i]);
      ++i;
      continue;
    }
    const Span &cmd = p.groups[it->second].command;
    Words fixed = rules.Fix(std::span(p.words).subspan(cmd.begin, cmd.size()));
    Span &new_cmd = out.groups[it->second].command;
    new_cmd.begin = out.words.size();
    out.words.insert(out.words.end(), fixed.begin(), fixed.end());
    new_cmd.end = out.words.size();
    for (std::size_t k = cmd.begin; k < cmd.end; ++k) new_index[k] = new_cmd.begin;
    i = cmd.end;
  }
  new_index[n] = out.words.size();

  auto remap = [&](Span s) {
    std::size_t len = s.size();
    s.begin = new_index[s.begin];
    s.end = s.begin + len;
    return s;
  };
  if (p.callsign) out.callsign = remap(*p.callsign);
  for (std::size_t g = 0; g < p.groups.size(); ++g) {
    if (p.groups[g].value) out.groups[g].value = remap(*p.groups[g].value);
    if (p.groups[g].unit) out.groups[g].unit = remap(*p.groups[g].unit);
  }
  for (std::size_t r : p.residual) out.residual.push_back(new_index[r]);
  out.labels = parser::LabelsFromSpans(out.EntitySpans(), out.words.size());
  return out;
}

std::vector<Segment> ConvertGrammarSegments(const ParsedCommunication &p) {
  if (!p.callsign && p.groups.empty()) {
    throw Error(ErrorCode::kEmptyCommunication,
                "nothing to read back: no callsign and no command");
  }
  std::vector<Segment> segments;
  for (std::size_t g = 0; g < p.groups.size(); ++g) {
    const CommandGroup &group = p.groups[g];
    std::vector<Span> spans = {group.command};
    if (group.value) spans.push_back(*group.value);
    if (group.unit) spans.push_back(*group.unit);
    std::sort(spans.begin(), spans.end());
    for (const Span &s : spans) {
      segments.push_back({s.cls, p.SpanWords(s), static_cast<int>(g)});
    }
  }
  if (p.callsign) {
    segments.push_back({EntityClass::kCallsign, p.SpanWords(*p.callsign), -1});
  }
  return segments;
}

namespace {

Words Concat(const std::vector<Segment> &segments) {
  Words words;
  for (const Segment &s : segments) {
    words.insert(words.end(), s.words.begin(), s.words.end());
  }
  return words;
}

// Uniform double in [0, 1) from the top 53 bits.
double Unit(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t Pick(std::mt19937_64 &rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

}  // namespace

Words ConvertGrammar(const ParsedCommunication &p) {
  return Concat(ConvertGrammarSegments(p));
}

std::optional<Words> FlipCommand(std::span<const std::string> command) {
  static const std::map<std::string, std::string, std::less<>> kOpposite = {
      {"left", "right"},         {"right", "left"},
      {"climb", "descend"},      {"descend", "climb"},
      {"climbing", "descending"}, {"descending", "climbing"},
      {"increase", "reduce"},    {"reduce", "increase"},
  };
  Words out(command.begin(), command.end());
  bool flipped = false;
  for (auto &w : out) {
    auto it = kOpposite.find(w);
    if (it != kOpposite.end()) {
      w = it->second;
      flipped = true;
    }
  }
  if (!flipped) return std::nullopt;
  return out;
}

// ---------------------------------------------------------------------------
// Error injection

ReadbackResult InjectError(const ReadbackResult &r, const ErrorSpec &spec,
                           const FixRuleSet &rules) {
  spec.Validate();
  if (r.injected_error) {
    throw Error(ErrorCode::kInvalidArgument,
                "read-back already carries an injected error");
  }
  if (spec.kind == ErrorKind::kNone) return r;

  std::mt19937_64 rng(MixSeed(spec.seed ^ Fnv1a(JoinWords(r.words))));
  if (!(Unit(rng) < spec.probability)) return r;

  ReadbackResult out = r;
  auto inapplicable = [&](std::string_view why) {
    out.diagnostics.push_back("inapplicable_kind: " +
                              std::string(ErrorKindName(spec.kind)) + ": " +
                              std::string(why));
    return out;
  };

  InjectedError err;
  err.kind = spec.kind;
  switch (spec.kind) {
    case ErrorKind::kNone:
      return out;

    case ErrorKind::kCommandFlip: {
      struct Candidate {
        std::size_t segment;
        Words emitted;
        Words source;
      };
      std::vector<Candidate> candidates;
      for (std::size_t s = 0; s < r.segments.size(); ++s) {
        const Segment &seg = r.segments[s];
        if (seg.cls != EntityClass::kCommand || seg.group < 0 ||
            static_cast<std::size_t>(seg.group) >= r.source.groups.size()) {
          continue;
        }
        Words src = r.source.SpanWords(r.source.groups[seg.group].command);
        auto flipped = FlipCommand(src);
        if (!flipped) continue;
        // Prefer the read-back phrasing of the opposite instruction; when
        // the fixer maps both directions to the same words, say the
        // flipped instruction itself.
        Words emitted = rules.Fix(*flipped);
        if (emitted == seg.words) emitted = *flipped;
        if (emitted == seg.words) continue;
        candidates.push_back({s, std::move(emitted), std::move(src)});
      }
      if (candidates.empty()) return inapplicable("no command has an opposite");
      Candidate &c = candidates[Pick(rng, candidates.size())];
      err.segment = c.segment;
      err.original = r.segments[c.segment].words;
      err.replaced = std::move(c.emitted);
      err.source = std::move(c.source);
      break;
    }

    case ErrorKind::kValuePerturb: {
      const auto &alphabet = lexicon::SpokenAlphabet::Get();
      std::vector<std::pair<std::size_t, std::size_t>> candidates;
      for (std::size_t s = 0; s < r.segments.size(); ++s) {
        if (r.segments[s].cls != EntityClass::kValue) continue;
        for (std::size_t k = 0; k < r.segments[s].words.size(); ++k) {
          if (alphabet.IsDigitWord(r.segments[s].words[k])) {
            candidates.emplace_back(s, k);
          }
        }
      }
      if (candidates.empty()) return inapplicable("no digit in any value");
      auto [s, k] = candidates[Pick(rng, candidates.size())];
      const int digit = *alphabet.CharFor(r.segments[s].words[k]) - '0';
      const int other = (digit + 1 + static_cast<int>(Pick(rng, 9))) % 10;
      err.segment = s;
      err.original = r.segments[s].words;
      err.replaced = err.original;
      err.replaced[k] = std::string(alphabet.WordFor(static_cast<char>('0' + other)));
      err.source = err.original;
      break;
    }

    case ErrorKind::kCallsignSwap: {
      const auto &alphabet = lexicon::SpokenAlphabet::Get();
      std::optional<std::size_t> seg_index;
      for (std::size_t s = 0; s < r.segments.size(); ++s) {
        if (r.segments[s].cls == EntityClass::kCallsign) seg_index = s;
      }
      if (!seg_index) return inapplicable("no callsign");
      const Words &cs = r.segments[*seg_index].words;
      std::vector<std::size_t> pairs;
      for (std::size_t k = 0; k + 1 < cs.size(); ++k) {
        if (alphabet.IsTailWord(cs[k]) && alphabet.IsTailWord(cs[k + 1]) &&
            cs[k] != cs[k + 1]) {
          pairs.push_back(k);
        }
      }
      if (pairs.empty()) return inapplicable("no two distinct adjacent tail words");
      std::size_t k = pairs[Pick(rng, pairs.size())];
      err.segment = *seg_index;
      err.original = cs;
      err.replaced = cs;
      std::swap(err.replaced[k], err.replaced[k + 1]);
      err.source = cs;
      break;
    }
  }

  out.segments[err.segment].words = err.replaced;
  out.words = Concat(out.segments);
  out.injected_error = std::move(err);
  return out;
}

ReadbackResult GenerateReadback(const ParsedCommunication &p,
                                const FixRuleSet &rules, const ErrorSpec &spec) {
  ReadbackResult r;
  r.source = p;
  r.segments = ConvertGrammarSegments(ApplyWordFixer(p, rules));
  r.words = Concat(r.segments);
  return InjectError(r, spec, rules);
}

}  // namespace pseudopilot::readback
