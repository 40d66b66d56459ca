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

#include "pseudopilot/entity_parser.hpp"

#include <algorithm>

#include "json.hpp"
#include "pseudopilot/error.hpp"

namespace pseudopilot::parser {

namespace {

constexpr std::size_t kMaxTailWords = 4;

constexpr std::string_view kLabelNames[] = {
    "O",       "B-callsign", "I-callsign", "B-command", "I-command",
    "B-value", "I-value",    "B-unit",     "I-unit"};

void Mark(std::vector<Label> &labels, EntityClass cls, std::size_t begin,
          std::size_t end) {
  labels[begin] = BeginLabel(cls);
  for (std::size_t i = begin + 1; i < end; ++i) labels[i] = InsideLabel(cls);
}

}  // namespace

std::string_view ClassName(EntityClass cls) {
  switch (cls) {
    case EntityClass::kCallsign: return "callsign";
    case EntityClass::kCommand: return "command";
    case EntityClass::kValue: return "value";
    case EntityClass::kUnit: return "unit";
  }
  return "callsign";
}

std::optional<EntityClass> ParseClass(std::string_view name) {
  for (EntityClass c : kAllClasses) {
    if (ClassName(c) == name) return c;
  }
  return std::nullopt;
}

std::string_view LabelName(Label label) {
  return kLabelNames[static_cast<std::size_t>(label)];
}

std::optional<Label> ParseLabel(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kLabelNames); ++i) {
    if (kLabelNames[i] == name) return static_cast<Label>(i);
  }
  return std::nullopt;
}

Label BeginLabel(EntityClass cls) {
  return static_cast<Label>(1 + 2 * static_cast<int>(cls));
}

Label InsideLabel(EntityClass cls) {
  return static_cast<Label>(2 + 2 * static_cast<int>(cls));
}

std::optional<EntityClass> LabelClass(Label label) {
  if (label == Label::kO) return std::nullopt;
  return static_cast<EntityClass>((static_cast<int>(label) - 1) / 2);
}

bool IsValidBio(std::span<const Label> labels) {
  std::optional<EntityClass> open;
  for (Label l : labels) {
    if (IsInside(l) && open != LabelClass(l)) return false;
    open = LabelClass(l);
  }
  return true;
}

std::vector<Span> SpansFromLabels(std::span<const Label> labels) {
  std::vector<Span> spans;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto cls = LabelClass(labels[i]);
    if (!cls) continue;
    bool continues = IsInside(labels[i]) && !spans.empty() &&
                     spans.back().end == i && spans.back().cls == *cls;
    if (continues) {
      spans.back().end = i + 1;
    } else {
      spans.push_back({*cls, i, i + 1});
    }
  }
  return spans;
}

std::vector<Label> LabelsFromSpans(std::span<const Span> spans,
                                   std::size_t size) {
  std::vector<Label> labels(size, Label::kO);
  for (const Span &s : spans) Mark(labels, s.cls, s.begin, s.end);
  return labels;
}

std::string_view RoleName(SpeakerRole role) {
  switch (role) {
    case SpeakerRole::kAtco: return "atco";
    case SpeakerRole::kPilot: return "pilot";
    case SpeakerRole::kUnknown: return "unknown";
  }
  return "unknown";
}

Transcript Transcript::FromText(std::string_view text,
                                std::string utterance_id) {
  Transcript t;
  t.words = lexicon::NormalizeWords(text);
  t.utterance_id = std::move(utterance_id);
  return t;
}

Words ParsedCommunication::SpanWords(const Span &span) const {
  return Words(words.begin() + span.begin, words.begin() + span.end);
}

std::vector<Span> ParsedCommunication::EntitySpans() const {
  std::vector<Span> spans;
  if (callsign) spans.push_back(*callsign);
  for (const auto &g : groups) {
    spans.push_back(g.command);
    if (g.value) spans.push_back(*g.value);
    if (g.unit) spans.push_back(*g.unit);
  }
  std::sort(spans.begin(), spans.end());
  return spans;
}

// ---------------------------------------------------------------------------
// GrammarTagger

std::vector<Label> GrammarTagger::Tag(std::span<const std::string> words) const {
  const auto &alphabet = lexicon_->alphabet();
  const auto &units = lexicon::UnitPhrases();
  const std::size_t n = words.size();
  std::vector<Label> labels(n, Label::kO);

  bool group_open = false;
  bool group_has_value = false;
  bool group_has_unit = false;

  std::size_t i = 0;
  while (i < n) {
    // Full callsign: telephony phrase followed by its alphanumeric tail.
    // Tail words bind to the callsign before they can become a value.
    if (auto tel = lexicon_->telephony().MatchAt(words, i)) {
      std::size_t j = i + tel->second;
      std::size_t tail = 0;
      while (j < n && tail < kMaxTailWords && alphabet.IsTailWord(words[j])) {
        ++j;
        ++tail;
      }
      if (tail > 0) {
        Mark(labels, EntityClass::kCallsign, i, j);
        group_open = false;
        i = j;
        continue;
      }
    }

    // Shortened callsign with the designator dropped, in ATCo position.
    if (i == 0) {
      std::size_t j = 0;
      bool has_letter = false;
      while (j < n && alphabet.IsTailWord(words[j])) {
        has_letter = has_letter || alphabet.IsLetterWord(words[j]);
        ++j;
      }
      if (has_letter && j <= kMaxTailWords &&
          (j == n || !lexicon::IsValueWord(words[j]))) {
        Mark(labels, EntityClass::kCallsign, 0, j);
        i = j;
        continue;
      }
    }

    if (auto cmd = lexicon_->commands().LongestMatch(words, i)) {
      Mark(labels, EntityClass::kCommand, i, i + cmd->length);
      group_open = true;
      group_has_value = false;
      group_has_unit = false;
      i += cmd->length;
      continue;
    }

    if (group_open) {
      if (!group_has_unit) {
        if (auto unit = units.LongestMatch(words, i)) {
          Mark(labels, EntityClass::kUnit, i, i + unit->length);
          group_has_unit = true;
          i += unit->length;
          continue;
        }
      }
      if (!group_has_value && lexicon::IsValueWord(words[i])) {
        std::size_t j = i;
        while (j < n && lexicon::IsValueWord(words[j])) ++j;
        Mark(labels, EntityClass::kValue, i, j);
        group_has_value = true;
        i = j;
        continue;
      }
    }
    ++i;
  }
  return labels;
}

// ---------------------------------------------------------------------------
// ExternalTagger

ExternalTagger::ExternalTagger(wire::Endpoint endpoint,
                               std::chrono::milliseconds timeout)
    : client_(std::make_unique<wire::Client>(std::move(endpoint), timeout)) {}

std::string ExternalTagger::Name() const {
  return "external:" + client_->endpoint().ToString();
}

std::vector<Label> ExternalTagger::Tag(std::span<const std::string> words) const {
  nlohmann::json request = {{"words", JoinWords(words)}};
  std::string reply = client_->Call(request.dump());
  nlohmann::json response = nlohmann::json::parse(reply, nullptr, false);
  if (response.is_discarded() || !response.contains("tags") ||
      !response["tags"].is_array()) {
    throw Error(ErrorCode::kParseError, "external tagger: malformed reply");
  }
  const auto &tags = response["tags"];
  if (tags.size() != words.size()) {
    throw Error(ErrorCode::kParseError,
                "external tagger: expected " + std::to_string(words.size()) +
                    " tags, got " + std::to_string(tags.size()));
  }
  std::vector<Label> labels;
  labels.reserve(tags.size());
  for (const auto &t : tags) {
    auto label = t.is_string() ? ParseLabel(t.get<std::string>()) : std::nullopt;
    if (!label) {
      throw Error(ErrorCode::kParseError,
                  "external tagger: unknown label " + t.dump());
    }
    labels.push_back(*label);
  }
  return labels;
}

std::unique_ptr<Tagger> MakeTagger(std::string_view spec,
                                   std::chrono::milliseconds timeout) {
  if (spec.empty() || spec == "builtin") {
    return std::make_unique<GrammarTagger>();
  }
  constexpr std::string_view kExternal = "external:";
  if (spec.starts_with(kExternal)) {
    return std::make_unique<ExternalTagger>(
        wire::Endpoint::Parse(spec.substr(kExternal.size())), timeout);
  }
  throw Error(ErrorCode::kInvalidArgument,
              "tagger must be builtin or external:<endpoint>, got '" +
                  std::string(spec) + "'");
}

const Tagger &BuiltinTagger() {
  static const GrammarTagger kTagger;
  return kTagger;
}

std::vector<Label> TagWords(const Transcript &transcript, const Tagger &tagger) {
  return tagger.Tag(transcript.words);
}

// ---------------------------------------------------------------------------

ParsedCommunication Assemble(Words words, std::span<const Label> labels) {
  if (labels.size() != words.size()) {
    throw Error(ErrorCode::kInvalidArgument, "label/word count mismatch");
  }
  ParsedCommunication p;
  p.words = std::move(words);
  const std::vector<Span> spans = SpansFromLabels(labels);

  std::optional<Span> first_callsign;
  std::optional<Span> last_callsign;
  for (const Span &s : spans) {
    if (s.cls != EntityClass::kCallsign) continue;
    if (!first_callsign) first_callsign = s;
    last_callsign = s;
  }
  if (first_callsign && first_callsign->begin == 0) {
    p.callsign = first_callsign;
  } else {
    p.callsign = last_callsign;
  }

  CommandGroup *current = nullptr;
  for (const Span &s : spans) {
    switch (s.cls) {
      case EntityClass::kCallsign:
        current = nullptr;
        break;
      case EntityClass::kCommand:
        p.groups.push_back({s, std::nullopt, std::nullopt});
        current = &p.groups.back();
        break;
      case EntityClass::kValue:
        if (current && !current->value) current->value = s;
        break;
      case EntityClass::kUnit:
        if (current && !current->unit) current->unit = s;
        break;
    }
  }

  const std::vector<Span> kept = p.EntitySpans();
  p.labels = LabelsFromSpans(kept, p.words.size());
  for (std::size_t i = 0; i < p.words.size(); ++i) {
    if (p.labels[i] == Label::kO) p.residual.push_back(i);
  }
  return p;
}

ParsedCommunication Parse(const Transcript &transcript, const Tagger &tagger) {
  std::vector<Label> labels = tagger.Tag(transcript.words);
  ParsedCommunication p = Assemble(transcript.words, labels);
  p.utterance_id = transcript.utterance_id;
  return p;
}

SpeakerRole DetectSpeakerRole(const ParsedCommunication &parsed) {
  if (!parsed.callsign) return SpeakerRole::kUnknown;
  if (parsed.callsign->begin == 0) return SpeakerRole::kAtco;
  if (parsed.callsign->end == parsed.words.size()) return SpeakerRole::kPilot;
  return SpeakerRole::kUnknown;
}

std::string RenderTagged(const ParsedCommunication &parsed) {
  std::string out;
  auto append = [&out](std::string_view piece) {
    if (!out.empty()) out.push_back(' ');
    out += piece;
  };
  const std::vector<Span> spans = parsed.EntitySpans();
  std::size_t next = 0;
  for (std::size_t i = 0; i < parsed.words.size();) {
    if (next < spans.size() && spans[next].begin == i) {
      const Span &s = spans[next++];
      const std::string tag(ClassName(s.cls));
      append("<" + tag + ">");
      for (std::size_t k = s.begin; k < s.end; ++k) append(parsed.words[k]);
      append("</" + tag + ">");
      i = s.end;
    } else {
      append(parsed.words[i++]);
    }
  }
  return out;
}

}  // namespace pseudopilot::parser
