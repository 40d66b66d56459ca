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

#include <random>

#include "doctest.h"
#include "json.hpp"
#include "pseudopilot/corpus.hpp"
#include "pseudopilot/entity_parser.hpp"
#include "pseudopilot/error.hpp"
#include "pseudopilot/wire.hpp"

using namespace pseudopilot;
using namespace pseudopilot::parser;

namespace {

ParsedCommunication P(std::string_view text) {
  return Parse(Transcript::FromText(text));
}

std::vector<Span> Spans(std::string_view text) { return P(text).EntitySpans(); }

}  // namespace

TEST_CASE("label helpers") {
  CHECK(LabelName(Label::kO) == "O");
  CHECK(LabelName(BeginLabel(EntityClass::kUnit)) == "B-unit");
  CHECK(ParseLabel("I-command") == InsideLabel(EntityClass::kCommand));
  CHECK_FALSE(ParseLabel("B-foo").has_value());
  CHECK(LabelClass(Label::kO) == std::nullopt);
  CHECK(ParseClass("value") == EntityClass::kValue);

  std::vector<Label> ok = {BeginLabel(EntityClass::kCallsign),
                           InsideLabel(EntityClass::kCallsign), Label::kO,
                           BeginLabel(EntityClass::kValue)};
  CHECK(IsValidBio(ok));
  std::vector<Label> bad = {Label::kO, InsideLabel(EntityClass::kValue)};
  CHECK_FALSE(IsValidBio(bad));
  std::vector<Label> bad2 = {BeginLabel(EntityClass::kValue),
                             InsideLabel(EntityClass::kUnit)};
  CHECK_FALSE(IsValidBio(bad2));

  auto spans = SpansFromLabels(ok);
  REQUIRE(spans.size() == 2);
  CHECK(spans[0] == Span{EntityClass::kCallsign, 0, 2});
  CHECK(spans[1] == Span{EntityClass::kValue, 3, 4});
  CHECK(LabelsFromSpans(spans, 4) == ok);
}

TEST_CASE("golden utterance") {
  auto p = P("ryanair nine two bravo quebec turn right heading zero nine zero");
  auto spans = p.EntitySpans();
  REQUIRE(spans.size() == 3);
  CHECK(spans[0] == Span{EntityClass::kCallsign, 0, 5});
  CHECK(spans[1] == Span{EntityClass::kCommand, 5, 8});
  CHECK(spans[2] == Span{EntityClass::kValue, 8, 11});
  CHECK(p.residual.empty());
  CHECK(DetectSpeakerRole(p) == SpeakerRole::kAtco);
  CHECK(RenderTagged(p) ==
        "<callsign> ryanair nine two bravo quebec </callsign> <command> turn right "
        "heading </command> <value> zero nine zero </value>");
}

TEST_CASE("units and values") {
  auto p = P("austrian three nine two papa descend flight level one two zero");
  REQUIRE(p.groups.size() == 1);
  REQUIRE(p.groups[0].unit);
  REQUIRE(p.groups[0].value);
  CHECK(p.SpanWords(*p.groups[0].unit) == Words{"flight", "level"});
  CHECK(p.SpanWords(*p.groups[0].value) == Words{"one", "two", "zero"});

  p = P("hansa three two one climb five thousand feet");
  REQUIRE(p.groups.size() == 1);
  CHECK(p.SpanWords(*p.groups[0].value) == Words{"five", "thousand"});
  CHECK(p.SpanWords(*p.groups[0].unit) == Words{"feet"});

  p = P("speedbird one two contact one two one decimal eight");
  REQUIRE(p.groups.size() == 1);
  CHECK(p.SpanWords(*p.groups[0].value) ==
        Words{"one", "two", "one", "decimal", "eight"});
}

TEST_CASE("tail and value ambiguity") {
  // "nine" belongs to the open callsign, then to the value after a command.
  auto p = P("ryanair nine two nine descend nine thousand");
  REQUIRE(p.callsign);
  CHECK(p.SpanWords(*p.callsign) == Words{"ryanair", "nine", "two", "nine"});
  CHECK(p.SpanWords(*p.groups.at(0).value) == Words{"nine", "thousand"});
}

TEST_CASE("callsign variants and roles") {
  auto p = P("three nine two papa turn left heading one eight zero");
  REQUIRE(p.callsign);
  CHECK(p.SpanWords(*p.callsign) == Words{"three", "nine", "two", "papa"});

  // All-digit run at the start is not treated as a dropped designator.
  p = P("three two one descend");
  CHECK_FALSE(p.callsign.has_value());

  p = P("descending flight level one two zero ryanair nine two");
  REQUIRE(p.callsign);
  CHECK(p.callsign->end == p.words.size());
  CHECK(DetectSpeakerRole(p) == SpeakerRole::kPilot);

  p = P("good morning all stations");
  CHECK_FALSE(p.callsign.has_value());
  CHECK(DetectSpeakerRole(p) == SpeakerRole::kUnknown);
  CHECK(p.residual.size() == 4);

  p = P("");
  CHECK(p.words.empty());
  CHECK(p.EntitySpans().empty());
}

TEST_CASE("assemble keeps one value and unit per group") {
  Words w = {"descend", "one", "two", "feet", "three"};
  std::vector<Label> l = {BeginLabel(EntityClass::kCommand), BeginLabel(EntityClass::kValue),
                          InsideLabel(EntityClass::kValue), BeginLabel(EntityClass::kUnit),
                          BeginLabel(EntityClass::kValue)};
  auto p = Assemble(w, l);
  REQUIRE(p.groups.size() == 1);
  CHECK(*p.groups[0].value == Span{EntityClass::kValue, 1, 3});
  CHECK(*p.groups[0].unit == Span{EntityClass::kUnit, 3, 4});
  CHECK(p.residual == std::vector<std::size_t>{4});
  CHECK(p.labels[4] == Label::kO);
}

TEST_CASE("span partition and BIO validity") {
  std::mt19937_64 rng(5);
  const std::vector<std::string> vocab = {
      "ryanair", "nine",   "two",    "bravo", "turn",    "right",  "heading",
      "descend", "flight", "level",  "feet",  "thousand", "hello", "contact",
      "decimal", "austrian", "papa", "climb", "knots",   "reduce", "speed"};
  for (int n = 0; n < 1000; ++n) {
    Words w(rng() % 16);
    for (auto &s : w) s = vocab[rng() % vocab.size()];
    Transcript t;
    t.words = w;
    auto labels = TagWords(t);
    REQUIRE(labels.size() == w.size());
    CHECK(IsValidBio(labels));
    auto p = Parse(t);
    CHECK(IsValidBio(p.labels));
    std::vector<std::pair<std::size_t, std::string>> pieces;
    for (const auto &s : p.EntitySpans()) {
      for (std::size_t i = s.begin; i < s.end; ++i) pieces.emplace_back(i, w[i]);
    }
    for (std::size_t i : p.residual) pieces.emplace_back(i, w[i]);
    std::sort(pieces.begin(), pieces.end());
    Words rebuilt;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      CHECK(pieces[k].first == k);
      rebuilt.push_back(pieces[k].second);
    }
    CHECK(rebuilt == w);
    // Deterministic.
    CHECK(TagWords(t) == labels);
  }
}

TEST_CASE("synthetic utterances parse to their gold spans") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    auto u = corpus::GenerateUtterance(seed);
    Transcript t;
    t.words = u.words;
    auto p = Parse(t);
    INFO(JoinWords(u.words));
    CHECK(p.EntitySpans() == u.gold);
  }
}

TEST_CASE("tagger factory") {
  CHECK(MakeTagger("builtin")->Name() == "builtin");
  CHECK_THROWS_AS(MakeTagger("bogus"), Error);
  CHECK_THROWS_AS(MakeTagger("external:notaport"), Error);
}

TEST_CASE("external tagger over the wire") {
  using nlohmann::json;
  wire::FrameServer server([](const std::string &req) {
    auto j = json::parse(req);
    Transcript t;
    t.words = SplitWords(j["words"].get<std::string>());
    json tags = json::array();
    for (auto l : TagWords(t)) tags.push_back(LabelName(l));
    return json{{"tags", tags}}.dump();
  });
  auto tagger = MakeTagger("external:" + server.endpoint().ToString());
  auto p = Parse(Transcript::FromText("ryanair nine two descend flight level one two zero"),
                 *tagger);
  CHECK(p.EntitySpans() == Spans("ryanair nine two descend flight level one two zero"));

  wire::FrameServer wrong_length([](const std::string &) {
    return std::string(R"({"tags":["O"]})");
  });
  ExternalTagger bad(wrong_length.endpoint(), std::chrono::milliseconds(1000));
  Words w = {"a", "b"};
  try {
    bad.Tag(w);
    FAIL("expected parse error");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kParseError);
  }

  wire::FrameServer unknown_label([](const std::string &) {
    return std::string(R"({"tags":["B-foo","O"]})");
  });
  ExternalTagger bad2(unknown_label.endpoint(), std::chrono::milliseconds(1000));
  CHECK_THROWS_AS(bad2.Tag(w), Error);
}
