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

#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "pseudopilot/error.hpp"
#include "pseudopilot/lexicon.hpp"

using namespace pseudopilot;
using namespace pseudopilot::lexicon;

namespace {

ErrorCode CodeOf(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::kIo;
}

std::string RandomCode(std::mt19937_64 &rng, const std::vector<std::string> &designators) {
  std::string code = designators[rng() % designators.size()];
  const std::size_t tail = 1 + rng() % 4;
  for (std::size_t i = 0; i < tail; ++i) {
    code.push_back(rng() % 2 ? static_cast<char>('0' + rng() % 10)
                             : static_cast<char>('A' + rng() % 26));
  }
  return code;
}

}  // namespace

TEST_CASE("text helpers") {
  CHECK(SplitWords("  a\tb \n c ") == Words{"a", "b", "c"});
  CHECK(JoinWords(Words{"a", "b"}) == "a b");
  CHECK(Trim("  x y ") == "x y");
  CHECK(SplitFields("a\t\tb", '\t') == std::vector<std::string>{"a", "", "b"});
  CHECK(Fnv1a("") == 14695981039346656037ull);
  CHECK(Fnv1a("a") == 0xaf63dc4c8601ec8cull);
  CHECK(MixSeed(1) != MixSeed(2));
  CHECK(CodeOf([] { ReadFile("/nonexistent/file"); }) == ErrorCode::kIo);
}

TEST_CASE("spelling alphabet") {
  const auto &a = SpokenAlphabet::Get();
  CHECK(a.WordFor('9') == "nine");
  CHECK(a.WordFor('q') == "quebec");
  CHECK(a.WordFor('X') == "xray");
  CHECK(a.WordFor('-').empty());
  CHECK(a.CharFor("bravo") == 'B');
  CHECK(a.CharFor("zero") == '0');
  CHECK_FALSE(a.CharFor("ryanair").has_value());
  CHECK(a.Canonical("niner") == "nine");
  CHECK(a.Canonical("tree") == "three");
  CHECK(a.Canonical("fife") == "five");
  CHECK(a.Canonical("alpha") == "alfa");
  CHECK(a.Canonical("hello") == "hello");
  for (char c = 'A'; c <= 'Z'; ++c) CHECK(a.CharFor(a.WordFor(c)) == c);
  for (char c = '0'; c <= '9'; ++c) CHECK(a.CharFor(a.WordFor(c)) == c);
}

TEST_CASE("normalize words") {
  CHECK(NormalizeWords("Ryanair Niner Two, BRAVO quebec!") ==
        Words{"ryanair", "nine", "two", "bravo", "quebec"});
  CHECK(NormalizeWords("tree fife X-Ray") == Words{"three", "five", "xray"});
  CHECK(NormalizeWords(" , ; ").empty());

  SUBCASE("idempotent") {
    std::mt19937_64 rng(7);
    const std::string chars = "abz NIner,.-tree fife\tALPHA\xc3\xa9 0 9";
    for (int n = 0; n < 500; ++n) {
      std::string t;
      const std::size_t len = rng() % 40;
      for (std::size_t i = 0; i < len; ++i) t.push_back(chars[rng() % chars.size()]);
      Words once = NormalizeWords(t);
      CHECK(NormalizeWords(JoinWords(once)) == once);
    }
  }
}

TEST_CASE("telephony table") {
  const auto &t = TelephonyTable::Default();
  CHECK(t.Designators().size() >= 20);
  REQUIRE(t.Spoken("RYR") != nullptr);
  CHECK(*t.Spoken("RYR") == Words{"ryanair"});
  CHECK(*t.Spoken("AUA") == Words{"austrian"});
  CHECK(*t.Spoken("DLH") == Words{"hansa"});
  CHECK(t.Spoken("ZZZ") == nullptr);
  CHECK(t.Designator(Words{"lufthansa"}) == "DLH");
  CHECK(t.Designator(Words{"air", "france"}) == "AFR");
  auto m = t.MatchAt(Words{"x", "air", "france", "one"}, 1);
  REQUIRE(m);
  CHECK(m->first == "AFR");
  CHECK(m->second == 2);

  CHECK(CodeOf([] { TelephonyTable::Parse("RYR\tryanair\nRYR2\tother\n"); }) ==
        ErrorCode::kDataFormat);
  CHECK(CodeOf([] { TelephonyTable::Parse("RYR\tryanair\nEZY\tryanair\n"); }) ==
        ErrorCode::kDuplicateEntry);
  CHECK(CodeOf([] { TelephonyTable::Parse("RYR ryanair\n"); }) == ErrorCode::kDataFormat);
  CHECK(CodeOf([] { TelephonyTable::Parse("ABC\tbravo air\n"); }) ==
        ErrorCode::kDataFormat);
  auto custom = TelephonyTable::Parse("# comment\n\nXYZ\texample air\n");
  CHECK(custom.Designators() == std::vector<std::string>{"XYZ"});
}

TEST_CASE("command vocabulary") {
  const auto &v = CommandVocabulary::Default();
  CHECK(v.commands().size() == 15);
  Words w{"turn", "right", "heading", "zero"};
  auto m = v.LongestMatch(w, 0);
  REQUIRE(m);
  CHECK(m->length == 3);
  CHECK(v.commands()[m->index].kind == ValueKind::kHeading);
  CHECK_FALSE(v.LongestMatch(w, 3).has_value());
  CHECK(CodeOf([] { CommandVocabulary::Parse("descend\tbogus\n"); }) ==
        ErrorCode::kDataFormat);
  CHECK(CodeOf([] { CommandVocabulary::Parse("descend\tlevel\ndescend\tlevel\n"); }) ==
        ErrorCode::kDuplicateEntry);
}

TEST_CASE("longest match is independent of insertion order") {
  std::vector<Words> phrases = {{"turn"},           {"turn", "left"},
                                {"turn", "left", "heading"}, {"left"},
                                {"heading", "left"}, {"turn", "right"}};
  std::mt19937_64 rng(3);
  std::vector<Words> inputs;
  const std::vector<std::string> vocab = {"turn", "left", "right", "heading", "x"};
  for (int i = 0; i < 200; ++i) {
    Words w(1 + rng() % 6);
    for (auto &s : w) s = vocab[rng() % vocab.size()];
    inputs.push_back(w);
  }
  auto outcomes = [&](const std::vector<Words> &order) {
    PhraseSet set;
    for (const auto &p : order) set.Add(p);
    std::vector<std::optional<Words>> out;
    for (const auto &w : inputs) {
      for (std::size_t pos = 0; pos < w.size(); ++pos) {
        auto m = set.LongestMatch(w, pos);
        out.push_back(m ? std::optional<Words>(set.phrases()[m->index]) : std::nullopt);
      }
    }
    return out;
  };
  auto reference = outcomes(phrases);
  for (int n = 0; n < 20; ++n) {
    std::shuffle(phrases.begin(), phrases.end(), rng);
    CHECK(outcomes(phrases) == reference);
  }
  PhraseSet s;
  CHECK(s.Add({"a"}));
  CHECK_FALSE(s.Add({"a"}));
}

TEST_CASE("expand and compress callsigns") {
  const auto &lex = Lexicon::Default();
  CHECK(lex.ExpandCallsign("RYR92BQ") ==
        Words{"ryanair", "nine", "two", "bravo", "quebec"});
  CHECK(lex.ExpandCallsign("aua392p") == Words{"austrian", "three", "nine", "two", "papa"});
  CHECK(lex.CompressSpoken(Words{"lufthansa", "three", "two", "one"}) == "DLH321");
  CHECK(lex.CompressSpoken(Words{"hansa", "three", "two", "one"}) == "DLH321");

  CHECK(CodeOf([&] { lex.ExpandCallsign("ZZZ123"); }) == ErrorCode::kUnknownDesignator);
  CHECK(CodeOf([&] { lex.ExpandCallsign("RY1"); }) == ErrorCode::kMalformedCallsign);
  CHECK(CodeOf([&] { lex.ExpandCallsign("RYR12345"); }) == ErrorCode::kMalformedCallsign);
  CHECK(CodeOf([&] { lex.ExpandCallsign("RYR"); }) == ErrorCode::kMalformedCallsign);
  CHECK(CodeOf([&] { lex.CompressSpoken(Words{"nine", "two"}); }) ==
        ErrorCode::kNotACallsign);
  CHECK(CodeOf([&] { lex.CompressSpoken(Words{"ryanair", "nine", "hello"}); }) ==
        ErrorCode::kUnmappableWord);
  CHECK(IsWellFormedCallsign("RYR92BQ"));
  CHECK_FALSE(IsWellFormedCallsign("R1R92"));
  CHECK(ExpandDigits("092") == Words{"zero", "nine", "two"});
  CHECK(CodeOf([] { ExpandDigits("09a"); }) == ErrorCode::kNonDigit);
}

TEST_CASE("round trip over random codes") {
  const auto &lex = Lexicon::Default();
  const auto designators = lex.telephony().Designators();
  std::set<std::string> vocabulary;
  for (const auto &e : lex.telephony().entries()) {
    vocabulary.insert(e.spoken.begin(), e.spoken.end());
  }
  for (char c = '0'; c <= '9'; ++c) vocabulary.insert(std::string(lex.alphabet().WordFor(c)));
  for (char c = 'A'; c <= 'Z'; ++c) vocabulary.insert(std::string(lex.alphabet().WordFor(c)));

  std::mt19937_64 rng(11);
  for (int n = 0; n < 1000; ++n) {
    const std::string code = RandomCode(rng, designators);
    Words spoken = lex.ExpandCallsign(code);
    CHECK(lex.CompressSpoken(spoken) == code);
    for (const auto &w : spoken) CHECK(vocabulary.count(w) == 1);
  }
}
