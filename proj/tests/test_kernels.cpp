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
#include "oracles.hpp"
#include "pseudopilot/error.hpp"
#include "pseudopilot/kernels.hpp"

using namespace pseudopilot;
using namespace pseudopilot::kernels;

namespace {

constexpr int kThreadCounts[] = {1, 2, 3, 8};

bool SameParse(const parser::ParsedCommunication &a, const parser::ParsedCommunication &b) {
  return a.words == b.words && a.labels == b.labels && a.callsign == b.callsign &&
         a.groups == b.groups && a.residual == b.residual;
}

}  // namespace

TEST_CASE("parse batch") {
  std::vector<parser::Transcript> ts;
  for (std::uint64_t s = 0; s < 400; ++s) {
    parser::Transcript t;
    t.words = corpus::GenerateUtterance(s).words;
    ts.push_back(std::move(t));
  }
  auto ref = ParseBatchSerial(ts, parser::BuiltinTagger());
  for (int th : kThreadCounts) {
    auto got = ParseBatch(ts, parser::BuiltinTagger(), {th});
    REQUIRE(got.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(SameParse(got[i], ref[i]));
  }
}

TEST_CASE("rerank batch") {
  std::vector<std::string> codes = {"AUA392P", "DLH6LY", "RYR92BQ", "BAW12", "EZY8KL"};
  auto ctx = resolver::ExpandContext(codes).context;
  std::mt19937_64 rng(4);
  const std::vector<std::string> vocab = {"nine", "two", "papa", "hansa", "six", "lima",
                                          "speedbird", "one"};
  std::vector<std::optional<Words>> queries;
  for (int i = 0; i < 300; ++i) {
    if (i % 10 == 0) {
      queries.push_back(std::nullopt);
    } else {
      auto q = oracle::RandomSeq(rng, 5, vocab);
      q.push_back("two");
      queries.push_back(q);
    }
  }
  auto ref = RerankBatchSerial(queries, ctx, {});
  for (int th : kThreadCounts) {
    auto got = RerankBatch(queries, ctx, {}, {th});
    for (std::size_t i = 0; i < ref.size(); ++i) {
      CHECK(got[i].status == ref[i].status);
      CHECK(got[i].icao == ref[i].icao);
      CHECK(got[i].cost == ref[i].cost);
    }
  }
  // Item errors surface after the batch.
  resolver::SurveillanceContext empty;
  try {
    RerankBatch(queries, empty, {}, {2});
    FAIL("expected EmptyContext");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kEmptyContext);
  }
}

TEST_CASE("wer, gate and entity batches") {
  std::mt19937_64 rng(8);
  const std::vector<std::string> vocab = {"a", "b", "c", "d"};
  std::vector<Words> refs, hyps;
  for (int i = 0; i < 500; ++i) {
    auto r = oracle::RandomSeq(rng, 10, vocab);
    r.push_back("a");
    refs.push_back(r);
    hyps.push_back(oracle::RandomSeq(rng, 10, vocab));
  }
  auto wref = WerBatchSerial(refs, hyps);
  std::vector<corpus::RecordingMetadata> recs;
  for (int i = 0; i < 500; ++i) {
    recs.push_back({"r" + std::to_string(i), (rng() % 1300) / 10.0,
                    (static_cast<int>(rng() % 40) - 10) / 2.0, (rng() % 101) / 100.0, "", 16000});
  }
  corpus::FilterThresholds th;
  auto gref = GateBatchSerial(recs, th);

  std::vector<std::vector<parser::Span>> gold, pred;
  for (std::uint64_t s = 0; s < 300; ++s) {
    auto u = corpus::GenerateUtterance(s);
    gold.push_back(u.gold);
    auto p = u.gold;
    if (s % 3 == 0) p.pop_back();
    pred.push_back(p);
  }
  auto eref = CountEntitiesBatchSerial(gold, pred);

  for (int t : kThreadCounts) {
    auto w = WerBatch(refs, hyps, {t});
    CHECK(w.total.errors() == wref.total.errors());
    CHECK(w.total.substitutions == wref.total.substitutions);
    CHECK(w.total.ref_length == wref.total.ref_length);
    CHECK(GateBatch(recs, th, {t}) == gref);
    auto e = CountEntitiesBatch(gold, pred, {t});
    for (auto cls : parser::kAllClasses) {
      CHECK(e[cls].tp == eref[cls].tp);
      CHECK(e[cls].fp == eref[cls].fp);
      CHECK(e[cls].fn == eref[cls].fn);
    }
  }
  CHECK_THROWS_AS(WerBatch(refs, std::span(hyps).subspan(1)), Error);
  CHECK(MaxThreads() >= 1);
}
