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

// Serial vs OpenMP batch kernels. Arg 0 of the parallel variants is the
// thread count.

#include <random>

#include <benchmark/benchmark.h>

#include "pseudopilot/kernels.hpp"

using namespace pseudopilot;
using namespace pseudopilot::kernels;

namespace {

constexpr std::size_t kItems = 2000;

const std::vector<parser::Transcript> &Transcripts() {
  static const auto v = [] {
    std::vector<parser::Transcript> out;
    for (std::uint64_t s = 0; s < kItems; ++s) {
      out.push_back(parser::Transcript{corpus::GenerateUtterance(s).words});
    }
    return out;
  }();
  return v;
}

struct RerankInput {
  resolver::SurveillanceContext context;
  std::vector<std::optional<Words>> queries;
};

const RerankInput &Rerank() {
  static const auto v = [] {
    RerankInput in;
    std::vector<std::string> codes;
    std::vector<std::optional<Words>> queries;
    for (std::uint64_t s = 0; s < 50; ++s) codes.push_back(corpus::GenerateUtterance(s).icao);
    in.context = resolver::ExpandContext(codes).context;
    for (std::uint64_t s = 0; s < kItems; ++s) {
      auto u = corpus::GenerateUtterance(s);
      Words cs(u.words.begin(), u.words.begin() + u.gold[0].end);
      if (s % 2 && cs.size() > 2) cs.erase(cs.begin());
      in.queries.push_back(std::move(cs));
    }
    return in;
  }();
  return v;
}

struct Pairs {
  std::vector<Words> refs, hyps;
};

const Pairs &WerPairs() {
  static const auto v = [] {
    Pairs p;
    std::mt19937_64 rng(5);
    for (std::uint64_t s = 0; s < kItems; ++s) {
      auto w = corpus::GenerateUtterance(s).words;
      auto h = w;
      for (auto &x : h) {
        if (rng() % 8 == 0) x = "uh";
      }
      if (rng() % 4 == 0) h.pop_back();
      p.refs.push_back(std::move(w));
      p.hyps.push_back(std::move(h));
    }
    return p;
  }();
  return v;
}

const std::vector<corpus::RecordingMetadata> &Records() {
  static const auto v = [] {
    std::vector<corpus::RecordingMetadata> out;
    std::mt19937_64 rng(6);
    for (std::size_t i = 0; i < kItems * 50; ++i) {
      out.push_back({"r" + std::to_string(i), (rng() % 1300) / 10.0,
                     (static_cast<int>(rng() % 40) - 10) / 2.0, (rng() % 101) / 100.0, "", 16000});
    }
    return out;
  }();
  return v;
}

struct SpanSets {
  std::vector<std::vector<parser::Span>> gold, pred;
};

const SpanSets &Spans() {
  static const auto v = [] {
    SpanSets s;
    for (std::uint64_t i = 0; i < kItems; ++i) {
      auto u = corpus::GenerateUtterance(i);
      s.gold.push_back(u.gold);
      if (i % 3 == 0) u.gold.pop_back();
      s.pred.push_back(u.gold);
    }
    return s;
  }();
  return v;
}

void BM_ParseSerial(benchmark::State &state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(ParseBatchSerial(Transcripts(), parser::BuiltinTagger()));
  }
}
void BM_ParseParallel(benchmark::State &state) {
  const int th = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ParseBatch(Transcripts(), parser::BuiltinTagger(), {th}));
  }
}

void BM_RerankSerial(benchmark::State &state) {
  const auto &in = Rerank();
  for (auto _ : state) benchmark::DoNotOptimize(RerankBatchSerial(in.queries, in.context, {}));
}
void BM_RerankParallel(benchmark::State &state) {
  const auto &in = Rerank();
  const int th = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(RerankBatch(in.queries, in.context, {}, {th}));
}

void BM_WerSerial(benchmark::State &state) {
  const auto &p = WerPairs();
  for (auto _ : state) benchmark::DoNotOptimize(WerBatchSerial(p.refs, p.hyps));
}
void BM_WerParallel(benchmark::State &state) {
  const auto &p = WerPairs();
  const int th = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(WerBatch(p.refs, p.hyps, {th}));
}

void BM_GateSerial(benchmark::State &state) {
  for (auto _ : state) benchmark::DoNotOptimize(GateBatchSerial(Records(), {}));
}
void BM_GateParallel(benchmark::State &state) {
  const int th = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(GateBatch(Records(), {}, {th}));
}

void BM_EntitiesSerial(benchmark::State &state) {
  const auto &s = Spans();
  for (auto _ : state) benchmark::DoNotOptimize(CountEntitiesBatchSerial(s.gold, s.pred));
}
void BM_EntitiesParallel(benchmark::State &state) {
  const auto &s = Spans();
  const int th = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(CountEntitiesBatch(s.gold, s.pred, {th}));
}

}  // namespace

BENCHMARK(BM_ParseSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ParseParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RerankSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RerankParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WerSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WerParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GateParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EntitiesSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EntitiesParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
