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

#include "pseudopilot/kernels.hpp"

#include <omp.h>

#include <exception>

#include "pseudopilot/error.hpp"

namespace pseudopilot::kernels {

namespace {

int Threads(Parallelism par) {
  return par.threads > 0 ? par.threads : omp_get_max_threads();
}

// Runs fn(i) for every index; exceptions cannot leave an OpenMP region, so
// they are parked per index and the first one (by index) is rethrown.
template <typename Fn>
void ParallelFor(std::size_t n, Parallelism par, Fn &&fn) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16) num_threads(Threads(par))
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void CheckSameSize(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::kInvalidArgument,
                "batch inputs differ in length: " + std::to_string(a) + " vs " +
                    std::to_string(b));
  }
}

}  // namespace

int MaxThreads() { return omp_get_max_threads(); }

std::vector<parser::ParsedCommunication> ParseBatch(
    std::span<const parser::Transcript> transcripts, const parser::Tagger &tagger,
    Parallelism par) {
  std::vector<parser::ParsedCommunication> out(transcripts.size());
  ParallelFor(transcripts.size(), par, [&](std::size_t i) {
    out[i] = parser::Parse(transcripts[i], tagger);
  });
  return out;
}

std::vector<parser::ParsedCommunication> ParseBatchSerial(
    std::span<const parser::Transcript> transcripts, const parser::Tagger &tagger) {
  std::vector<parser::ParsedCommunication> out;
  out.reserve(transcripts.size());
  for (const auto &t : transcripts) out.push_back(parser::Parse(t, tagger));
  return out;
}

std::vector<resolver::RerankResult> RerankBatch(
    std::span<const std::optional<Words>> queries,
    const resolver::SurveillanceContext &context,
    const resolver::RerankOptions &options, Parallelism par) {
  std::vector<resolver::RerankResult> out(queries.size());
  ParallelFor(queries.size(), par, [&](std::size_t i) {
    out[i] = resolver::Rerank(queries[i], context, options);
  });
  return out;
}

std::vector<resolver::RerankResult> RerankBatchSerial(
    std::span<const std::optional<Words>> queries,
    const resolver::SurveillanceContext &context,
    const resolver::RerankOptions &options) {
  std::vector<resolver::RerankResult> out;
  out.reserve(queries.size());
  for (const auto &q : queries) out.push_back(resolver::Rerank(q, context, options));
  return out;
}

WerBatchResult WerBatch(std::span<const Words> refs, std::span<const Words> hyps,
                        Parallelism par) {
  CheckSameSize(refs.size(), hyps.size());
  WerBatchResult r;
  r.per_pair.resize(refs.size());
  ParallelFor(refs.size(), par, [&](std::size_t i) {
    r.per_pair[i] = corpus::Wer(refs[i], hyps[i]);
  });
  for (const auto &p : r.per_pair) r.total += p;
  return r;
}

WerBatchResult WerBatchSerial(std::span<const Words> refs,
                              std::span<const Words> hyps) {
  CheckSameSize(refs.size(), hyps.size());
  WerBatchResult r;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    r.per_pair.push_back(corpus::Wer(refs[i], hyps[i]));
    r.total += r.per_pair.back();
  }
  return r;
}

std::vector<std::optional<corpus::RejectReason>> GateBatch(
    std::span<const corpus::RecordingMetadata> records,
    const corpus::FilterThresholds &thresholds, Parallelism par) {
  std::vector<std::optional<corpus::RejectReason>> out(records.size());
  ParallelFor(records.size(), par, [&](std::size_t i) {
    out[i] = corpus::GateReason(records[i], thresholds);
  });
  return out;
}

std::vector<std::optional<corpus::RejectReason>> GateBatchSerial(
    std::span<const corpus::RecordingMetadata> records,
    const corpus::FilterThresholds &thresholds) {
  std::vector<std::optional<corpus::RejectReason>> out;
  out.reserve(records.size());
  for (const auto &r : records) out.push_back(corpus::GateReason(r, thresholds));
  return out;
}

corpus::EntityCounts CountEntitiesBatch(
    std::span<const std::vector<parser::Span>> gold,
    std::span<const std::vector<parser::Span>> pred, Parallelism par) {
  CheckSameSize(gold.size(), pred.size());
  std::vector<corpus::EntityCounts> per(gold.size());
  ParallelFor(gold.size(), par, [&](std::size_t i) {
    per[i] = corpus::CountEntities(gold[i], pred[i]);
  });
  corpus::EntityCounts total;
  for (const auto &c : per) total += c;
  return total;
}

corpus::EntityCounts CountEntitiesBatchSerial(
    std::span<const std::vector<parser::Span>> gold,
    std::span<const std::vector<parser::Span>> pred) {
  CheckSameSize(gold.size(), pred.size());
  corpus::EntityCounts total;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    total += corpus::CountEntities(gold[i], pred[i]);
  }
  return total;
}

}  // namespace pseudopilot::kernels
