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

// Batch kernels over independent items (transcripts, queries, recordings,
// sentence pairs). Each kernel has an OpenMP version and a plain serial
// reference; both produce identical results for any thread count, because
// every item is computed independently and merged in input order.

#ifndef PSEUDOPILOT_KERNELS_HPP_
#define PSEUDOPILOT_KERNELS_HPP_

#include <optional>
#include <span>
#include <vector>

#include "pseudopilot/callsign_resolver.hpp"
#include "pseudopilot/corpus.hpp"
#include "pseudopilot/entity_parser.hpp"

namespace pseudopilot::kernels {

// threads <= 0 uses the OpenMP default.
struct Parallelism {
  int threads = 0;
};

int MaxThreads();

// The tagger must be safe for concurrent Tag() calls (the builtin is).
std::vector<parser::ParsedCommunication> ParseBatch(
    std::span<const parser::Transcript> transcripts, const parser::Tagger &tagger,
    Parallelism par = {});
std::vector<parser::ParsedCommunication> ParseBatchSerial(
    std::span<const parser::Transcript> transcripts, const parser::Tagger &tagger);

// Exceptions raised for an item (e.g. kEmptyContext) are rethrown for the
// lowest failing index after the batch completes.
std::vector<resolver::RerankResult> RerankBatch(
    std::span<const std::optional<Words>> queries,
    const resolver::SurveillanceContext &context,
    const resolver::RerankOptions &options, Parallelism par = {});
std::vector<resolver::RerankResult> RerankBatchSerial(
    std::span<const std::optional<Words>> queries,
    const resolver::SurveillanceContext &context,
    const resolver::RerankOptions &options);

// Corpus-level totals plus per-pair results.
struct WerBatchResult {
  corpus::WerResult total;
  std::vector<corpus::WerResult> per_pair;
};
WerBatchResult WerBatch(std::span<const Words> refs, std::span<const Words> hyps,
                        Parallelism par = {});
WerBatchResult WerBatchSerial(std::span<const Words> refs,
                              std::span<const Words> hyps);

std::vector<std::optional<corpus::RejectReason>> GateBatch(
    std::span<const corpus::RecordingMetadata> records,
    const corpus::FilterThresholds &thresholds, Parallelism par = {});
std::vector<std::optional<corpus::RejectReason>> GateBatchSerial(
    std::span<const corpus::RecordingMetadata> records,
    const corpus::FilterThresholds &thresholds);

// Entity counts summed over utterances.
corpus::EntityCounts CountEntitiesBatch(
    std::span<const std::vector<parser::Span>> gold,
    std::span<const std::vector<parser::Span>> pred, Parallelism par = {});
corpus::EntityCounts CountEntitiesBatchSerial(
    std::span<const std::vector<parser::Span>> gold,
    std::span<const std::vector<parser::Span>> pred);

}  // namespace pseudopilot::kernels

#endif  // PSEUDOPILOT_KERNELS_HPP_
