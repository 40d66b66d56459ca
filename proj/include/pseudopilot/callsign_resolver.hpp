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

// Re-ranking of an extracted callsign against the callsigns known from
// surveillance data. Distances are word-level weighted Levenshtein; each
// known callsign contributes its full spoken form plus shortened variants.

#ifndef PSEUDOPILOT_CALLSIGN_RESOLVER_HPP_
#define PSEUDOPILOT_CALLSIGN_RESOLVER_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pseudopilot/lexicon.hpp"
#include "pseudopilot/text.hpp"

namespace pseudopilot::resolver {

struct EditWeights {
  double substitution = 1.0;
  double insertion = 1.0;
  double deletion = 1.0;

  // Throws kInvalidArgument when any weight is negative or not finite.
  void Validate() const;
};

// Minimal cost of turning `a` into `b`: deletions remove words of `a`,
// insertions add words of `b`. O(|a|·|b|) time, O(|b|) memory.
double WeightedLevenshtein(std::span<const std::string> a,
                           std::span<const std::string> b,
                           const EditWeights &weights = {});

struct CallsignRecord {
  std::string icao;
  std::vector<Words> variants;  // variants[0] is the full expansion
  std::optional<std::int64_t> valid_from;  // unix seconds
  std::optional<std::int64_t> valid_to;

  bool ValidAt(std::int64_t t) const {
    return (!valid_from || t >= *valid_from) && (!valid_to || t <= *valid_to);
  }
};

struct SurveillanceContext {
  std::vector<CallsignRecord> records;  // icao unique
  std::int64_t snapshot_time = 0;
};

struct ContextFailure {
  std::string code;
  std::string message;
};

struct ContextBuild {
  SurveillanceContext context;
  std::vector<ContextFailure> failures;
};

// Full expansion, designator dropped, and designator + last three tail
// words; duplicates removed, full form first.
std::vector<Words> CallsignVariants(const lexicon::Lexicon &lexicon,
                                    std::string_view icao);

// Expands every code; bad codes are collected in `failures` and skipped.
// Duplicate codes keep their first occurrence.
ContextBuild ExpandContext(std::span<const std::string> codes,
                           const lexicon::Lexicon &lexicon =
                               lexicon::Lexicon::Default());

struct ContextEntry {
  std::string icao;
  std::optional<std::int64_t> valid_from;
  std::optional<std::int64_t> valid_to;
};

// Surveillance file: one code per line, optionally followed by
// <TAB>valid_from<TAB>valid_to as ISO-8601 UTC timestamps.
std::vector<ContextEntry> ParseContextFile(std::string_view text);
ContextBuild ExpandContext(std::span<const ContextEntry> entries,
                           const lexicon::Lexicon &lexicon =
                               lexicon::Lexicon::Default());

// "2026-10-14T08:30:00Z" (Z or no suffix, optional seconds) -> unix seconds.
std::int64_t ParseIsoTime(std::string_view text);

struct RerankOptions {
  EditWeights weights;
  std::optional<double> max_cost;           // above it -> unresolved
  std::optional<std::int64_t> at_time;      // skip records not valid then
};

enum class RerankStatus { kResolved, kSkipped, kUnresolved };
std::string_view RerankStatusName(RerankStatus status);

struct RerankResult {
  RerankStatus status = RerankStatus::kSkipped;
  std::string icao;
  Words matched_variant;
  double cost = 0.0;
};

// Closest (record, variant) pair to `extracted`; ties go to the
// lexicographically smallest icao, then the earlier variant. A missing span
// (NO_CALLSIGN) is skipped without search. Throws kEmptyContext when a
// callsign is present but the context has no usable record.
RerankResult Rerank(const std::optional<Words> &extracted,
                    const SurveillanceContext &context,
                    const RerankOptions &options = {});

}  // namespace pseudopilot::resolver

#endif  // PSEUDOPILOT_CALLSIGN_RESOLVER_HPP_
