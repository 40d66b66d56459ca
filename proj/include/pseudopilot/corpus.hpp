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

// Corpus curation and evaluation: recording selection over precomputed
// metadata, word error rate, entity-level precision/recall/F1 and a seeded
// synthetic utterance generator with exact gold spans.

#ifndef PSEUDOPILOT_CORPUS_HPP_
#define PSEUDOPILOT_CORPUS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pseudopilot/entity_parser.hpp"
#include "pseudopilot/lexicon.hpp"
#include "pseudopilot/text.hpp"

namespace pseudopilot::corpus {

// ---------------------------------------------------------------------------
// Recording selection

struct RecordingMetadata {
  std::string id;
  double duration = 0.0;       // seconds, > 0
  double snr = 0.0;            // dB
  double english_score = 0.0;  // [0, 1]
  std::string transcript_ref;
  int sample_rate = 16000;
};

// Tab-separated `id duration snr english_score transcript_ref sample_rate`
// lines; `#` comments. Violated invariants raise kDataFormat with the line,
// a repeated id kDuplicateEntry.
std::vector<RecordingMetadata> ParseMetadata(std::string_view text);

enum class RejectReason { kTooLong, kTooShort, kLowSnr, kNonEnglish, kQuota };
std::string_view RejectReasonName(RejectReason reason);

enum class QuotaOrder { kEnglishScore, kSnr, kInputOrder };
std::optional<QuotaOrder> ParseQuotaOrder(std::string_view name);

struct FilterThresholds {
  double max_duration = 120.0;
  double min_duration = 0.5;
  double min_snr = 0.0;
  double min_english = 0.5;
  std::optional<double> target_hours;  // unset: no quota
  QuotaOrder quota_order = QuotaOrder::kEnglishScore;
};

// First failing gate in the order duration, SNR, English score. Threshold
// values themselves pass.
std::optional<RejectReason> GateReason(const RecordingMetadata &record,
                                       const FilterThresholds &thresholds);

struct FilterReport {
  std::vector<std::string> kept;  // admission order
  std::vector<std::pair<std::string, RejectReason>> rejected;  // input order
  double total_hours_kept = 0.0;
};

// Admits gate survivors in quota order (ties by id) while the running total
// is below target_hours; the record crossing the target is still kept.
FilterReport SelectRecordings(
    std::span<const RecordingMetadata> records,
    std::span<const std::optional<RejectReason>> gate_reasons,
    const FilterThresholds &thresholds);

FilterReport FilterRecordings(std::span<const RecordingMetadata> records,
                              const FilterThresholds &thresholds);

std::string FormatReportTable(const FilterReport &report);
// `kept<TAB>id`, `rejected<TAB>id<TAB>reason`, `total_hours<TAB>h` lines.
std::string FormatReportRecords(const FilterReport &report);

// ---------------------------------------------------------------------------
// Word error rate

struct WerResult {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t ref_length = 0;

  std::size_t errors() const { return substitutions + deletions + insertions; }
  double rate() const {
    return ref_length ? static_cast<double>(errors()) / ref_length : 0.0;
  }
  WerResult &operator+=(const WerResult &o) {
    substitutions += o.substitutions;
    deletions += o.deletions;
    insertions += o.insertions;
    ref_length += o.ref_length;
    return *this;
  }
};

// Minimal unit-cost alignment; among optimal alignments, counts come from
// the one preferring substitutions, then deletions. Throws kEmptyReference.
WerResult Wer(std::span<const std::string> ref, std::span<const std::string> hyp);

// ---------------------------------------------------------------------------
// Entity scoring

struct ClassCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

struct EntityCounts {
  std::array<ClassCounts, 4> per_class{};

  ClassCounts &operator[](parser::EntityClass c) {
    return per_class[static_cast<std::size_t>(c)];
  }
  const ClassCounts &operator[](parser::EntityClass c) const {
    return per_class[static_cast<std::size_t>(c)];
  }
  EntityCounts &operator+=(const EntityCounts &o);
};

struct Prf {
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
};

using ClassScores = std::array<Prf, 4>;

struct PrfStats {
  Prf mean;
  Prf stddev;  // population standard deviation over folds
};

// Relabels unit spans as value and merges adjacent value spans, for
// comparison against a three-class annotation.
std::vector<parser::Span> FoldUnitsIntoValues(std::span<const parser::Span> spans);

// Exact span-and-class matching. Throws kOverlapWithinOneSource if gold or
// pred overlaps itself.
EntityCounts CountEntities(std::span<const parser::Span> gold,
                           std::span<const parser::Span> pred);

// Precision and recall of an empty denominator are 1.0; F1 of P = R = 0 is 0.
Prf ScoreClass(const ClassCounts &counts);
ClassScores ScoreCounts(const EntityCounts &counts);
ClassScores EntityPrf(std::span<const parser::Span> gold,
                      std::span<const parser::Span> pred);

std::array<PrfStats, 4> AggregateFolds(std::span<const ClassScores> folds);

// ---------------------------------------------------------------------------
// Synthetic utterances

struct SyntheticUtterance {
  Words words;
  std::vector<parser::Span> gold;  // index ordered
  std::string icao;
};

// "callsign + 1-2 (command [value] [unit])" in ATCo order, sampled from the
// lexicon. Deterministic per seed.
SyntheticUtterance GenerateUtterance(
    std::uint64_t seed,
    const lexicon::Lexicon &lexicon = lexicon::Lexicon::Default());

// `words<TAB>label label ...` lines used by gen-synthetic and score-ner.
std::string FormatTaggedLine(std::span<const std::string> words,
                             std::span<const parser::Label> labels);
std::pair<Words, std::vector<parser::Label>> ParseTaggedLine(std::string_view line);

}  // namespace pseudopilot::corpus

#endif  // PSEUDOPILOT_CORPUS_HPP_
