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

#include "pseudopilot/callsign_resolver.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <set>

#include "pseudopilot/error.hpp"

namespace pseudopilot::resolver {

void EditWeights::Validate() const {
  for (double w : {substitution, insertion, deletion}) {
    if (!std::isfinite(w) || w < 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "edit weights must be finite and non-negative");
    }
  }
}

double WeightedLevenshtein(std::span<const std::string> a,
                           std::span<const std::string> b,
                           const EditWeights &w) {
  // row[j] = cost of turning a[0..i) into b[0..j)
  std::vector<double> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = w.insertion * j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    double diag = row[0];
    row[0] = w.deletion * i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      double sub = diag + (a[i - 1] == b[j - 1] ? 0.0 : w.substitution);
      double del = row[j] + w.deletion;
      double ins = row[j - 1] + w.insertion;
      diag = row[j];
      row[j] = std::min({sub, del, ins});
    }
  }
  return row[b.size()];
}

std::vector<Words> CallsignVariants(const lexicon::Lexicon &lexicon,
                                    std::string_view icao) {
  Words full = lexicon.ExpandCallsign(icao);
  const std::size_t tail = std::string_view(icao).size() - 3;
  const std::size_t head = full.size() - tail;

  std::vector<Words> variants = {full};
  auto add = [&variants](Words v) {
    if (!v.empty() &&
        std::find(variants.begin(), variants.end(), v) == variants.end()) {
      variants.push_back(std::move(v));
    }
  };
  add(Words(full.begin() + head, full.end()));
  if (tail > 3) {
    Words shortened(full.begin(), full.begin() + head);
    shortened.insert(shortened.end(), full.end() - 3, full.end());
    add(std::move(shortened));
  }
  return variants;
}

namespace {

template <typename Entry, typename CodeOf>
ContextBuild ExpandEntries(std::span<const Entry> entries,
                           const lexicon::Lexicon &lexicon, CodeOf code_of) {
  ContextBuild out;
  std::set<std::string, std::less<>> seen;
  for (const Entry &e : entries) {
    const std::string &code = code_of(e);
    try {
      CallsignRecord record;
      record.variants = CallsignVariants(lexicon, code);
      record.icao = lexicon.CompressSpoken(record.variants.front());
      if constexpr (std::is_same_v<Entry, ContextEntry>) {
        record.valid_from = e.valid_from;
        record.valid_to = e.valid_to;
      }
      if (!seen.insert(record.icao).second) continue;
      out.context.records.push_back(std::move(record));
    } catch (const Error &err) {
      out.failures.push_back({code, err.what()});
    }
  }
  return out;
}

}  // namespace

ContextBuild ExpandContext(std::span<const std::string> codes,
                           const lexicon::Lexicon &lexicon) {
  return ExpandEntries(codes, lexicon,
                       [](const std::string &c) -> const std::string & {
                         return c;
                       });
}

ContextBuild ExpandContext(std::span<const ContextEntry> entries,
                           const lexicon::Lexicon &lexicon) {
  return ExpandEntries(entries, lexicon,
                       [](const ContextEntry &e) -> const std::string & {
                         return e.icao;
                       });
}

std::int64_t ParseIsoTime(std::string_view text) {
  auto bad = [&] {
    return Error(ErrorCode::kInvalidArgument,
                 "bad ISO-8601 time '" + std::string(text) + "'");
  };
  std::string_view s = Trim(text);
  if (!s.empty() && (s.back() == 'Z' || s.back() == 'z')) s.remove_suffix(1);
  // YYYY-MM-DDTHH:MM[:SS]
  if (s.size() != 16 && s.size() != 19) throw bad();
  auto num = [&](std::size_t pos, std::size_t len) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, v);
    if (ec != std::errc() || p != s.data() + pos + len) throw bad();
    return v;
  };
  if (s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') ||
      s[13] != ':' || (s.size() == 19 && s[16] != ':')) {
    throw bad();
  }
  using namespace std::chrono;
  year_month_day ymd{year{num(0, 4)}, month{static_cast<unsigned>(num(5, 2))},
                     day{static_cast<unsigned>(num(8, 2))}};
  int hh = num(11, 2), mm = num(14, 2), ss = s.size() == 19 ? num(17, 2) : 0;
  if (!ymd.ok() || hh > 23 || mm > 59 || ss > 60) throw bad();
  auto t = sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss};
  return duration_cast<seconds>(t.time_since_epoch()).count();
}

std::vector<ContextEntry> ParseContextFile(std::string_view text) {
  std::vector<ContextEntry> entries;
  std::size_t line_no = 0;
  for (const std::string &raw : SplitFields(text, '\n')) {
    ++line_no;
    std::string_view line = Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto fields = SplitFields(line, '\t');
    ContextEntry e;
    e.icao = std::string(Trim(fields[0]));
    try {
      if (fields.size() >= 2 && !Trim(fields[1]).empty()) {
        e.valid_from = ParseIsoTime(fields[1]);
      }
      if (fields.size() >= 3 && !Trim(fields[2]).empty()) {
        e.valid_to = ParseIsoTime(fields[2]);
      }
    } catch (const Error &err) {
      throw Error(ErrorCode::kDataFormat, "surveillance line " +
                                              std::to_string(line_no) + ": " +
                                              err.what());
    }
    if (fields.size() > 3) {
      throw Error(ErrorCode::kDataFormat,
                  "surveillance line " + std::to_string(line_no) +
                      ": expected code[<TAB>from<TAB>to]");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

std::string_view RerankStatusName(RerankStatus status) {
  switch (status) {
    case RerankStatus::kResolved: return "resolved";
    case RerankStatus::kSkipped: return "skipped";
    case RerankStatus::kUnresolved: return "unresolved";
  }
  return "skipped";
}

RerankResult Rerank(const std::optional<Words> &extracted,
                    const SurveillanceContext &context,
                    const RerankOptions &options) {
  RerankResult result;
  if (!extracted) return result;  // NO_CALLSIGN

  bool any = false;
  double best_cost = 0.0;
  const CallsignRecord *best_record = nullptr;
  const Words *best_variant = nullptr;
  for (const CallsignRecord &record : context.records) {
    if (options.at_time && !record.ValidAt(*options.at_time)) continue;
    for (const Words &variant : record.variants) {
      double cost = WeightedLevenshtein(*extracted, variant, options.weights);
      bool better = !any || cost < best_cost ||
                    (cost == best_cost && record.icao < best_record->icao);
      if (better) {
        any = true;
        best_cost = cost;
        best_record = &record;
        best_variant = &variant;
      }
    }
  }
  if (!any) {
    throw Error(ErrorCode::kEmptyContext,
                "no surveillance record to match '" + JoinWords(*extracted) +
                    "' against");
  }
  result.icao = best_record->icao;
  result.matched_variant = *best_variant;
  result.cost = best_cost;
  result.status = options.max_cost && best_cost > *options.max_cost
                      ? RerankStatus::kUnresolved
                      : RerankStatus::kResolved;
  return result;
}

}  // namespace pseudopilot::resolver
