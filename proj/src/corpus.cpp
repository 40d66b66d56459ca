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

#include "pseudopilot/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>

#include "pseudopilot/error.hpp"

namespace pseudopilot::corpus {

using parser::EntityClass;
using parser::Span;

namespace {

template <typename T>
bool ParseNumber(std::string_view text, T &out) {
  text = Trim(text);
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && p == text.data() + text.size();
}

std::string FormatDouble(double v, const char *fmt = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Recording selection

std::vector<RecordingMetadata> ParseMetadata(std::string_view text) {
  std::vector<RecordingMetadata> records;
  std::set<std::string, std::less<>> ids;
  std::size_t line_no = 0;
  for (const std::string &raw : SplitFields(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (Trim(line).empty() || Trim(line).front() == '#') continue;
    auto fail = [&](const std::string &why) {
      return Error(ErrorCode::kDataFormat,
                   "metadata line " + std::to_string(line_no) + ": " + why);
    };
    auto f = SplitFields(line, '\t');
    if (f.size() != 6) throw fail("expected 6 tab-separated fields");
    RecordingMetadata r;
    r.id = std::string(Trim(f[0]));
    r.transcript_ref = std::string(Trim(f[4]));
    if (r.id.empty()) throw fail("empty id");
    if (!ParseNumber(f[1], r.duration) || !ParseNumber(f[2], r.snr) ||
        !ParseNumber(f[3], r.english_score) || !ParseNumber(f[5], r.sample_rate)) {
      throw fail("non-numeric field");
    }
    if (!(r.duration > 0)) throw fail("duration must be positive");
    if (!(r.english_score >= 0 && r.english_score <= 1)) {
      throw fail("english_score must be within [0, 1]");
    }
    if (!ids.insert(r.id).second) {
      throw Error(ErrorCode::kDuplicateEntry, "metadata line " + std::to_string(line_no) +
                                                  ": duplicate id '" + r.id + "'");
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::string_view RejectReasonName(RejectReason reason) {
  switch (reason) {
    case RejectReason::kTooLong: return "too_long";
    case RejectReason::kTooShort: return "too_short";
    case RejectReason::kLowSnr: return "low_snr";
    case RejectReason::kNonEnglish: return "non_english";
    case RejectReason::kQuota: return "quota";
  }
  return "quota";
}

std::optional<QuotaOrder> ParseQuotaOrder(std::string_view name) {
  if (name == "english_score") return QuotaOrder::kEnglishScore;
  if (name == "snr") return QuotaOrder::kSnr;
  if (name == "input_order") return QuotaOrder::kInputOrder;
  return std::nullopt;
}

std::optional<RejectReason> GateReason(const RecordingMetadata &r,
                                       const FilterThresholds &t) {
  if (r.duration > t.max_duration) return RejectReason::kTooLong;
  if (r.duration < t.min_duration) return RejectReason::kTooShort;
  if (r.snr < t.min_snr) return RejectReason::kLowSnr;
  if (r.english_score < t.min_english) return RejectReason::kNonEnglish;
  return std::nullopt;
}

FilterReport SelectRecordings(
    std::span<const RecordingMetadata> records,
    std::span<const std::optional<RejectReason>> gate_reasons,
    const FilterThresholds &t) {
  if (gate_reasons.size() != records.size()) {
    throw Error(ErrorCode::kInvalidArgument, "gate result count mismatch");
  }
  std::vector<std::size_t> survivors;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!gate_reasons[i]) survivors.push_back(i);
  }
  auto by_id = [&](std::size_t a, std::size_t b) {
    return records[a].id < records[b].id;
  };
  switch (t.quota_order) {
    case QuotaOrder::kEnglishScore:
      std::stable_sort(survivors.begin(), survivors.end(),
                       [&](std::size_t a, std::size_t b) {
                         if (records[a].english_score != records[b].english_score) {
                           return records[a].english_score > records[b].english_score;
                         }
                         return by_id(a, b);
                       });
      break;
    case QuotaOrder::kSnr:
      std::stable_sort(survivors.begin(), survivors.end(),
                       [&](std::size_t a, std::size_t b) {
                         if (records[a].snr != records[b].snr) {
                           return records[a].snr > records[b].snr;
                         }
                         return by_id(a, b);
                       });
      break;
    case QuotaOrder::kInputOrder:
      break;
  }

  std::vector<std::optional<RejectReason>> reason(gate_reasons.begin(),
                                                  gate_reasons.end());
  FilterReport report;
  double hours = 0.0;
  for (std::size_t i : survivors) {
    if (!t.target_hours || hours < *t.target_hours) {
      report.kept.push_back(records[i].id);
      hours += records[i].duration / 3600.0;
    } else {
      reason[i] = RejectReason::kQuota;
    }
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (reason[i]) report.rejected.emplace_back(records[i].id, *reason[i]);
  }
  report.total_hours_kept = hours;
  return report;
}

FilterReport FilterRecordings(std::span<const RecordingMetadata> records,
                              const FilterThresholds &thresholds) {
  std::vector<std::optional<RejectReason>> reasons;
  reasons.reserve(records.size());
  for (const auto &r : records) reasons.push_back(GateReason(r, thresholds));
  return SelectRecordings(records, reasons, thresholds);
}

std::string FormatReportTable(const FilterReport &report) {
  std::size_t width = 2;
  for (const auto &id : report.kept) width = std::max(width, id.size());
  for (const auto &[id, _] : report.rejected) width = std::max(width, id.size());
  auto row = [&](const std::string &id, std::string_view status,
                 std::string_view reason) {
    std::string line = id;
    line.resize(width + 2, ' ');
    line += status;
    if (!reason.empty()) {
      line.resize(width + 2 + 10, ' ');
      line += reason;
    }
    return line + "\n";
  };
  std::string out = row("id", "status", "reason");
  for (const auto &id : report.kept) out += row(id, "kept", "");
  for (const auto &[id, r] : report.rejected) {
    out += row(id, "rejected", RejectReasonName(r));
  }
  out += "kept " + std::to_string(report.kept.size()) + " of " +
         std::to_string(report.kept.size() + report.rejected.size()) +
         " recordings, " + FormatDouble(report.total_hours_kept, "%.3f") +
         " h\n";
  return out;
}

std::string FormatReportRecords(const FilterReport &report) {
  std::string out;
  for (const auto &id : report.kept) out += "kept\t" + id + "\n";
  for (const auto &[id, r] : report.rejected) {
    out += "rejected\t" + id + "\t" + std::string(RejectReasonName(r)) + "\n";
  }
  out += "total_hours\t" + FormatDouble(report.total_hours_kept, "%.6f") + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// WER

WerResult Wer(std::span<const std::string> ref, std::span<const std::string> hyp) {
  if (ref.empty()) throw Error(ErrorCode::kEmptyReference, "empty reference");
  const std::size_t n = ref.size(), m = hyp.size(), w = m + 1;
  std::vector<std::size_t> d((n + 1) * w);
  for (std::size_t i = 0; i <= n; ++i) d[i * w] = i;
  for (std::size_t j = 0; j <= m; ++j) d[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t sub = d[(i - 1) * w + j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      d[i * w + j] = std::min({sub, d[(i - 1) * w + j] + 1, d[i * w + j - 1] + 1});
    }
  }
  WerResult r;
  r.ref_length = n;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const std::size_t here = d[i * w + j];
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      if (d[(i - 1) * w + j - 1] + (same ? 0 : 1) == here) {
        if (!same) ++r.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && d[(i - 1) * w + j] + 1 == here) {
      ++r.deletions;
      --i;
    } else {
      ++r.insertions;
      --j;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Entity scoring

EntityCounts &EntityCounts::operator+=(const EntityCounts &o) {
  for (std::size_t c = 0; c < per_class.size(); ++c) {
    per_class[c].tp += o.per_class[c].tp;
    per_class[c].fp += o.per_class[c].fp;
    per_class[c].fn += o.per_class[c].fn;
  }
  return *this;
}

std::vector<Span> FoldUnitsIntoValues(std::span<const Span> spans) {
  std::vector<Span> sorted(spans.begin(), spans.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<Span> out;
  for (Span s : sorted) {
    if (s.cls == EntityClass::kUnit) s.cls = EntityClass::kValue;
    if (s.cls == EntityClass::kValue && !out.empty() &&
        out.back().cls == EntityClass::kValue && out.back().end == s.begin) {
      out.back().end = s.end;
    } else {
      out.push_back(s);
    }
  }
  return out;
}

namespace {

void CheckNoOverlap(std::span<const Span> spans, std::string_view which) {
  std::vector<Span> sorted(spans.begin(), spans.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i].end <= sorted[i].begin) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(which) + " contains an empty span");
    }
    if (i > 0 && sorted[i].begin < sorted[i - 1].end) {
      throw Error(ErrorCode::kOverlapWithinOneSource,
                  std::string(which) + " spans overlap at word " +
                      std::to_string(sorted[i].begin));
    }
  }
}

}  // namespace

EntityCounts CountEntities(std::span<const Span> gold, std::span<const Span> pred) {
  CheckNoOverlap(gold, "gold");
  CheckNoOverlap(pred, "pred");
  EntityCounts counts;
  std::vector<Span> g(gold.begin(), gold.end());
  std::sort(g.begin(), g.end());
  for (const Span &p : pred) {
    if (std::binary_search(g.begin(), g.end(), p)) {
      ++counts[p.cls].tp;
    } else {
      ++counts[p.cls].fp;
    }
  }
  std::vector<Span> pr(pred.begin(), pred.end());
  std::sort(pr.begin(), pr.end());
  for (const Span &s : g) {
    if (!std::binary_search(pr.begin(), pr.end(), s)) ++counts[s.cls].fn;
  }
  return counts;
}

Prf ScoreClass(const ClassCounts &c) {
  Prf s;
  s.precision = c.tp + c.fp == 0 ? 1.0 : static_cast<double>(c.tp) / (c.tp + c.fp);
  s.recall = c.tp + c.fn == 0 ? 1.0 : static_cast<double>(c.tp) / (c.tp + c.fn);
  s.f1 = s.precision + s.recall == 0
             ? 0.0
             : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

ClassScores ScoreCounts(const EntityCounts &counts) {
  ClassScores scores;
  for (std::size_t c = 0; c < scores.size(); ++c) {
    scores[c] = ScoreClass(counts.per_class[c]);
  }
  return scores;
}

ClassScores EntityPrf(std::span<const Span> gold, std::span<const Span> pred) {
  return ScoreCounts(CountEntities(gold, pred));
}

std::array<PrfStats, 4> AggregateFolds(std::span<const ClassScores> folds) {
  std::array<PrfStats, 4> out{};
  if (folds.empty()) return out;
  const double n = static_cast<double>(folds.size());
  for (std::size_t c = 0; c < out.size(); ++c) {
    auto stats = [&](double Prf::*field, double &mean, double &sd) {
      double sum = 0.0;
      for (const auto &f : folds) sum += f[c].*field;
      mean = sum / n;
      double sq = 0.0;
      for (const auto &f : folds) sq += (f[c].*field - mean) * (f[c].*field - mean);
      sd = std::sqrt(sq / n);
    };
    stats(&Prf::precision, out[c].mean.precision, out[c].stddev.precision);
    stats(&Prf::recall, out[c].mean.recall, out[c].stddev.recall);
    stats(&Prf::f1, out[c].mean.f1, out[c].stddev.f1);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic utterances

namespace {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(MixSeed(seed)) {}

  std::size_t Index(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  bool Chance(unsigned percent) { return rng_() % 100 < percent; }
  std::string Digit(int lo = 0, int hi = 9) {
    int d = lo + static_cast<int>(Index(static_cast<std::size_t>(hi - lo + 1)));
    return std::string(lexicon::SpokenAlphabet::Get().WordFor(static_cast<char>('0' + d)));
  }
  // Three spoken digits of a number drawn from [lo, hi].
  Words Number3(int lo, int hi) {
    int n = lo + static_cast<int>(Index(static_cast<std::size_t>(hi - lo + 1)));
    Words out;
    for (int div : {100, 10, 1}) {
      out.emplace_back(lexicon::SpokenAlphabet::Get().WordFor(
          static_cast<char>('0' + n / div % 10)));
    }
    return out;
  }

 private:
  std::mt19937_64 rng_;
};

void Append(Words &words, std::vector<Span> &gold, EntityClass cls,
            const Words &piece) {
  gold.push_back({cls, words.size(), words.size() + piece.size()});
  words.insert(words.end(), piece.begin(), piece.end());
}

}  // namespace

SyntheticUtterance GenerateUtterance(std::uint64_t seed,
                                     const lexicon::Lexicon &lexicon) {
  using lexicon::ValueKind;
  Sampler s(seed);
  SyntheticUtterance u;

  const std::vector<std::string> designators = lexicon.telephony().Designators();
  std::string code = designators[s.Index(designators.size())];
  const std::size_t tail = 1 + s.Index(4);
  for (std::size_t k = 0; k < tail; ++k) {
    if (s.Chance(60)) {
      code.push_back(static_cast<char>('0' + s.Index(10)));
    } else {
      code.push_back(static_cast<char>('A' + s.Index(26)));
    }
  }
  u.icao = code;
  Append(u.words, u.gold, EntityClass::kCallsign, lexicon.ExpandCallsign(code));

  const auto &commands = lexicon.commands().commands();
  const std::size_t groups = 1 + s.Index(2);
  for (std::size_t g = 0; g < groups; ++g) {
    const lexicon::CommandPhrase &cmd = commands[s.Index(commands.size())];
    Append(u.words, u.gold, EntityClass::kCommand, cmd.words);
    switch (cmd.kind) {
      case ValueKind::kHeading: {
        Append(u.words, u.gold, EntityClass::kValue, s.Number3(1, 360));
        if (s.Chance(30)) Append(u.words, u.gold, EntityClass::kUnit, {"degrees"});
        break;
      }
      case ValueKind::kLevel: {
        if (s.Chance(50)) {
          Append(u.words, u.gold, EntityClass::kUnit, {"flight", "level"});
          Append(u.words, u.gold, EntityClass::kValue,
                 {s.Digit(0, 4), s.Digit(), s.Digit()});
        } else {
          Words value = {s.Digit(1, 9)};
          if (s.Chance(30)) value.push_back(s.Digit());
          value.push_back("thousand");
          if (s.Chance(40)) {
            value.push_back(s.Digit(1, 9));
            value.push_back("hundred");
          }
          Append(u.words, u.gold, EntityClass::kValue, value);
          Append(u.words, u.gold, EntityClass::kUnit, {"feet"});
        }
        break;
      }
      case ValueKind::kSpeed: {
        Append(u.words, u.gold, EntityClass::kValue,
               {s.Digit(1, 3), s.Digit(), s.Digit()});
        if (s.Chance(50)) Append(u.words, u.gold, EntityClass::kUnit, {"knots"});
        break;
      }
      case ValueKind::kFrequency: {
        Words value = {"one", s.Digit(1, 3), s.Digit(), "decimal"};
        const std::size_t decimals = 1 + s.Index(3);
        for (std::size_t k = 0; k < decimals; ++k) value.push_back(s.Digit());
        Append(u.words, u.gold, EntityClass::kValue, value);
        break;
      }
      case ValueKind::kNone:
        break;
    }
  }
  return u;
}

std::string FormatTaggedLine(std::span<const std::string> words,
                             std::span<const parser::Label> labels) {
  std::string out = JoinWords(words);
  out.push_back('\t');
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += parser::LabelName(labels[i]);
  }
  return out;
}

std::pair<Words, std::vector<parser::Label>> ParseTaggedLine(std::string_view line) {
  auto tab = line.find('\t');
  if (tab == std::string_view::npos) {
    throw Error(ErrorCode::kDataFormat, "expected words<TAB>labels");
  }
  Words words = SplitWords(line.substr(0, tab));
  std::vector<parser::Label> labels;
  for (const std::string &name : SplitWords(line.substr(tab + 1))) {
    auto l = parser::ParseLabel(name);
    if (!l) throw Error(ErrorCode::kDataFormat, "unknown label '" + name + "'");
    labels.push_back(*l);
  }
  if (labels.size() != words.size()) {
    throw Error(ErrorCode::kDataFormat, "label count differs from word count");
  }
  return {std::move(words), std::move(labels)};
}

}  // namespace pseudopilot::corpus
