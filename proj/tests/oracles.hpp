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

// Reference implementations for tests. They are written from the textbook
// definitions (top-down recursion with memoisation, exhaustive scans) and
// share no code with the library.

#ifndef PSEUDOPILOT_TESTS_ORACLES_HPP_
#define PSEUDOPILOT_TESTS_ORACLES_HPP_

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

namespace oracle {

using Seq = std::vector<std::string>;

// d(i, j): cost of turning a[0..i) into b[0..j).
inline double EditDistance(const Seq &a, const Seq &b, double sub = 1.0,
                           double ins = 1.0, double del = 1.0) {
  std::map<std::pair<std::size_t, std::size_t>, double> memo;
  std::function<double(std::size_t, std::size_t)> d = [&](std::size_t i,
                                                          std::size_t j) -> double {
    if (i == 0) return static_cast<double>(j) * ins;
    if (j == 0) return static_cast<double>(i) * del;
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    double best = d(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0.0 : sub);
    best = std::min(best, d(i - 1, j) + del);
    best = std::min(best, d(i, j - 1) + ins);
    memo[key] = best;
    return best;
  };
  return d(a.size(), b.size());
}

// Unit-cost word errors.
inline std::size_t WordErrors(const Seq &ref, const Seq &hyp) {
  return static_cast<std::size_t>(EditDistance(ref, hyp) + 0.5);
}

struct Candidate {
  std::string icao;
  std::vector<Seq> variants;
};

struct Best {
  std::string icao;
  Seq variant;
  double cost = std::numeric_limits<double>::infinity();
};

// Exhaustive argmin; ties: smaller icao, then earlier variant.
inline Best BruteRerank(const Seq &query, const std::vector<Candidate> &records,
                        double sub = 1.0, double ins = 1.0, double del = 1.0) {
  Best best;
  for (const auto &r : records) {
    for (const auto &v : r.variants) {
      double c = EditDistance(query, v, sub, ins, del);
      if (c < best.cost || (c == best.cost && r.icao < best.icao)) {
        best = {r.icao, v, c};
      }
    }
  }
  return best;
}

inline Seq RandomSeq(std::mt19937_64 &rng, std::size_t max_len,
                     const std::vector<std::string> &alphabet) {
  Seq s(rng() % (max_len + 1));
  for (auto &w : s) w = alphabet[rng() % alphabet.size()];
  return s;
}

}  // namespace oracle

#endif  // PSEUDOPILOT_TESTS_ORACLES_HPP_
