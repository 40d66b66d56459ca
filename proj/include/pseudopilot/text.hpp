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

// Small string helpers shared by all modules.

#ifndef PSEUDOPILOT_TEXT_HPP_
#define PSEUDOPILOT_TEXT_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pseudopilot {

using Words = std::vector<std::string>;

// Splits on ASCII whitespace, dropping empty tokens.
Words SplitWords(std::string_view text);

std::string JoinWords(std::span<const std::string> words);

std::string_view Trim(std::string_view text);

// Splits on a single character, keeping empty fields.
std::vector<std::string> SplitFields(std::string_view line, char sep);

// 64-bit FNV-1a; stable across platforms, unlike std::hash.
std::uint64_t Fnv1a(std::string_view bytes,
                    std::uint64_t seed = 14695981039346656037ull);

// splitmix64 finalizer, used to derive independent seeds.
std::uint64_t MixSeed(std::uint64_t x);

// Reads a whole file; throws Error(kIo) when it cannot be opened.
std::string ReadFile(const std::string &path);

}  // namespace pseudopilot

#endif  // PSEUDOPILOT_TEXT_HPP_
