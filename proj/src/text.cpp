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

#include "pseudopilot/text.hpp"

#include <fstream>
#include <sstream>

#include "pseudopilot/error.hpp"

namespace pseudopilot {

namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownDesignator: return "unknown_designator";
    case ErrorCode::kMalformedCallsign: return "malformed_callsign";
    case ErrorCode::kNotACallsign: return "not_a_callsign";
    case ErrorCode::kUnmappableWord: return "unmappable_word";
    case ErrorCode::kNonDigit: return "non_digit";
    case ErrorCode::kDuplicateEntry: return "duplicate_entry";
    case ErrorCode::kDataFormat: return "data_format";
    case ErrorCode::kEmptyContext: return "empty_context";
    case ErrorCode::kParseError: return "parse_error";
    case ErrorCode::kDuplicateLhs: return "duplicate_lhs";
    case ErrorCode::kEmptyCommunication: return "empty_communication";
    case ErrorCode::kAdapterUnavailable: return "adapter_unavailable";
    case ErrorCode::kUnknownAudioRef: return "unknown_audio_ref";
    case ErrorCode::kEmptyPrompt: return "empty_prompt";
    case ErrorCode::kSinkWriteFailure: return "sink_write_failure";
    case ErrorCode::kOutOfOrderEvent: return "out_of_order_event";
    case ErrorCode::kNestedPtt: return "nested_ptt";
    case ErrorCode::kEmptyReference: return "empty_reference";
    case ErrorCode::kOverlapWithinOneSource: return "overlap_within_one_source";
    case ErrorCode::kInvalidConfig: return "invalid_config";
    case ErrorCode::kUnknownSession: return "unknown_session";
    case ErrorCode::kUnknownExchange: return "unknown_exchange";
    case ErrorCode::kAlreadyMarked: return "already_marked";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

Words SplitWords(std::string_view text) {
  Words words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !IsSpace(text[i])) ++i;
    if (i > start) words.emplace_back(text.substr(start, i - start));
  }
  return words;
}

std::string JoinWords(std::span<const std::string> words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += words[i];
  }
  return out;
}

std::string_view Trim(std::string_view text) {
  while (!text.empty() && IsSpace(text.front())) text.remove_prefix(1);
  while (!text.empty() && IsSpace(text.back())) text.remove_suffix(1);
  return text;
}

std::vector<std::string> SplitFields(std::string_view line, char sep) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      break;
    }
    fields.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

std::uint64_t Fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t MixSeed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace pseudopilot
