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

#ifndef PSEUDOPILOT_ERROR_HPP_
#define PSEUDOPILOT_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace pseudopilot {

enum class ErrorCode {
  kUnknownDesignator,
  kMalformedCallsign,
  kNotACallsign,
  kUnmappableWord,
  kNonDigit,
  kDuplicateEntry,
  kDataFormat,
  kEmptyContext,
  kParseError,
  kDuplicateLhs,
  kEmptyCommunication,
  kAdapterUnavailable,
  kUnknownAudioRef,
  kEmptyPrompt,
  kSinkWriteFailure,
  kOutOfOrderEvent,
  kNestedPtt,
  kEmptyReference,
  kOverlapWithinOneSource,
  kInvalidConfig,
  kUnknownSession,
  kUnknownExchange,
  kAlreadyMarked,
  kInvalidArgument,
  kIo,
};

// Stable snake_case name used in logs, JSON error bodies and CLI output.
std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception type; the code
// identifies the failure class, the message carries the offending input.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pseudopilot

#endif  // PSEUDOPILOT_ERROR_HPP_
