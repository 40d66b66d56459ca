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

// Training sessions. A trainee transmission runs through
//   normalize -> parse -> rerank -> read-back -> synthesize
// and the exchange is appended to the session's log. The log is an
// append-only sequence of JSON records (one per line when persisted):
//
//   {"type":"session","config":{...},"timing":{...}}        first record
//   {"type":"exchange","id":"e1","seq":1,...,"timing":{...}}
//   {"type":"mark","exchange":"e1","verdict":"error","correct":true,...}
//   {"type":"config","config":{...},"timing":{...}}
//
// Only the "timing" members depend on the wall clock; everything else is a
// pure function of the configuration and the transmit sequence.

#ifndef PSEUDOPILOT_SERVICE_HPP_
#define PSEUDOPILOT_SERVICE_HPP_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pseudopilot/callsign_resolver.hpp"
#include "pseudopilot/error.hpp"
#include "pseudopilot/readback.hpp"
#include "pseudopilot/speech.hpp"

namespace pseudopilot::service {

using Json = nlohmann::json;

struct ConfigDiagnostic {
  std::string field;
  std::string message;
};

class InvalidConfig : public Error {
 public:
  explicit InvalidConfig(std::vector<ConfigDiagnostic> diagnostics);
  const std::vector<ConfigDiagnostic> &diagnostics() const { return diagnostics_; }

 private:
  std::vector<ConfigDiagnostic> diagnostics_;
};

struct SessionConfig {
  std::optional<std::string> rules_path;  // unset: shipped rules.txt
  readback::ErrorSpec error;
  std::vector<std::string> surveillance;  // "CODE[<TAB>from<TAB>to]"
  std::string tagger = "builtin";
  bool reveal_errors = false;
  resolver::EditWeights weights;
  std::optional<double> max_cost;

  Json ToJson() const;
  // Structural checks only; loading rules/codes happens on activation.
  static SessionConfig FromJson(const Json &json);
};

struct ServiceOptions {
  std::string data_dir;  // empty: keep logs in memory only
  std::shared_ptr<speech::AsrAdapter> asr;
  std::shared_ptr<speech::TtsAdapter> tts;
  std::chrono::milliseconds tagger_timeout{2000};
  // Microseconds since the Unix epoch.
  std::function<std::int64_t()> clock;
};

struct TransmitPayload {
  std::optional<std::string> text;
  std::optional<std::string> audio_ref;

  static TransmitPayload FromJson(const Json &json);
};

enum class Verdict { kFaithful, kError };
std::optional<Verdict> ParseVerdict(std::string_view name);

// Removes every "timing" member, recursively. Used to compare logs.
Json StripTiming(const Json &value);

class SessionManager {
 public:
  explicit SessionManager(ServiceOptions options = {});
  ~SessionManager();
  SessionManager(const SessionManager &) = delete;
  SessionManager &operator=(const SessionManager &) = delete;

  // Throws InvalidConfig listing every failing field.
  std::string CreateSession(const Json &config);

  // Returns the exchange record; injected_error is omitted unless the
  // session reveals errors. Throws kUnknownSession, kAdapterUnavailable.
  Json Transmit(const std::string &session_id, const TransmitPayload &payload);

  // Throws kUnknownSession, kUnknownExchange, kAlreadyMarked.
  Json MarkChallenge(const std::string &session_id, const std::string &exchange_id,
                     Verdict verdict);

  Json GetLog(const std::string &session_id) const;
  std::string GetLogJsonl(const std::string &session_id) const;

  // JSON merge patch over the current configuration.
  Json PatchConfig(const std::string &session_id, const Json &patch);

  // Rebuilds a session from an exported JSONL log. Returns its id.
  std::string ImportLog(std::string_view jsonl,
                        std::optional<std::string> session_id = std::nullopt);

  // Re-opens every <data_dir>/<id>.jsonl; returns the restored ids.
  std::vector<std::string> LoadPersisted();

  std::vector<std::string> SessionIds() const;

 private:
  struct Session;

  std::shared_ptr<Session> Find(const std::string &id) const;
  std::string NewId();
  void Register(std::shared_ptr<Session> session);

  ServiceOptions options_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::atomic<std::uint64_t> next_id_{1};
  std::uint64_t id_salt_;
};

}  // namespace pseudopilot::service

#endif  // PSEUDOPILOT_SERVICE_HPP_
