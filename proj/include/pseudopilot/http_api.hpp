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

// HTTP front end for SessionManager.
//
//   POST  /sessions                              -> 201 {"session_id": ...}
//   POST  /sessions/import        (JSONL body)   -> 201 {"session_id": ...}
//   POST  /sessions/{id}/transmit                -> exchange record
//   POST  /sessions/{id}/exchanges/{eid}/mark    -> {"correct": ...}
//   GET   /sessions/{id}/log[?format=jsonl]
//   PATCH /sessions/{id}/config                  -> merged config
//   GET   /healthz
//
// Errors are {"error": <code>, "message": ..., "diagnostics": [...]} with
// 400 (bad input/config), 404 (unknown session or exchange), 409 (already
// marked), 503 (adapter unavailable).

#ifndef PSEUDOPILOT_HTTP_API_HPP_
#define PSEUDOPILOT_HTTP_API_HPP_

#include <memory>
#include <string>
#include <thread>

#include "pseudopilot/service.hpp"

namespace pseudopilot::service {

int HttpStatusFor(ErrorCode code);

class HttpServer {
 public:
  explicit HttpServer(SessionManager &manager);
  ~HttpServer();
  HttpServer(const HttpServer &) = delete;
  HttpServer &operator=(const HttpServer &) = delete;

  // port 0 picks a free port. Returns the bound port.
  int Bind(const std::string &host, int port);
  // Blocks until Stop().
  void Listen();
  // Bind + Listen on a background thread.
  int Start(const std::string &host, int port);
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
};

}  // namespace pseudopilot::service

#endif  // PSEUDOPILOT_HTTP_API_HPP_
