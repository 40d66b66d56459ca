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

// Length-prefixed message framing over local TCP sockets. This is the wire
// contract for external taggers and speech adapters: every message is a
// 4-byte big-endian payload length followed by the payload bytes. Requests
// are JSON objects; responses are JSON objects or raw bytes (audio).

#ifndef PSEUDOPILOT_WIRE_HPP_
#define PSEUDOPILOT_WIRE_HPP_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>

namespace pseudopilot::wire {

inline constexpr std::size_t kMaxFrameBytes = 64u << 20;

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;

  // Accepts "host:port" or a bare port.
  static Endpoint Parse(std::string_view text);
  std::string ToString() const;
};

std::string EncodeFrame(std::string_view payload);

// Request/response client. One connection is kept open and reused; calls
// are serialised by an internal mutex. Any connect, I/O or deadline failure
// closes the connection and throws Error(kAdapterUnavailable).
class Client {
 public:
  Client(Endpoint endpoint, std::chrono::milliseconds timeout);
  ~Client();
  Client(const Client &) = delete;
  Client &operator=(const Client &) = delete;

  std::string Call(std::string_view request);

  const Endpoint &endpoint() const { return endpoint_; }

 private:
  void Connect(std::chrono::steady_clock::time_point deadline);
  void Close();

  Endpoint endpoint_;
  std::chrono::milliseconds timeout_;
  std::mutex mu_;
  int fd_ = -1;
};

// Minimal frame server on 127.0.0.1, used for stub adapters in tests and
// for local bridges. Connections are served one at a time in a background
// thread; each request frame is answered with handler(request).
class FrameServer {
 public:
  using Handler = std::function<std::string(const std::string &)>;

  // port 0 picks a free port.
  explicit FrameServer(Handler handler, std::uint16_t port = 0);
  ~FrameServer();
  FrameServer(const FrameServer &) = delete;
  FrameServer &operator=(const FrameServer &) = delete;

  std::uint16_t port() const { return port_; }
  Endpoint endpoint() const { return {"127.0.0.1", port_}; }
  void Stop();

 private:
  void Loop();

  Handler handler_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stop_{false};
  std::thread thread_;
};

}  // namespace pseudopilot::wire

#endif  // PSEUDOPILOT_WIRE_HPP_
