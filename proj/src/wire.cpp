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

#include "pseudopilot/wire.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

#include "pseudopilot/error.hpp"

namespace pseudopilot::wire {

namespace {

using Clock = std::chrono::steady_clock;

Error Unavailable(const std::string &what) {
  return Error(ErrorCode::kAdapterUnavailable, what);
}

int RemainingMs(Clock::time_point deadline) {
  auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
      deadline - Clock::now());
  return left.count() < 0 ? 0 : static_cast<int>(left.count());
}

// Waits for `events` on fd until the deadline. Returns false on timeout.
bool WaitFd(int fd, short events, Clock::time_point deadline) {
  while (true) {
    pollfd p{fd, events, 0};
    int rc = ::poll(&p, 1, RemainingMs(deadline));
    if (rc > 0) return true;
    if (rc == 0) return false;
    if (errno != EINTR) return false;
  }
}

bool WriteAll(int fd, std::string_view bytes, Clock::time_point deadline) {
  std::size_t off = 0;
  while (off < bytes.size()) {
    if (!WaitFd(fd, POLLOUT, deadline)) return false;
    ssize_t n = ::send(fd, bytes.data() + off, bytes.size() - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      return false;
    }
    off += static_cast<std::size_t>(n);
  }
  return true;
}

bool ReadExact(int fd, char *out, std::size_t size, Clock::time_point deadline) {
  std::size_t off = 0;
  while (off < size) {
    if (!WaitFd(fd, POLLIN, deadline)) return false;
    ssize_t n = ::recv(fd, out + off, size - off, 0);
    if (n == 0) return false;
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      return false;
    }
    off += static_cast<std::size_t>(n);
  }
  return true;
}

bool ReadFrame(int fd, std::string &payload, Clock::time_point deadline) {
  unsigned char header[4];
  if (!ReadExact(fd, reinterpret_cast<char *>(header), 4, deadline)) {
    return false;
  }
  std::uint32_t len = (std::uint32_t{header[0]} << 24) |
                      (std::uint32_t{header[1]} << 16) |
                      (std::uint32_t{header[2]} << 8) | std::uint32_t{header[3]};
  if (len > kMaxFrameBytes) return false;
  payload.resize(len);
  return len == 0 || ReadExact(fd, payload.data(), len, deadline);
}

void SetNonBlocking(int fd) {
  int flags = ::fcntl(fd, F_GETFL, 0);
  ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

}  // namespace

Endpoint Endpoint::Parse(std::string_view text) {
  Endpoint ep;
  std::string_view port_text = text;
  auto colon = text.rfind(':');
  if (colon != std::string_view::npos) {
    if (colon > 0) ep.host = std::string(text.substr(0, colon));
    port_text = text.substr(colon + 1);
  }
  unsigned value = 0;
  auto [ptr, ec] = std::from_chars(port_text.data(),
                                   port_text.data() + port_text.size(), value);
  if (ec != std::errc() || ptr != port_text.data() + port_text.size() ||
      value == 0 || value > 65535) {
    throw Error(ErrorCode::kInvalidArgument,
                "bad endpoint '" + std::string(text) + "'");
  }
  ep.port = static_cast<std::uint16_t>(value);
  return ep;
}

std::string Endpoint::ToString() const {
  return host + ":" + std::to_string(port);
}

std::string EncodeFrame(std::string_view payload) {
  std::string out;
  out.reserve(payload.size() + 4);
  auto len = static_cast<std::uint32_t>(payload.size());
  out.push_back(static_cast<char>((len >> 24) & 0xff));
  out.push_back(static_cast<char>((len >> 16) & 0xff));
  out.push_back(static_cast<char>((len >> 8) & 0xff));
  out.push_back(static_cast<char>(len & 0xff));
  out.append(payload);
  return out;
}

// ---------------------------------------------------------------------------
// Client

Client::Client(Endpoint endpoint, std::chrono::milliseconds timeout)
    : endpoint_(std::move(endpoint)), timeout_(timeout) {}

Client::~Client() { Close(); }

void Client::Close() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

void Client::Connect(Clock::time_point deadline) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo *res = nullptr;
  std::string port = std::to_string(endpoint_.port);
  if (::getaddrinfo(endpoint_.host.c_str(), port.c_str(), &hints, &res) != 0 ||
      res == nullptr) {
    throw Unavailable("cannot resolve " + endpoint_.ToString());
  }
  int fd = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
  if (fd < 0) {
    ::freeaddrinfo(res);
    throw Unavailable("socket() failed");
  }
  SetNonBlocking(fd);
  int rc = ::connect(fd, res->ai_addr, res->ai_addrlen);
  ::freeaddrinfo(res);
  if (rc != 0 && errno != EINPROGRESS) {
    ::close(fd);
    throw Unavailable("cannot connect to " + endpoint_.ToString());
  }
  if (rc != 0) {
    int err = 0;
    socklen_t len = sizeof(err);
    if (!WaitFd(fd, POLLOUT, deadline) ||
        ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len) != 0 || err != 0) {
      ::close(fd);
      throw Unavailable("cannot connect to " + endpoint_.ToString());
    }
  }
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  fd_ = fd;
}

std::string Client::Call(std::string_view request) {
  std::lock_guard<std::mutex> lock(mu_);
  const std::string frame = EncodeFrame(request);
  // A kept-alive connection may have been closed by the peer; retry once on
  // a fresh connection before giving up.
  for (int attempt = 0; attempt < 2; ++attempt) {
    auto deadline = Clock::now() + timeout_;
    bool fresh = fd_ < 0;
    if (fresh) Connect(deadline);
    std::string response;
    if (WriteAll(fd_, frame, deadline) && ReadFrame(fd_, response, deadline)) {
      return response;
    }
    bool timed_out = Clock::now() >= deadline;
    Close();
    if (fresh || timed_out) break;
  }
  throw Unavailable("no response from " + endpoint_.ToString() +
                    " within " + std::to_string(timeout_.count()) + " ms");
}

// ---------------------------------------------------------------------------
// FrameServer

FrameServer::FrameServer(Handler handler, std::uint16_t port)
    : handler_(std::move(handler)) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw Error(ErrorCode::kIo, "socket() failed");
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr *>(&addr), sizeof(addr)) !=
          0 ||
      ::listen(listen_fd_, 16) != 0) {
    ::close(listen_fd_);
    throw Error(ErrorCode::kIo, "cannot listen on port " + std::to_string(port));
  }
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr *>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  SetNonBlocking(listen_fd_);
  thread_ = std::thread([this] { Loop(); });
}

FrameServer::~FrameServer() { Stop(); }

void FrameServer::Stop() {
  stop_ = true;
  if (thread_.joinable()) thread_.join();
  if (listen_fd_ >= 0) ::close(listen_fd_);
  listen_fd_ = -1;
}

void FrameServer::Loop() {
  constexpr auto kTick = std::chrono::milliseconds(50);
  while (!stop_) {
    if (!WaitFd(listen_fd_, POLLIN, Clock::now() + kTick)) continue;
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    SetNonBlocking(fd);
    while (!stop_) {
      if (!WaitFd(fd, POLLIN, Clock::now() + kTick)) continue;
      std::string request;
      if (!ReadFrame(fd, request, Clock::now() + std::chrono::seconds(5))) break;
      std::string response = handler_(request);
      if (!WriteAll(fd, EncodeFrame(response),
                    Clock::now() + std::chrono::seconds(5))) {
        break;
      }
    }
    ::close(fd);
  }
}

}  // namespace pseudopilot::wire
