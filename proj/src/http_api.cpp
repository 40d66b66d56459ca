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

#include "pseudopilot/http_api.hpp"

#include "httplib.h"

namespace pseudopilot::service {

namespace {

constexpr const char *kJson = "application/json";

void Reply(httplib::Response &res, int status, const Json &body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void ReplyError(httplib::Response &res, int status, std::string_view code,
                const std::string &message, Json diagnostics = Json::array()) {
  Reply(res, status,
        {{"error", code}, {"message", message}, {"diagnostics", std::move(diagnostics)}});
}

Json ParseBody(const httplib::Request &req) {
  if (req.body.empty()) return Json::object();
  Json j = Json::parse(req.body, nullptr, false);
  if (j.is_discarded()) {
    throw Error(ErrorCode::kInvalidArgument, "request body is not valid JSON");
  }
  return j;
}

// Wraps a handler so library errors become JSON error replies.
template <typename Fn>
httplib::Server::Handler Guard(Fn fn) {
  return [fn](const httplib::Request &req, httplib::Response &res) {
    try {
      fn(req, res);
    } catch (const InvalidConfig &e) {
      Json diags = Json::array();
      for (const auto &d : e.diagnostics()) {
        diags.push_back({{"field", d.field}, {"message", d.message}});
      }
      ReplyError(res, 400, ErrorCodeName(e.code()), e.what(), std::move(diags));
    } catch (const Error &e) {
      ReplyError(res, HttpStatusFor(e.code()), ErrorCodeName(e.code()), e.what());
    } catch (const Json::exception &e) {
      ReplyError(res, 400, "invalid_argument", e.what());
    }
  };
}

}  // namespace

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownSession:
    case ErrorCode::kUnknownExchange:
      return 404;
    case ErrorCode::kAlreadyMarked:
      return 409;
    case ErrorCode::kAdapterUnavailable:
      return 503;
    case ErrorCode::kIo:
    case ErrorCode::kSinkWriteFailure:
      return 500;
    default:
      return 400;
  }
}

struct HttpServer::Impl {
  explicit Impl(SessionManager &m) : manager(m) {}
  SessionManager &manager;
  httplib::Server server;
};

HttpServer::HttpServer(SessionManager &manager)
    : impl_(std::make_unique<Impl>(manager)) {
  auto &srv = impl_->server;
  SessionManager *m = &impl_->manager;

  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Headers", "Content-Type"},
                           {"Access-Control-Allow-Methods",
                            "GET, POST, PATCH, OPTIONS"}});
  srv.Options(R"(.*)", [](const httplib::Request &, httplib::Response &res) {
    res.status = 204;
  });

  srv.Get("/healthz", [](const httplib::Request &, httplib::Response &res) {
    Reply(res, 200, {{"status", "ok"}});
  });

  srv.Post("/sessions", Guard([m](const httplib::Request &req, httplib::Response &res) {
             Json cfg = ParseBody(req);
             std::string id = m->CreateSession(cfg);
             Reply(res, 201, {{"session_id", id}});
           }));

  srv.Post("/sessions/import",
           Guard([m](const httplib::Request &req, httplib::Response &res) {
             std::string id = m->ImportLog(req.body);
             Reply(res, 201, {{"session_id", id}});
           }));

  srv.Post(R"(/sessions/([^/]+)/transmit)",
           Guard([m](const httplib::Request &req, httplib::Response &res) {
             auto payload = TransmitPayload::FromJson(ParseBody(req));
             Reply(res, 200, m->Transmit(req.matches[1], payload));
           }));

  srv.Post(R"(/sessions/([^/]+)/exchanges/([^/]+)/mark)",
           Guard([m](const httplib::Request &req, httplib::Response &res) {
             Json body = ParseBody(req);
             std::optional<Verdict> verdict;
             if (body.contains("verdict") && body["verdict"].is_string()) {
               verdict = ParseVerdict(body["verdict"].get<std::string>());
             }
             if (!verdict) {
               throw Error(ErrorCode::kInvalidArgument,
                           "verdict must be \"faithful\" or \"error\"");
             }
             Reply(res, 200, m->MarkChallenge(req.matches[1], req.matches[2], *verdict));
           }));

  srv.Get(R"(/sessions/([^/]+)/log)",
          Guard([m](const httplib::Request &req, httplib::Response &res) {
            std::string format =
                req.has_param("format") ? req.get_param_value("format") : "json";
            if (format == "jsonl") {
              res.set_content(m->GetLogJsonl(req.matches[1]), "application/x-ndjson");
            } else if (format == "json") {
              Reply(res, 200, m->GetLog(req.matches[1]));
            } else {
              throw Error(ErrorCode::kInvalidArgument, "format must be json or jsonl");
            }
          }));

  srv.Patch(R"(/sessions/([^/]+)/config)",
            Guard([m](const httplib::Request &req, httplib::Response &res) {
              Reply(res, 200, m->PatchConfig(req.matches[1], ParseBody(req)));
            }));
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind(const std::string &host, int port) {
  if (port == 0) {
    int p = impl_->server.bind_to_any_port(host);
    if (p < 0) throw Error(ErrorCode::kIo, "cannot bind " + host);
    return p;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::Listen() { impl_->server.listen_after_bind(); }

int HttpServer::Start(const std::string &host, int port) {
  int bound = Bind(host, port);
  thread_ = std::thread([this] { Listen(); });
  impl_->server.wait_until_ready();
  return bound;
}

void HttpServer::Stop() {
  impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace pseudopilot::service
