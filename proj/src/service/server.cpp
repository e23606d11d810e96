// Copyright 2026 The qbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qbench/service/server.h"

#include <httplib.h>

#include <atomic>
#include <thread>

namespace qbench::service {

using nlohmann::json;

int http_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::Parse:
            return 400;
        case ErrorCode::Reference:
        case ErrorCode::NotFound:
            return 404;
        default:
            return 422;
    }
}

namespace {

void send_json(httplib::Response &res, int status, const json &body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response &res, ErrorCode code, const std::string &message) {
    send_json(res, http_status(code),
              {{"error",
                {{"code", error_code_name(code)}, {"exit_code", exit_code(code)}, {"message", message}}}});
}

json parse_body(const httplib::Request &req) {
    if (req.body.empty()) {
        return json::object();
    }
    try {
        return json::parse(req.body);
    } catch (const json::parse_error &e) {
        throw Error(ErrorCode::Parse, std::string("malformed request body: ") + e.what());
    }
}

template <typename F>
httplib::Server::Handler guarded(F f) {
    return [f](const httplib::Request &req, httplib::Response &res) {
        try {
            f(req, res);
        } catch (const Error &e) {
            send_error(res, e.code(), e.what());
        } catch (const json::exception &e) {
            send_error(res, ErrorCode::Validation, e.what());
        } catch (const std::exception &e) {
            send_error(res, ErrorCode::Validation, e.what());
        }
    };
}

std::string sse_frame(const SessionEvent &e) {
    const json body = event_json(e);
    return "id: " + std::to_string(e.seq) + "\nevent: " + body.value("type", "event") + "\ndata: " + body.dump() +
           "\n\n";
}

}  // namespace

struct Server::Impl {
    explicit Impl(ServiceConfig config) : sessions(config) {}

    httplib::Server http;
    SessionManager sessions;
    std::atomic<bool> stopping{false};
    std::thread reaper;
    std::mutex reaper_mutex;
    std::condition_variable reaper_cv;

    void routes();
    void start_reaper() {
        reaper = std::thread([this] {
            std::unique_lock lock(reaper_mutex);
            while (!stopping) {
                reaper_cv.wait_for(lock, std::chrono::seconds(30), [this] { return stopping.load(); });
                sessions.expire_idle(std::chrono::steady_clock::now());
            }
        });
    }
};

void Server::Impl::routes() {
    http.Get("/v1/scenes", guarded([](const httplib::Request &, httplib::Response &res) {
                 json list = json::array();
                 for (const auto &b : bench::builtin_scenes()) {
                     list.push_back({{"name", b.name}, {"description", b.description}});
                 }
                 send_json(res, 200, {{"schema_version", "1"}, {"scenes", list}});
             }));

    http.Post("/v1/sessions", guarded([this](const httplib::Request &req, httplib::Response &res) {
                  const json body = parse_body(req);
                  if (!body.contains("scene")) {
                      throw Error(ErrorCode::Validation, "missing 'scene'");
                  }
                  std::optional<std::uint64_t> seed;
                  if (body.contains("seed")) {
                      seed = body.at("seed").get<std::uint64_t>();
                  }
                  auto session = sessions.create(body.at("scene"), seed);
                  send_json(res, 201, session->state());
              }));

    http.Get(R"(/v1/sessions/([^/]+))", guarded([this](const httplib::Request &req, httplib::Response &res) {
                 auto session = sessions.get(req.matches[1]);
                 session->touch();
                 send_json(res, 200, session->state());
             }));

    http.Delete(R"(/v1/sessions/([^/]+))", guarded([this](const httplib::Request &req, httplib::Response &res) {
                    sessions.remove(req.matches[1]);
                    res.status = 204;
                }));

    http.Patch(R"(/v1/sessions/([^/]+)/components/([^/]+))",
               guarded([this](const httplib::Request &req, httplib::Response &res) {
                   auto session = sessions.get(req.matches[1]);
                   const json body = parse_body(req);
                   if (!body.contains("params")) {
                       throw Error(ErrorCode::Validation, "missing 'params'");
                   }
                   const json applied =
                       session->patch(req.matches[2], body.at("params"), body.value("interactive", false));
                   send_json(res, 200,
                             {{"component", std::string(req.matches[2])},
                              {"params", applied},
                              {"last_seq", session->last_seq()}});
               }));

    http.Post(R"(/v1/sessions/([^/]+)/fire)", guarded([this](const httplib::Request &req, httplib::Response &res) {
                  auto session = sessions.get(req.matches[1]);
                  const json body = parse_body(req);
                  const std::uint64_t shots = body.value("shots", std::uint64_t{1});
                  send_json(res, 202, session->fire(shots));
              }));

    http.Get(R"(/v1/sessions/([^/]+)/events)", guarded([this](const httplib::Request &req, httplib::Response &res) {
                 auto session = sessions.get(req.matches[1]);
                 std::uint64_t from = 0;
                 if (req.has_param("from")) {
                     try {
                         from = std::stoull(req.get_param_value("from"));
                     } catch (const std::exception &) {
                         throw Error(ErrorCode::Validation, "'from' must be a sequence number");
                     }
                 }
                 const bool follow = req.get_param_value("follow") != "0";
                 auto cursor = std::make_shared<std::uint64_t>(from);
                 res.set_header("Cache-Control", "no-cache");
                 res.set_chunked_content_provider(
                     "text/event-stream", [this, session, cursor, follow](std::size_t, httplib::DataSink &sink) {
                         const auto wait = follow ? std::chrono::milliseconds(1000) : std::chrono::milliseconds(0);
                         const auto events = session->events_after(*cursor, wait);
                         for (const auto &e : events) {
                             const std::string frame = sse_frame(e);
                             if (!sink.write(frame.data(), frame.size())) {
                                 return false;
                             }
                             *cursor = e.seq;
                         }
                         if (!follow || session->closed() || stopping) {
                             sink.done();
                             return true;
                         }
                         if (events.empty()) {
                             static const std::string kKeepAlive = ": keep-alive\n\n";
                             return sink.write(kKeepAlive.data(), kKeepAlive.size());
                         }
                         return true;
                     });
             }));
}

Server::Server(ServiceConfig config) : impl_(std::make_unique<Impl>(config)) { impl_->routes(); }

Server::~Server() {
    stop();
    if (impl_->reaper.joinable()) {
        impl_->reaper.join();
    }
}

bool Server::listen(const std::string &host, int port) {
    if (!impl_->http.bind_to_port(host, port)) {
        return false;
    }
    return serve();
}

int Server::bind_any(const std::string &host) { return impl_->http.bind_to_any_port(host); }

bool Server::serve() {
    impl_->start_reaper();
    return impl_->http.listen_after_bind();
}

void Server::stop() {
    {
        std::lock_guard lock(impl_->reaper_mutex);
        impl_->stopping = true;
    }
    impl_->reaper_cv.notify_all();
    impl_->http.stop();
}

SessionManager &Server::sessions() { return impl_->sessions; }

}  // namespace qbench::service
