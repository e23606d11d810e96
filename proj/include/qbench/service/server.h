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

#ifndef QBENCH_SERVICE_SERVER_H
#define QBENCH_SERVICE_SERVER_H

#include <memory>
#include <string>

#include "qbench/core/error.h"
#include "qbench/service/session.h"

namespace qbench::service {

/// HTTP front end:
///   GET    /v1/scenes
///   POST   /v1/sessions                       {"scene": name | document, "seed"?}
///   GET    /v1/sessions/{id}
///   DELETE /v1/sessions/{id}
///   PATCH  /v1/sessions/{id}/components/{cid} {"params": {...}, "interactive"?}
///   POST   /v1/sessions/{id}/fire             {"shots": n}
///   GET    /v1/sessions/{id}/events?from=k[&follow=0]   (text/event-stream)
class Server {
   public:
    explicit Server(ServiceConfig config = {});
    ~Server();
    Server(const Server &) = delete;
    Server &operator=(const Server &) = delete;

    /// Binds and serves until stop(); returns false when binding fails.
    bool listen(const std::string &host, int port);
    /// Binds to an ephemeral port and returns it, or -1.
    int bind_any(const std::string &host);
    /// Serves on a port obtained from bind_any().
    bool serve();
    void stop();

    SessionManager &sessions();

   private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// HTTP status for an error code.
int http_status(ErrorCode code);

}  // namespace qbench::service

#endif
