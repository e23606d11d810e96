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

#ifndef QBENCH_SERVICE_SESSION_H
#define QBENCH_SERVICE_SESSION_H

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "qbench/bench/propagate.h"

namespace qbench::service {

struct ServiceConfig {
    /// Shots per fire request streamed one by one; the rest of the request
    /// is folded into a single batch event.
    std::uint64_t streamed_shots_per_fire = 50;
    std::chrono::seconds idle_timeout{30 * 60};
    /// Upper bound on one fire request.
    std::uint64_t max_shots_per_fire = 10'000'000;
};

/// One entry of a session's event log; `body` carries "type" and payload.
struct SessionEvent {
    std::uint64_t seq = 0;
    nlohmann::json body;
};

/// What a session was asked to do, in order; enough to replay it.
struct Command {
    enum class Kind { Patch, Fire };
    Kind kind = Kind::Fire;
    std::string component;
    nlohmann::json params;
    bool interactive = false;
    std::uint64_t shots = 0;
};

class Session {
   public:
    Session(std::string id, std::string scene_name, bench::Scene scene, std::uint64_t seed, ServiceConfig config);

    const std::string &id() const { return id_; }

    nlohmann::json state() const;
    /// Applies each entry of `params`; returns the component's new params.
    nlohmann::json patch(const std::string &component, const nlohmann::json &params, bool interactive);
    /// Runs `shots` shots and appends their events. Returns a receipt.
    nlohmann::json fire(std::uint64_t shots);

    /// Events with seq > `after`, waiting up to `wait` for at least one.
    std::vector<SessionEvent> events_after(std::uint64_t after, std::chrono::milliseconds wait) const;
    std::uint64_t last_seq() const;
    const std::vector<Command> &log() const { return log_; }
    /// Snapshot of the event log for tests and replay checks.
    std::vector<SessionEvent> all_events() const;
    measure::CountsTable counts() const;

    std::chrono::steady_clock::time_point last_active() const;
    void touch();
    /// Wakes blocked readers so they can notice the session is gone.
    void close();
    bool closed() const;

   private:
    void append(nlohmann::json body);
    const bench::ShotSampler &sampler();

    std::string id_;
    std::string scene_name_;
    bench::Scene scene_;
    std::uint64_t seed_;
    ServiceConfig config_;

    mutable std::mutex mutex_;
    mutable std::condition_variable changed_;
    std::vector<SessionEvent> events_;
    std::vector<Command> log_;
    measure::CountsTable counts_;
    std::uint64_t shot_counter_ = 0;
    std::map<std::string, BlochVector> last_bloch_;
    std::unique_ptr<bench::ExactResult> exact_;
    std::unique_ptr<bench::ShotSampler> sampler_;
    std::chrono::steady_clock::time_point last_active_;
    bool closed_ = false;
};

/// Rounds to the nearest multiple of `step` (ties away from zero).
double quantize_angle(double degrees, double step);

class SessionManager {
   public:
    explicit SessionManager(ServiceConfig config = {});

    /// `scene` is a builtin name (string) or a scene document (object).
    /// Without a seed one is drawn from the system entropy source.
    std::shared_ptr<Session> create(const nlohmann::json &scene, std::optional<std::uint64_t> seed = std::nullopt);
    /// Throws NotFound.
    std::shared_ptr<Session> get(const std::string &id);
    void remove(const std::string &id);
    std::size_t size() const;

    /// Drops sessions idle since before `now - idle_timeout`; returns how many.
    std::size_t expire_idle(std::chrono::steady_clock::time_point now);

    const ServiceConfig &config() const { return config_; }

   private:
    ServiceConfig config_;
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::uint64_t next_id_ = 0;
    std::uint64_t id_salt_;
};

/// Recreates a session from its scene, seed and command log and returns the
/// resulting event log.
std::vector<SessionEvent> replay(const std::string &scene_name, const bench::Scene &scene, std::uint64_t seed,
                                 const std::vector<Command> &log, ServiceConfig config = {});

nlohmann::json event_json(const SessionEvent &event);

}  // namespace qbench::service

#endif
