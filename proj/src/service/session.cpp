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

#include "qbench/service/session.h"

#include <cmath>
#include <cstdio>
#include <random>

#include "qbench/core/error.h"

namespace qbench::service {

using nlohmann::json;

double quantize_angle(double degrees, double step) {
    if (!(step > 0.0)) {
        throw Error(ErrorCode::Validation, "angle step must be positive");
    }
    return std::round(degrees / step) * step;
}

Session::Session(std::string id, std::string scene_name, bench::Scene scene, std::uint64_t seed, ServiceConfig config)
    : id_(std::move(id)),
      scene_name_(std::move(scene_name)),
      scene_(std::move(scene)),
      seed_(seed),
      config_(config),
      last_active_(std::chrono::steady_clock::now()) {
    const auto &s = sampler();
    counts_ = bench::empty_counts(scene_, s.exact().compiled, seed_);
    counts_.scene = scene_name_;
}

const bench::ShotSampler &Session::sampler() {
    if (!sampler_) {
        exact_ = std::make_unique<bench::ExactResult>(bench::propagate_exact(scene_));
        sampler_ = std::make_unique<bench::ShotSampler>(*exact_, seed_);
    }
    return *sampler_;
}

void Session::append(json body) {
    SessionEvent e{events_.size() + 1, std::move(body)};
    events_.push_back(std::move(e));
}

json Session::state() const {
    std::lock_guard lock(mutex_);
    json bloch = json::object();
    for (const auto &[component, b] : last_bloch_) {
        bloch[component] = {b.x, b.y, b.z};
    }
    return {{"schema_version", "1"},
            {"id", id_},
            {"scene_name", scene_name_},
            {"scene", bench::scene_to_json(scene_)},
            {"scene_hash", bench::scene_hash(scene_)},
            {"seed", seed_},
            {"prng", std::string(Rng::kAlgorithm)},
            {"shots", shot_counter_},
            {"counts", measure::counts_to_json(counts_)},
            {"last_seq", events_.size()},
            {"bloch", bloch}};
}

json Session::patch(const std::string &component, const json &params, bool interactive) {
    std::lock_guard lock(mutex_);
    const auto *c = scene_.find(component);
    if (c == nullptr) {
        throw Error(ErrorCode::Reference, "no component with id '" + component + "'");
    }
    if (!params.is_object() || params.empty()) {
        throw Error(ErrorCode::Validation, "params must be a non-empty object");
    }
    bench::Scene trial = scene_;
    const auto angles = bench::angle_params(c->kind);
    const bool plate = c->kind == bench::ComponentKind::Hwp || c->kind == bench::ComponentKind::Qwp;
    for (const auto &[key, value] : params.items()) {
        json v = value;
        const bool angle = std::find(angles.begin(), angles.end(), key) != angles.end();
        if (interactive && angle && v.is_number()) {
            double deg = quantize_angle(v.get<double>(), trial.find(component)->angle_step);
            if (plate) {
                deg = std::fmod(deg, 180.0);
                deg += deg < 0.0 ? 180.0 : 0.0;
            }
            v = deg;
        }
        bench::set_param(trial, component, key, v);
    }
    // Compile before committing so a patch cannot leave a broken scene.
    bench::propagate_exact(trial);
    scene_ = std::move(trial);
    sampler_.reset();
    exact_.reset();
    sampler();
    counts_.scene_hash = bench::scene_hash(scene_);

    json applied = bench::params_to_json(*scene_.find(component));
    append({{"type", "param_changed"},
            {"component", component},
            {"params", applied},
            {"angle_step", scene_.find(component)->angle_step}});
    log_.push_back({Command::Kind::Patch, component, params, interactive, 0});
    last_active_ = std::chrono::steady_clock::now();
    changed_.notify_all();
    return applied;
}

json Session::fire(std::uint64_t shots) {
    std::lock_guard lock(mutex_);
    if (shots == 0 || shots > config_.max_shots_per_fire) {
        throw Error(ErrorCode::Validation,
                    "shots must be between 1 and " + std::to_string(config_.max_shots_per_fire));
    }
    const bench::ShotSampler &s = sampler();
    const std::uint64_t first = shot_counter_;
    bench::Batch batch;
    for (const auto &t : s.exact().compiled.terminals) {
        if (t.detector) {
            batch.clicks[t.component] = 0;
        }
    }
    for (std::uint64_t k = 0; k < shots; ++k) {
        const auto outcome = s.sample(first + k);
        bench::tally(counts_, s, outcome);
        if (k < config_.streamed_shots_per_fire) {
            for (const auto &e : s.events(outcome)) {
                if (const auto *pc = std::get_if<bench::PlateCrossed>(&e.body)) {
                    last_bloch_[pc->component] = pc->bloch;
                }
                append(bench::event_to_json(e));
            }
            continue;
        }
        if (batch.shots == 0) {
            batch.first_shot = first + k;
        }
        ++batch.shots;
        const auto &terminals = s.exact().compiled.terminals;
        for (std::size_t i = 0; i < outcome.clicks.size(); ++i) {
            batch.clicks[terminals[i].component] += static_cast<std::uint64_t>(outcome.clicks[i]);
        }
        batch.heralds += outcome.herald.value_or(false) ? 1 : 0;
    }
    if (batch.shots > 0) {
        append(bench::event_to_json({batch.first_shot, -1, batch}));
    }
    shot_counter_ += shots;
    log_.push_back({Command::Kind::Fire, {}, {}, false, shots});
    last_active_ = std::chrono::steady_clock::now();
    changed_.notify_all();
    return {{"accepted", shots}, {"first_shot", first}, {"last_seq", events_.size()}};
}

std::vector<SessionEvent> Session::events_after(std::uint64_t after, std::chrono::milliseconds wait) const {
    std::unique_lock lock(mutex_);
    changed_.wait_for(lock, wait, [&] { return events_.size() > after || closed_; });
    if (after >= events_.size()) {
        return {};
    }
    return {events_.begin() + static_cast<std::ptrdiff_t>(after), events_.end()};
}

std::uint64_t Session::last_seq() const {
    std::lock_guard lock(mutex_);
    return events_.size();
}

std::vector<SessionEvent> Session::all_events() const {
    std::lock_guard lock(mutex_);
    return events_;
}

measure::CountsTable Session::counts() const {
    std::lock_guard lock(mutex_);
    return counts_;
}

std::chrono::steady_clock::time_point Session::last_active() const {
    std::lock_guard lock(mutex_);
    return last_active_;
}

void Session::touch() {
    std::lock_guard lock(mutex_);
    last_active_ = std::chrono::steady_clock::now();
}

void Session::close() {
    std::lock_guard lock(mutex_);
    closed_ = true;
    changed_.notify_all();
}

bool Session::closed() const {
    std::lock_guard lock(mutex_);
    return closed_;
}

// ---------------------------------------------------------------------------

SessionManager::SessionManager(ServiceConfig config) : config_(config), id_salt_(std::random_device{}()) {
    id_salt_ = (id_salt_ << 32) ^ std::random_device{}();
}

std::shared_ptr<Session> SessionManager::create(const json &scene, std::optional<std::uint64_t> seed) {
    std::string name;
    bench::Scene parsed;
    if (scene.is_string()) {
        name = scene.get<std::string>();
        parsed = bench::builtin_scene(name);
    } else if (scene.is_object()) {
        name = "custom";
        parsed = bench::scene_from_json(scene);
    } else {
        throw Error(ErrorCode::Validation, "scene must be a builtin name or a scene document");
    }
    if (!seed) {
        std::random_device rd;
        seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    std::string id;
    {
        std::lock_guard lock(mutex_);
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(mix64(id_salt_ + ++next_id_)));
        id = buf;
    }
    auto session = std::make_shared<Session>(id, name, std::move(parsed), *seed, config_);
    std::lock_guard lock(mutex_);
    sessions_[id] = session;
    return session;
}

std::shared_ptr<Session> SessionManager::get(const std::string &id) {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) {
        throw Error(ErrorCode::NotFound, "no session '" + id + "'");
    }
    return it->second;
}

void SessionManager::remove(const std::string &id) {
    std::shared_ptr<Session> gone;
    {
        std::lock_guard lock(mutex_);
        auto it = sessions_.find(id);
        if (it == sessions_.end()) {
            throw Error(ErrorCode::NotFound, "no session '" + id + "'");
        }
        gone = it->second;
        sessions_.erase(it);
    }
    gone->close();
}

std::size_t SessionManager::size() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

std::size_t SessionManager::expire_idle(std::chrono::steady_clock::time_point now) {
    std::vector<std::shared_ptr<Session>> expired;
    {
        std::lock_guard lock(mutex_);
        for (auto it = sessions_.begin(); it != sessions_.end();) {
            if (now - it->second->last_active() > config_.idle_timeout) {
                expired.push_back(it->second);
                it = sessions_.erase(it);
            } else {
                ++it;
            }
        }
    }
    for (auto &s : expired) {
        s->close();
    }
    return expired.size();
}

std::vector<SessionEvent> replay(const std::string &scene_name, const bench::Scene &scene, std::uint64_t seed,
                                 const std::vector<Command> &log, ServiceConfig config) {
    Session session("replay", scene_name, scene, seed, config);
    for (const auto &c : log) {
        if (c.kind == Command::Kind::Patch) {
            session.patch(c.component, c.params, c.interactive);
        } else {
            session.fire(c.shots);
        }
    }
    return session.all_events();
}

json event_json(const SessionEvent &event) {
    json j = event.body;
    j["seq"] = event.seq;
    return j;
}

}  // namespace qbench::service
