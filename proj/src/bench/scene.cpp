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

#include "qbench/bench/scene.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "qbench/core/error.h"

namespace qbench::bench {

namespace {

struct KindEntry {
    ComponentKind kind;
    std::string_view name;
};

constexpr std::array<KindEntry, 10> kKinds{{
    {ComponentKind::Laser, "laser"},
    {ComponentKind::Pbs, "pbs"},
    {ComponentKind::Hwp, "hwp"},
    {ComponentKind::Qwp, "qwp"},
    {ComponentKind::Bbo, "bbo"},
    {ComponentKind::Apd, "apd"},
    {ComponentKind::Smf, "smf"},
    {ComponentKind::Prism, "prism"},
    {ComponentKind::PhotonSource, "photon_source"},
    {ComponentKind::BellSource, "bell_source"},
}};

[[noreturn]] void invalid(const std::string &message) { throw Error(ErrorCode::Validation, message); }

void validate_params(const ComponentInstance &c) {
    const std::string where = "component '" + c.id + "': ";
    auto finite_angle = [&](const Angle &a, const char *name) {
        if (!std::isfinite(a.deg())) {
            invalid(where + name + " must be finite");
        }
    };
    std::visit(
        [&](const auto &p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, PbsParams>) {
                finite_angle(p.angle, "angle");
                finite_angle(p.reflection_phase, "reflection_phase");
            } else if constexpr (std::is_same_v<T, WaveplateParams>) {
                finite_angle(p.angle, "angle");
            } else if constexpr (std::is_same_v<T, BboParams>) {
                finite_angle(p.relative_phase, "relative_phase");
                try {
                    optics::SpdcSourceSpec{p.geometry, p.pump_wavelength_nm * 1e-9, p.emission_probability,
                                           p.relative_phase.rad()}
                        .validate();
                } catch (const Error &e) {
                    invalid(where + e.what());
                }
            } else if constexpr (std::is_same_v<T, ApdParams>) {
                try {
                    p.spec().validate();
                } catch (const Error &e) {
                    invalid(where + e.what());
                }
            }
        },
        c.params);

    bool matches = false;
    switch (c.kind) {
        case ComponentKind::Laser:
            matches = std::holds_alternative<LaserParams>(c.params);
            break;
        case ComponentKind::Pbs:
            matches = std::holds_alternative<PbsParams>(c.params);
            break;
        case ComponentKind::Hwp:
        case ComponentKind::Qwp:
            matches = std::holds_alternative<WaveplateParams>(c.params);
            break;
        case ComponentKind::Bbo:
            matches = std::holds_alternative<BboParams>(c.params);
            break;
        case ComponentKind::Apd:
            matches = std::holds_alternative<ApdParams>(c.params);
            break;
        case ComponentKind::Smf:
        case ComponentKind::Prism:
            matches = std::holds_alternative<PassiveParams>(c.params);
            break;
        case ComponentKind::PhotonSource:
            matches = std::holds_alternative<PhotonSourceParams>(c.params);
            break;
        case ComponentKind::BellSource:
            matches = std::holds_alternative<BellSourceParams>(c.params);
            break;
    }
    if (!matches) {
        invalid(where + "parameters do not match kind '" + std::string(kind_name(c.kind)) + "'");
    }
    if (!(c.angle_step > 0.0) || !std::isfinite(c.angle_step)) {
        invalid(where + "angle_step must be positive");
    }
}

bool has_port(const std::vector<std::string> &ports, const std::string &port) {
    return std::find(ports.begin(), ports.end(), port) != ports.end();
}

}  // namespace

std::string_view kind_name(ComponentKind kind) {
    for (const auto &k : kKinds) {
        if (k.kind == kind) {
            return k.name;
        }
    }
    return "unknown";
}

ComponentKind kind_from_name(std::string_view name) {
    for (const auto &k : kKinds) {
        if (k.name == name) {
            return k.kind;
        }
    }
    invalid("unknown component kind '" + std::string(name) + "'");
}

ComponentParams default_params(ComponentKind kind) {
    switch (kind) {
        case ComponentKind::Laser:
            return LaserParams{};
        case ComponentKind::Pbs:
            return PbsParams{};
        case ComponentKind::Hwp:
        case ComponentKind::Qwp:
            return WaveplateParams{};
        case ComponentKind::Bbo:
            return BboParams{};
        case ComponentKind::Apd:
            return ApdParams{};
        case ComponentKind::Smf:
        case ComponentKind::Prism:
            return PassiveParams{};
        case ComponentKind::PhotonSource:
            return PhotonSourceParams{};
        case ComponentKind::BellSource:
            return BellSourceParams{};
    }
    return PassiveParams{};
}

const std::vector<std::string> &input_ports(ComponentKind kind) {
    static const std::vector<std::string> none;
    static const std::vector<std::string> single{"in"};
    static const std::vector<std::string> pair{"in1", "in2"};
    static const std::vector<std::string> pump{"pump"};
    switch (kind) {
        case ComponentKind::Laser:
        case ComponentKind::PhotonSource:
        case ComponentKind::BellSource:
            return none;
        case ComponentKind::Pbs:
            return pair;
        case ComponentKind::Bbo:
            return pump;
        default:
            return single;
    }
}

const std::vector<std::string> &output_ports(ComponentKind kind) {
    static const std::vector<std::string> none;
    static const std::vector<std::string> single{"out"};
    static const std::vector<std::string> pair{"out1", "out2"};
    static const std::vector<std::string> spdc{"signal", "idler"};
    static const std::vector<std::string> bell{"a1", "a2"};
    switch (kind) {
        case ComponentKind::Apd:
            return none;
        case ComponentKind::Pbs:
            return pair;
        case ComponentKind::Bbo:
            return spdc;
        case ComponentKind::BellSource:
            return bell;
        default:
            return single;
    }
}

bool is_source_kind(ComponentKind kind) {
    return kind == ComponentKind::Laser || kind == ComponentKind::PhotonSource || kind == ComponentKind::BellSource;
}

const ComponentInstance *Scene::find(std::string_view id) const {
    for (const auto &c : components) {
        if (c.id == id) {
            return &c;
        }
    }
    return nullptr;
}

ComponentInstance *Scene::find(std::string_view id) {
    for (auto &c : components) {
        if (c.id == id) {
            return &c;
        }
    }
    return nullptr;
}

const ComponentInstance &Scene::at(std::string_view id) const {
    const auto *c = find(id);
    if (c == nullptr) {
        throw Error(ErrorCode::Reference, "no component with id '" + std::string(id) + "'");
    }
    return *c;
}

std::size_t Scene::index_of(std::string_view id) const {
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (components[i].id == id) {
            return i;
        }
    }
    throw Error(ErrorCode::Reference, "no component with id '" + std::string(id) + "'");
}

const Link *Scene::link_from(const PortRef &port) const {
    for (const auto &l : links) {
        if (l.from == port) {
            return &l;
        }
    }
    return nullptr;
}

const Link *Scene::link_to(const PortRef &port) const {
    for (const auto &l : links) {
        if (l.to == port) {
            return &l;
        }
    }
    return nullptr;
}

std::vector<std::pair<std::string, std::vector<std::string>>> Scene::herald_groups() const {
    std::vector<std::pair<std::string, std::vector<std::string>>> groups;
    for (const auto &d : detectors) {
        const auto *c = find(d);
        if (c == nullptr) {
            continue;
        }
        const auto *apd = std::get_if<ApdParams>(&c->params);
        if (apd == nullptr || apd->herald_group.empty()) {
            continue;
        }
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto &g) { return g.first == apd->herald_group; });
        if (it == groups.end()) {
            groups.push_back({apd->herald_group, {d}});
        } else {
            it->second.push_back(d);
        }
    }
    return groups;
}

void validate_scene(const Scene &scene) {
    if (scene.schema_version != kSceneSchemaVersion) {
        throw Error(ErrorCode::Version, "unsupported schema_version '" + scene.schema_version + "' (expected '" +
                                            std::string(kSceneSchemaVersion) + "')");
    }
    std::set<std::string> ids;
    for (const auto &c : scene.components) {
        if (c.id.empty() || c.id.find('.') != std::string::npos) {
            invalid("component id '" + c.id + "' must be nonempty and contain no '.'");
        }
        if (!ids.insert(c.id).second) {
            invalid("duplicate component id '" + c.id + "'");
        }
        validate_params(c);
    }

    std::set<PortRef> used;
    for (const auto &l : scene.links) {
        const std::string where = "link " + l.from.str() + " -> " + l.to.str() + ": ";
        const auto *from = scene.find(l.from.component);
        const auto *to = scene.find(l.to.component);
        if (from == nullptr) {
            invalid(where + "unknown component '" + l.from.component + "'");
        }
        if (to == nullptr) {
            invalid(where + "unknown component '" + l.to.component + "'");
        }
        if (!has_port(output_ports(from->kind), l.from.port)) {
            invalid(where + "'" + l.from.str() + "' is not an output port of a " + std::string(kind_name(from->kind)));
        }
        if (!has_port(input_ports(to->kind), l.to.port)) {
            invalid(where + "'" + l.to.str() + "' is not an input port of a " + std::string(kind_name(to->kind)));
        }
        for (const auto &p : {l.from, l.to}) {
            if (!used.insert(p).second) {
                invalid(where + "port '" + p.str() + "' is used more than once");
            }
        }
    }

    std::set<std::string> seen;
    for (const auto &d : scene.detectors) {
        const auto *c = scene.find(d);
        if (c == nullptr || c->kind != ComponentKind::Apd) {
            invalid("detector '" + d + "' does not reference an apd component");
        }
        if (!seen.insert(d).second) {
            invalid("detector '" + d + "' listed twice");
        }
    }
    seen.clear();
    for (const auto &s : scene.sources) {
        const auto *c = scene.find(s);
        if (c == nullptr || !is_source_kind(c->kind)) {
            invalid("source '" + s + "' does not reference a laser, photon_source or bell_source");
        }
        if (!seen.insert(s).second) {
            invalid("source '" + s + "' listed twice");
        }
    }
    for (const auto &[id, point] : scene.layout) {
        if (scene.find(id) == nullptr) {
            invalid("layout entry for unknown component '" + id + "'");
        }
        if (!std::isfinite(point.x) || !std::isfinite(point.y)) {
            invalid("layout entry for '" + id + "' is not finite");
        }
    }
    topological_order(scene);
}

std::vector<std::string> topological_order(const Scene &scene) {
    const std::size_t n = scene.components.size();
    std::vector<int> indegree(n, 0);
    std::vector<std::vector<std::size_t>> next(n);
    for (const auto &l : scene.links) {
        auto a = scene.index_of(l.from.component);
        auto b = scene.index_of(l.to.component);
        next[a].push_back(b);
        ++indegree[b];
    }
    std::set<std::size_t> ready;
    for (std::size_t i = 0; i < n; ++i) {
        if (indegree[i] == 0) {
            ready.insert(i);
        }
    }
    std::vector<std::string> order;
    while (!ready.empty()) {
        auto i = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(scene.components[i].id);
        for (auto j : next[i]) {
            if (--indegree[j] == 0) {
                ready.insert(j);
            }
        }
    }
    if (order.size() != n) {
        for (std::size_t i = 0; i < n; ++i) {
            if (indegree[i] > 0) {
                invalid("propagation graph has a cycle through component '" + scene.components[i].id + "'");
            }
        }
    }
    return order;
}

}  // namespace qbench::bench
