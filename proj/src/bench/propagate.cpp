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

#include "qbench/bench/propagate.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "qbench/core/error.h"

namespace qbench::bench {

namespace {

constexpr double kPresent = 1e-15;

std::string link_label(const Link &link) { return link.from.str() + "->" + link.to.str(); }

double nominal_duration(const Scene &scene, const Link &link) {
    auto a = scene.layout.find(link.from.component);
    auto b = scene.layout.find(link.to.component);
    if (a == scene.layout.end() || b == scene.layout.end()) {
        return 250.0;
    }
    double d = std::hypot(a->second.x - b->second.x, a->second.y - b->second.y);
    return std::max(100.0, 500.0 * d);
}

FockState embed_state(const FockState &local, const ModeRegistry &registry) {
    std::vector<std::size_t> target;
    for (const auto &m : local.registry().modes()) {
        target.push_back(registry.index(m.path, m.pol));
    }
    FockState out(registry);
    for (const auto &[occ, amp] : local.terms()) {
        Occupation o(registry.size(), 0);
        for (std::size_t i = 0; i < occ.size(); ++i) {
            o[target[i]] = static_cast<std::uint8_t>(o[target[i]] + occ[i]);
        }
        out.add(o, amp);
    }
    return out;
}

// Product of two states over one registry that occupy disjoint modes.
FockState product(const FockState &a, const FockState &b) {
    FockState out(a.registry());
    for (const auto &[oa, xa] : a.terms()) {
        for (const auto &[ob, xb] : b.terms()) {
            Occupation o(oa.size());
            for (std::size_t i = 0; i < oa.size(); ++i) {
                o[i] = static_cast<std::uint8_t>(oa[i] + ob[i]);
            }
            out.add(o, xa * xb);
        }
    }
    return out;
}

int photons_on(const Occupation &occ, std::pair<std::size_t, std::size_t> modes) {
    return occ[modes.first] + occ[modes.second];
}

double path_probability(const FockState &state, const std::string &path) {
    const auto &reg = state.registry();
    std::pair modes{reg.index(path, Pol::H), reg.index(path, Pol::V)};
    double p = 0.0;
    for (const auto &[occ, amp] : state.terms()) {
        if (photons_on(occ, modes) > 0) {
            p += std::norm(amp);
        }
    }
    return p;
}

std::optional<PolarizationState> pure_polarization(const FockState &state, const std::string &path) {
    auto rho = reduced_polarization(state, path);
    if (!rho || rho->purity() < 1.0 - 1e-9) {
        return std::nullopt;
    }
    const auto &m = rho->matrix();
    int k = m(0, 0).real() >= m(1, 1).real() ? 0 : 1;
    return PolarizationState::normalized(m(0, k), m(1, k));
}

std::optional<BlochVector> unit_bloch(const Eigen::Vector2cd &field) {
    if (field.squaredNorm() < kPresent) {
        return std::nullopt;
    }
    auto b = bloch_from_state(PolarizationState::normalized(field(0), field(1)));
    double n = b.norm();
    return BlochVector{b.x / n, b.y / n, b.z / n};
}

Jones plate_jones(const ComponentInstance &c) {
    double theta = std::get<WaveplateParams>(c.params).angle.rad();
    return c.kind == ComponentKind::Hwp ? optics::jones_hwp(theta) : optics::jones_qwp(theta);
}

optics::PbsSpec pbs_spec(const ComponentInstance &c) {
    const auto &p = std::get<PbsParams>(c.params);
    optics::PbsSpec spec;
    spec.basis = p.basis;
    spec.angle = p.angle.rad();
    spec.reflection_phase = std::polar(1.0, p.reflection_phase.rad());
    return spec;
}

std::string pattern_key_for(const std::vector<std::string> &names, const std::vector<int> &clicks) {
    std::string key;
    for (std::size_t i = 0; i < clicks.size(); ++i) {
        if (clicks[i] == 0) {
            continue;
        }
        if (!key.empty()) {
            key += '+';
        }
        key += names[i];
        if (clicks[i] > 1) {
            key += 'x' + std::to_string(clicks[i]);
        }
    }
    return key.empty() ? "none" : key;
}

std::vector<std::string> detector_names(const CompiledScene &cs) {
    std::vector<std::string> names;
    for (const auto &t : cs.terminals) {
        if (t.detector) {
            names.push_back(t.component);
        }
    }
    return names;
}

}  // namespace

std::size_t CompiledScene::detector_count() const {
    return static_cast<std::size_t>(
        std::count_if(terminals.begin(), terminals.end(), [](const Terminal &t) { return t.detector; }));
}

// ---------------------------------------------------------------------------
// Compilation
// ---------------------------------------------------------------------------

CompiledScene compile_scene(const Scene &scene) {
    validate_scene(scene);
    CompiledScene cs;
    cs.herald_groups = scene.herald_groups();
    const std::set<std::string> firing(scene.sources.begin(), scene.sources.end());

    std::map<std::string, std::string> photon_out;   // "c.port" -> path
    std::map<std::string, Eigen::Vector2cd> pump_out;  // "c.port" -> field
    std::map<std::string, std::string> pump_label;   // "c.port" -> beam label
    ModeRegistry &registry = cs.registry;
    std::vector<FockState> local_emissions;
    std::vector<std::function<ModeUnitary(const ModeRegistry &)>> builders;
    std::map<std::string, std::string> detector_paths;
    std::vector<Terminal> sinks;

    auto fresh = [&](const std::string &path) {
        registry.add_path(path);
        return path;
    };

    for (const auto &id : topological_order(scene)) {
        const ComponentInstance &c = scene.at(id);
        Visit visit;
        visit.component = id;
        visit.kind = c.kind;

        // Classify the inputs.
        std::vector<std::optional<std::string>> in_paths;
        std::vector<std::optional<Eigen::Vector2cd>> in_fields;
        std::string label;
        bool any_pump = false;
        bool any_photon = false;
        for (const auto &port : input_ports(c.kind)) {
            const Link *link = scene.link_to({id, port});
            in_paths.emplace_back();
            in_fields.emplace_back();
            if (link == nullptr) {
                continue;
            }
            const std::string from = link->from.str();
            IncomingLink in{link_label(*link), {}, 0.0, nominal_duration(scene, *link)};
            if (auto f = pump_out.find(from); f != pump_out.end()) {
                any_pump = true;
                in_fields.back() = f->second;
                in.path = pump_label.at(from);
                in.pump_power = f->second.squaredNorm();
                if (label.empty()) {
                    label = in.path;
                }
            } else {
                any_photon = true;
                in_paths.back() = photon_out.at(from);
                in.path = *in_paths.back();
            }
            visit.incoming.push_back(std::move(in));
        }
        if (any_pump && any_photon) {
            throw Error(ErrorCode::Validation, "component '" + id + "' mixes pump light and photons");
        }

        auto out_port = [&](const std::string &port) { return id + "." + port; };

        switch (c.kind) {
            case ComponentKind::Laser: {
                visit.classical = true;
                Eigen::Vector2cd field = Eigen::Vector2cd::Zero();
                if (firing.count(id) != 0) {
                    field = std::get<LaserParams>(c.params).polarization.vector();
                }
                pump_out[out_port("out")] = field;
                pump_label[out_port("out")] = out_port("out");
                visit.pump_path = out_port("out");
                break;
            }
            case ComponentKind::PhotonSource: {
                const std::string path = fresh(out_port("out"));
                photon_out[out_port("out")] = path;
                if (firing.count(id) != 0) {
                    ModeRegistry local;
                    local.add_path(path);
                    visit.emitter = static_cast<int>(cs.emitters.size());
                    cs.emitters.push_back({id, {path}, 1.0, false, FockState(ModeRegistry{})});
                    local_emissions.push_back(
                        single_photon(local, path, std::get<PhotonSourceParams>(c.params).polarization));
                }
                break;
            }
            case ComponentKind::BellSource: {
                const std::string a1 = fresh(out_port("a1"));
                const std::string a2 = fresh(out_port("a2"));
                photon_out[out_port("a1")] = a1;
                photon_out[out_port("a2")] = a2;
                if (firing.count(id) != 0) {
                    visit.emitter = static_cast<int>(cs.emitters.size());
                    cs.emitters.push_back({id, {a1, a2}, 1.0, false, FockState(ModeRegistry{})});
                    local_emissions.push_back(optics::bell_pair(std::get<BellSourceParams>(c.params).state, a1, a2));
                }
                break;
            }
            case ComponentKind::Bbo: {
                if (any_photon) {
                    throw Error(ErrorCode::Validation, "crystal '" + id + "' is pumped by photons, not the laser");
                }
                const std::string signal = fresh(out_port("signal"));
                const std::string idler = fresh(out_port("idler"));
                photon_out[out_port("signal")] = signal;
                photon_out[out_port("idler")] = idler;
                Eigen::Vector2cd field = in_fields[0].value_or(Eigen::Vector2cd::Zero());
                cs.pump_fields[id] = field;
                double power = field.squaredNorm();
                if (power > 1.0 + 1e-9) {
                    throw Error(ErrorCode::Validation, "pump power at '" + id + "' exceeds the laser output");
                }
                if (power > kPresent) {
                    const auto &p = std::get<BboParams>(c.params);
                    optics::SpdcSourceSpec spec;
                    spec.geometry = p.geometry;
                    spec.emission_probability = p.emission_probability;
                    spec.relative_phase = p.relative_phase.rad();
                    spec.pump_wavelength = p.pump_wavelength_nm * 1e-9;
                    auto pair =
                        optics::spdc_emit(spec, PolarizationState::normalized(field(0), field(1)), signal, idler);
                    double probability = std::min(1.0, pair.probability * power);
                    if (probability > 0.0) {
                        visit.emitter = static_cast<int>(cs.emitters.size());
                        cs.emitters.push_back({id, {signal, idler}, probability, probability < 1.0,
                                               FockState(ModeRegistry{})});
                        local_emissions.push_back(std::move(pair.pair));
                    }
                }
                break;
            }
            case ComponentKind::Hwp:
            case ComponentKind::Qwp:
            case ComponentKind::Smf:
            case ComponentKind::Prism: {
                const bool plate = c.kind == ComponentKind::Hwp || c.kind == ComponentKind::Qwp;
                if (any_pump) {
                    visit.classical = true;
                    Eigen::Vector2cd field = *in_fields[0];
                    if (plate) {
                        field = plate_jones(c) * field;
                        visit.pump_bloch = unit_bloch(field);
                    }
                    visit.pump_path = label;
                    pump_out[out_port("out")] = field;
                    pump_label[out_port("out")] = label;
                    break;
                }
                const std::string path = in_paths[0] ? *in_paths[0] : fresh(out_port("in"));
                const bool sink = c.kind == ComponentKind::Smf && scene.link_from({id, "out"}) == nullptr;
                if (sink) {
                    visit.terminal = static_cast<int>(sinks.size());
                    sinks.push_back({id, path, false, {}});
                    break;
                }
                photon_out[out_port("out")] = path;
                visit.step = static_cast<int>(cs.steps.size());
                cs.steps.push_back({id, c.kind, {path}, ModeUnitary(ModeRegistry{}, Eigen::MatrixXcd(0, 0))});
                if (plate) {
                    Jones j = plate_jones(c);
                    builders.push_back([path, j](const ModeRegistry &reg) {
                        std::array<std::size_t, 2> modes{reg.index(path, Pol::H), reg.index(path, Pol::V)};
                        return ModeUnitary::embed(reg, modes, j);
                    });
                } else {
                    builders.push_back([](const ModeRegistry &reg) { return ModeUnitary::identity(reg); });
                }
                break;
            }
            case ComponentKind::Pbs: {
                optics::PbsSpec spec = pbs_spec(c);
                if (any_pump) {
                    visit.classical = true;
                    Eigen::Vector4cd in = Eigen::Vector4cd::Zero();
                    in.head<2>() = in_fields[0].value_or(Eigen::Vector2cd::Zero());
                    in.tail<2>() = in_fields[1].value_or(Eigen::Vector2cd::Zero());
                    Eigen::Vector4cd out = optics::pbs_port_matrix(spec) * in;
                    pump_out[out_port("out1")] = out.head<2>();
                    pump_out[out_port("out2")] = out.tail<2>();
                    pump_label[out_port("out1")] = label;
                    pump_label[out_port("out2")] = label;
                    visit.pump_path = label;
                    break;
                }
                spec.in1 = in_paths[0] ? *in_paths[0] : fresh(out_port("in1"));
                spec.in2 = in_paths[1] ? *in_paths[1] : fresh(out_port("in2"));
                spec.out1 = spec.in1;
                spec.out2 = spec.in2;
                photon_out[out_port("out1")] = spec.out1;
                photon_out[out_port("out2")] = spec.out2;
                visit.step = static_cast<int>(cs.steps.size());
                cs.steps.push_back(
                    {id, c.kind, {spec.in1, spec.in2}, ModeUnitary(ModeRegistry{}, Eigen::MatrixXcd(0, 0))});
                builders.push_back([spec](const ModeRegistry &reg) { return optics::pbs_mode_unitary(spec, reg); });
                break;
            }
            case ComponentKind::Apd: {
                if (any_pump) {
                    throw Error(ErrorCode::Validation, "pump light reaches detector '" + id + "'");
                }
                const std::string path = in_paths[0] ? *in_paths[0] : fresh(out_port("in"));
                if (std::find(scene.detectors.begin(), scene.detectors.end(), id) != scene.detectors.end()) {
                    detector_paths[id] = path;
                } else {
                    // An unlisted APD is a beam dump.
                    visit.terminal = static_cast<int>(sinks.size());
                    sinks.push_back({id, path, false, {}});
                }
                break;
            }
        }

        for (const auto &port : output_ports(c.kind)) {
            auto it = photon_out.find(out_port(port));
            if (it != photon_out.end() && scene.link_from({id, port}) == nullptr) {
                cs.dangling.emplace_back(out_port(port), it->second);
            }
        }
        cs.schedule.push_back(std::move(visit));
    }

    // Detectors first, in declaration order, then sinks.
    std::map<std::string, int> terminal_index;
    for (const auto &id : scene.detectors) {
        const auto &p = std::get<ApdParams>(scene.at(id).params);
        terminal_index[id] = static_cast<int>(cs.terminals.size());
        cs.terminals.push_back({id, detector_paths.at(id), true, p.spec()});
    }
    const int offset = static_cast<int>(cs.terminals.size());
    cs.terminals.insert(cs.terminals.end(), sinks.begin(), sinks.end());
    for (auto &v : cs.schedule) {
        if (v.terminal >= 0) {
            v.terminal += offset;
        } else if (auto it = terminal_index.find(v.component); it != terminal_index.end()) {
            v.terminal = it->second;
        }
    }

    for (std::size_t i = 0; i < cs.emitters.size(); ++i) {
        cs.emitters[i].state = embed_state(local_emissions[i], registry);
    }
    for (std::size_t i = 0; i < cs.steps.size(); ++i) {
        cs.steps[i].unitary = builders[i](registry);
    }
    return cs;
}

FockState run_steps(const FockState &state, const std::vector<CompiledStep> &steps, std::size_t begin,
                    std::size_t end) {
    FockState out = state;
    for (std::size_t i = begin; i < end && i < steps.size(); ++i) {
        if (!steps[i].is_identity()) {
            out = apply_mode_unitary(out, steps[i].unitary);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Exact propagation
// ---------------------------------------------------------------------------

ExactResult propagate_exact(const Scene &scene) {
    ExactResult result;
    result.compiled = compile_scene(scene);
    const CompiledScene &cs = result.compiled;

    std::vector<std::size_t> stochastic;
    for (std::size_t i = 0; i < cs.emitters.size(); ++i) {
        if (cs.emitters[i].stochastic) {
            stochastic.push_back(i);
        }
    }

    const std::size_t combos = std::size_t{1} << stochastic.size();
    for (std::size_t mask = 0; mask < combos; ++mask) {
        Branch branch;
        branch.fired.assign(cs.emitters.size(), true);
        double probability = 1.0;
        for (std::size_t k = 0; k < stochastic.size(); ++k) {
            const double p = cs.emitters[stochastic[k]].probability;
            const bool fired = ((mask >> k) & 1U) != 0;
            branch.fired[stochastic[k]] = fired;
            probability *= fired ? p : 1.0 - p;
        }
        if (probability <= 0.0) {
            continue;
        }
        branch.probability = probability;

        FockState state = FockState::vacuum(cs.registry);
        for (std::size_t i = 0; i < cs.emitters.size(); ++i) {
            if (branch.fired[i]) {
                state = product(state, cs.emitters[i].state);
            }
        }
        branch.initial = state;

        const int index = static_cast<int>(result.branches.size());
        auto emit = [&](EventBody body) { result.trace.events.push_back({0, index, std::move(body)}); };

        for (const auto &visit : cs.schedule) {
            if (visit.kind == ComponentKind::Laser && visit.classical) {
                // Photon count 0 marks the classical pump beam.
                const auto &laser = scene.at(visit.component);
                if (std::find(scene.sources.begin(), scene.sources.end(), visit.component) != scene.sources.end()) {
                    emit(PhotonEmitted{visit.component, visit.pump_path, 0,
                                       std::get<LaserParams>(laser.params).polarization});
                }
            }
            for (const auto &in : visit.incoming) {
                const bool lit = visit.classical || (visit.kind == ComponentKind::Bbo)
                                     ? in.pump_power > kPresent
                                     : path_probability(state, in.path) > kPresent;
                if (lit) {
                    emit(SegmentTraversed{in.link, in.path, in.nominal_duration_ms});
                }
            }
            if (visit.emitter >= 0 && branch.fired[static_cast<std::size_t>(visit.emitter)]) {
                const Emitter &e = cs.emitters[static_cast<std::size_t>(visit.emitter)];
                for (const auto &path : e.paths) {
                    const auto &reg = cs.registry;
                    std::pair modes{reg.index(path, Pol::H), reg.index(path, Pol::V)};
                    int photons = photons_on(e.state.terms().begin()->first, modes);
                    emit(PhotonEmitted{e.component, path, photons, pure_polarization(e.state, path)});
                }
            }
            if (visit.step >= 0) {
                const CompiledStep &step = cs.steps[static_cast<std::size_t>(visit.step)];
                if (!step.is_identity()) {
                    state = apply_mode_unitary(state, step.unitary);
                }
                if (step.is_plate() && path_probability(state, step.paths[0]) > kPresent) {
                    if (auto psi = pure_polarization(state, step.paths[0])) {
                        PlateCrossed pc{step.component, step.paths[0], bloch_from_state(*psi)};
                        branch.plates.push_back(pc);
                        emit(pc);
                    }
                }
            }
            if (visit.pump_bloch) {
                PlateCrossed pc{visit.component, visit.pump_path, *visit.pump_bloch};
                branch.plates.push_back(pc);
                emit(pc);
            }
        }

        for (const auto &[port, path] : cs.dangling) {
            if (path_probability(state, path) > 1e-12) {
                throw Error(ErrorCode::DanglingPath, "photons reach unlinked port '" + port + "'");
            }
        }
        for (const auto &path : cs.registry.paths()) {
            if (auto psi = pure_polarization(state, path)) {
                branch.snapshots.emplace(path, *psi);
            }
        }
        branch.final_state = std::move(state);
        result.branches.push_back(std::move(branch));
    }
    return result;
}

double OutcomeDistribution::total() const {
    double t = 0.0;
    for (const auto &[k, p] : patterns) {
        t += p;
    }
    return t;
}

std::string OutcomeDistribution::key(const std::vector<int> &clicks) const {
    return pattern_key_for(detectors, clicks);
}

bool heralded(const CompiledScene &compiled, const std::vector<int> &clicks) {
    if (compiled.herald_groups.empty()) {
        return false;
    }
    for (const auto &[group, members] : compiled.herald_groups) {
        int total = 0;
        for (const auto &m : members) {
            for (std::size_t i = 0; i < clicks.size(); ++i) {
                if (compiled.terminals[i].component == m) {
                    total += clicks[i];
                }
            }
        }
        if (total != 1) {
            return false;
        }
    }
    return true;
}

OutcomeDistribution outcome_distribution(const ExactResult &result) {
    const CompiledScene &cs = result.compiled;
    OutcomeDistribution dist;
    dist.detectors = detector_names(cs);
    const std::size_t nd = dist.detectors.size();
    std::vector<std::pair<std::size_t, std::size_t>> modes;
    for (std::size_t i = 0; i < nd; ++i) {
        const auto &path = cs.terminals[i].path;
        modes.emplace_back(cs.registry.index(path, Pol::H), cs.registry.index(path, Pol::V));
    }

    std::map<std::vector<int>, double> photon_patterns;
    for (const auto &branch : result.branches) {
        for (const auto &[occ, amp] : branch.final_state.terms()) {
            std::vector<int> photons(nd);
            for (std::size_t i = 0; i < nd; ++i) {
                photons[i] = photons_on(occ, modes[i]);
            }
            photon_patterns[photons] += branch.probability * std::norm(amp);
        }
    }

    std::map<std::pair<std::size_t, int>, std::vector<double>> cache;
    for (const auto &[photons, weight] : photon_patterns) {
        std::map<std::vector<int>, double> partial{{{}, weight}};
        for (std::size_t i = 0; i < nd; ++i) {
            auto key = std::pair{i, photons[i]};
            auto it = cache.find(key);
            if (it == cache.end()) {
                it = cache.emplace(key, optics::click_distribution(cs.terminals[i].spec, photons[i])).first;
            }
            std::map<std::vector<int>, double> next;
            for (const auto &[prefix, p] : partial) {
                for (std::size_t k = 0; k < it->second.size(); ++k) {
                    if (it->second[k] == 0.0) {
                        continue;
                    }
                    auto extended = prefix;
                    extended.push_back(static_cast<int>(k));
                    next[extended] += p * it->second[k];
                }
            }
            partial = std::move(next);
        }
        for (const auto &[clicks, p] : partial) {
            dist.patterns[clicks] += p;
        }
    }

    if (!cs.herald_groups.empty()) {
        double h = 0.0;
        for (const auto &[clicks, p] : dist.patterns) {
            if (heralded(cs, clicks)) {
                h += p;
            }
        }
        dist.herald_probability = h;
    }
    return dist;
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

ShotSampler::ShotSampler(const ExactResult &exact, std::uint64_t seed) : exact_(exact), seed_(seed) {
    const CompiledScene &cs = exact_.compiled;
    double acc = 0.0;
    for (const auto &b : exact_.branches) {
        acc += b.probability;
        branch_cdf_.push_back(acc);

        Cumulative c;
        double t = 0.0;
        for (const auto &[occ, amp] : b.final_state.terms()) {
            t += std::norm(amp);
            c.occupations.push_back(&occ);
            c.cdf.push_back(t);
        }
        term_cdf_.push_back(std::move(c));
    }
    for (const auto &t : cs.terminals) {
        terminal_modes_.emplace_back(cs.registry.index(t.path, Pol::H), cs.registry.index(t.path, Pol::V));
    }
    detector_names_ = detector_names(cs);
    branch_events_.resize(exact_.branches.size());
    for (const auto &e : exact_.trace.events) {
        branch_events_[static_cast<std::size_t>(e.branch)].push_back(e);
    }
}

namespace {

std::size_t pick(const std::vector<double> &cdf, double u) {
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u * cdf.back());
    return std::min(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

}  // namespace

ShotOutcome ShotSampler::sample(std::uint64_t shot) const {
    const CompiledScene &cs = exact_.compiled;
    Rng rng(seed_, shot);
    ShotOutcome out;
    out.shot = shot;
    const std::size_t b = pick(branch_cdf_, rng.uniform());
    out.branch = static_cast<int>(b);
    const Cumulative &terms = term_cdf_[b];
    out.occupation = terms.occupations[pick(terms.cdf, rng.uniform())];
    out.clicks.reserve(cs.terminals.size());
    for (std::size_t i = 0; i < cs.terminals.size(); ++i) {
        const int photons = photons_on(*out.occupation, terminal_modes_[i]);
        if (cs.terminals[i].detector) {
            out.clicks.push_back(optics::detect(cs.terminals[i].spec, photons, rng));
        } else {
            out.delivered.push_back(photons);
        }
    }
    if (!cs.herald_groups.empty()) {
        out.herald = heralded(cs, out.clicks);
    }
    return out;
}

std::string ShotSampler::pattern_key(const std::vector<int> &clicks) const {
    return pattern_key_for(detector_names_, clicks);
}

std::vector<TraceEvent> ShotSampler::events(const ShotOutcome &outcome) const {
    std::vector<TraceEvent> events;
    for (const auto &e : branch_events_[static_cast<std::size_t>(outcome.branch)]) {
        events.push_back({outcome.shot, -1, e.body});
    }
    const auto &terminals = exact_.compiled.terminals;
    for (std::size_t i = 0; i < outcome.clicks.size(); ++i) {
        if (outcome.clicks[i] > 0) {
            events.push_back({outcome.shot, -1, Detection{terminals[i].component, outcome.clicks[i]}});
        }
    }
    if (outcome.herald) {
        events.push_back({outcome.shot, -1, Herald{*outcome.herald, pattern_key(outcome.clicks)}});
    }
    return events;
}

void tally(measure::CountsTable &counts, const ShotSampler &sampler, const ShotOutcome &outcome) {
    const auto &terminals = sampler.exact().compiled.terminals;
    ++counts.shots;
    for (std::size_t i = 0; i < outcome.clicks.size(); ++i) {
        counts.per_detector[terminals[i].component] += static_cast<std::uint64_t>(outcome.clicks[i]);
    }
    ++counts.coincidences[sampler.pattern_key(outcome.clicks)];
    if (outcome.herald) {
        counts.heralds = counts.heralds.value_or(0) + (*outcome.herald ? 1 : 0);
    }
}

measure::CountsTable empty_counts(const Scene &scene, const CompiledScene &compiled, std::uint64_t seed) {
    measure::CountsTable counts;
    counts.seed = seed;
    counts.prng = std::string(Rng::kAlgorithm);
    counts.scene_hash = scene_hash(scene);
    for (const auto &t : compiled.terminals) {
        if (t.detector) {
            counts.per_detector[t.component] = 0;
        }
    }
    if (!compiled.herald_groups.empty()) {
        counts.heralds = 0;
    }
    return counts;
}

SampledResult propagate_sampled(const Scene &scene, std::uint64_t shots, std::uint64_t seed, bool record_trace,
                                std::uint64_t first_shot) {
    if (shots == 0) {
        throw Error(ErrorCode::Validation, "shots must be at least 1");
    }
    ExactResult exact = propagate_exact(scene);
    ShotSampler sampler(exact, seed);
    SampledResult result;
    result.counts = empty_counts(scene, exact.compiled, seed);
    // Tally by click vector first; keys are built once per distinct pattern.
    std::map<std::vector<int>, std::uint64_t> patterns;
    std::uint64_t heralds = 0;
    for (std::uint64_t k = 0; k < shots; ++k) {
        ShotOutcome outcome = sampler.sample(first_shot + k);
        ++patterns[outcome.clicks];
        heralds += outcome.herald.value_or(false) ? 1 : 0;
        if (record_trace) {
            auto events = sampler.events(outcome);
            result.trace.events.insert(result.trace.events.end(), events.begin(), events.end());
        }
    }
    const auto &terminals = exact.compiled.terminals;
    result.counts.shots = shots;
    for (const auto &[clicks, n] : patterns) {
        for (std::size_t i = 0; i < clicks.size(); ++i) {
            result.counts.per_detector[terminals[i].component] += n * static_cast<std::uint64_t>(clicks[i]);
        }
        result.counts.coincidences[sampler.pattern_key(clicks)] += n;
    }
    if (result.counts.heralds) {
        result.counts.heralds = heralds;
    }
    return result;
}

}  // namespace qbench::bench
