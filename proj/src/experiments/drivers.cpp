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

#include <algorithm>
#include <cmath>

#include "qbench/core/error.h"
#include "qbench/experiments/experiments.h"

namespace qbench::experiments {

using bench::ComponentKind;
using bench::Scene;

namespace {

void set_plate(Scene &scene, const std::string &id, double radians) {
    scene.find(id)->params = bench::WaveplateParams{Angle::radians(radians)};
}

void set_source(Scene &scene, const std::string &id, const PolarizationState &psi) {
    scene.find(id)->params = bench::PhotonSourceParams{psi};
}

std::size_t detector_index(const bench::CompiledScene &compiled, const std::string &id) {
    for (std::size_t i = 0; i < compiled.terminals.size(); ++i) {
        if (compiled.terminals[i].detector && compiled.terminals[i].component == id) {
            return i;
        }
    }
    throw Error(ErrorCode::Reference, "no detector '" + id + "'");
}

const bench::Branch *fired_branch(const bench::ExactResult &exact, std::size_t emitter) {
    for (const auto &b : exact.branches) {
        if (b.fired[emitter]) {
            return &b;
        }
    }
    return nullptr;
}

}  // namespace

TwoQubit product_state(const PolarizationState &a, const PolarizationState &b) {
    TwoQubit v;
    v << a.alpha() * b.alpha(), a.alpha() * b.beta(), a.beta() * b.alpha(), a.beta() * b.beta();
    return v;
}

double fidelity(const TwoQubit &a, const TwoQubit &b) { return std::min(1.0, std::norm(a.dot(b))); }

double concurrence(const TwoQubit &psi) { return 2.0 * std::abs(psi(0) * psi(3) - psi(1) * psi(2)); }

TwoQubit two_photon_amplitudes(const FockState &state, const std::string &first, const std::string &second) {
    const auto &reg = state.registry();
    const std::array<std::size_t, 4> modes{reg.index(first, Pol::H), reg.index(first, Pol::V),
                                           reg.index(second, Pol::H), reg.index(second, Pol::V)};
    TwoQubit v = TwoQubit::Zero();
    for (const auto &[occ, amp] : state.terms()) {
        int elsewhere = 0;
        for (std::size_t m = 0; m < occ.size(); ++m) {
            if (std::find(modes.begin(), modes.end(), m) == modes.end()) {
                elsewhere += occ[m];
            }
        }
        if (elsewhere != 0 || occ[modes[0]] + occ[modes[1]] != 1 || occ[modes[2]] + occ[modes[3]] != 1) {
            continue;
        }
        const int a = occ[modes[0]] == 1 ? 0 : 1;
        const int b = occ[modes[2]] == 1 ? 0 : 1;
        v(2 * a + b) += amp;
    }
    return v;
}

Eigen::Vector2cd single_photon_amplitudes(const FockState &state, const std::string &path) {
    const auto &reg = state.registry();
    const std::size_t h = reg.index(path, Pol::H);
    const std::size_t v = reg.index(path, Pol::V);
    Eigen::Vector2cd out = Eigen::Vector2cd::Zero();
    for (const auto &[occ, amp] : state.terms()) {
        int total = 0;
        for (auto n : occ) {
            total += n;
        }
        if (total == 1 && occ[h] == 1) {
            out(0) += amp;
        } else if (total == 1 && occ[v] == 1) {
            out(1) += amp;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

Scene heralded_scene(const HeraldedConfig &config) {
    Scene scene = bench::builtin_scene("heralded");
    scene.find("laser")->params = bench::LaserParams{config.laser};
    scene.find("pump_hwp")->params = bench::WaveplateParams{Angle::degrees(config.pump_hwp_degrees)};
    auto &bbo = std::get<bench::BboParams>(scene.find("bbo")->params);
    bbo.emission_probability = config.emission_probability;
    std::get<bench::ApdParams>(scene.find("herald")->params).efficiency = config.herald_efficiency;
    bench::validate_scene(scene);
    return scene;
}

HeraldedReport run_heralded(std::uint64_t shots, std::uint64_t seed, const HeraldedConfig &config) {
    if (shots == 0) {
        throw Error(ErrorCode::Validation, "shots must be at least 1");
    }
    const Scene scene = heralded_scene(config);
    const bench::ExactResult exact = bench::propagate_exact(scene);
    const bench::ShotSampler sampler(exact, seed);
    HeraldedReport report;
    report.counts = bench::empty_counts(scene, exact.compiled, seed);
    report.counts.scene = "heralded";
    const std::size_t herald = detector_index(exact.compiled, "herald");
    const std::size_t fiber = 0;  // the only sink
    for (std::uint64_t k = 0; k < shots; ++k) {
        const auto outcome = sampler.sample(k);
        bench::tally(report.counts, sampler, outcome);
        if (outcome.clicks[herald] > 0 && outcome.delivered.at(fiber) != 1) {
            ++report.unmatched_heralds;
        }
    }
    report.herald_rate = static_cast<double>(report.counts.clicks("herald")) / static_cast<double>(shots);
    if (!exact.compiled.emitters.empty()) {
        report.pair_probability = exact.compiled.emitters[0].probability;
        if (const auto *b = fired_branch(exact, 0)) {
            if (auto it = b->snapshots.find("bbo.signal"); it != b->snapshots.end()) {
                report.signal_state = it->second;
            }
        }
    }
    return report;
}

// ---------------------------------------------------------------------------

Scene single_qubit_gate_scene(double alpha, double beta, double gamma, const PolarizationState &input) {
    Scene scene = bench::builtin_scene("single-qubit-gate");
    set_source(scene, "source", input);
    set_plate(scene, "qwp1", alpha);
    set_plate(scene, "hwp", beta);
    set_plate(scene, "qwp2", gamma);
    return scene;
}

GateReport run_single_qubit_gate(double alpha, double beta, double gamma, const PolarizationState &input) {
    const bench::ExactResult exact = bench::propagate_exact(single_qubit_gate_scene(alpha, beta, gamma, input));
    const bench::Branch &branch = exact.branches.at(0);
    GateReport report;
    report.input = input;
    report.output_amplitudes = single_photon_amplitudes(branch.final_state, "source.out");
    report.output = PolarizationState::normalized(report.output_amplitudes(0), report.output_amplitudes(1));
    for (const auto &p : branch.plates) {
        report.trajectory.push_back(p.bloch);
    }
    return report;
}

// ---------------------------------------------------------------------------

Scene projective_scene(const QhqPrep &prep, const measure::AnalyzerSetting &analysis,
                       const PolarizationState &source) {
    Scene scene = bench::builtin_scene("projective-measurement");
    set_source(scene, "source", source);
    set_plate(scene, "prep_qwp1", prep.alpha);
    set_plate(scene, "prep_hwp", prep.beta);
    set_plate(scene, "prep_qwp2", prep.gamma);
    set_plate(scene, "analysis_qwp", analysis.qwp);
    set_plate(scene, "analysis_hwp", analysis.hwp);
    return scene;
}

measure::CountsTable run_projective(const QhqPrep &prep, const measure::AnalyzerSetting &analysis,
                                    std::uint64_t shots, std::uint64_t seed, const PolarizationState &source,
                                    std::uint64_t first_shot) {
    auto result = bench::propagate_sampled(projective_scene(prep, analysis, source), shots, seed, false, first_shot);
    result.counts.scene = "projective-measurement";
    return result.counts;
}

double projective_h_probability(const QhqPrep &prep, const measure::AnalyzerSetting &analysis,
                                const PolarizationState &source) {
    const auto exact = bench::propagate_exact(projective_scene(prep, analysis, source));
    const auto dist = bench::outcome_distribution(exact);
    const std::size_t h = detector_index(exact.compiled, "det_h");
    double p = 0.0;
    for (const auto &[clicks, prob] : dist.patterns) {
        if (clicks[h] > 0) {
            p += prob;
        }
    }
    return p;
}

TomographyReport run_tomography(const PolarizationState &psi, std::optional<std::uint64_t> shots,
                                std::uint64_t seed) {
    const measure::TomographySettings settings;
    TomographyReport report;
    report.prepared = psi;
    if (!shots) {
        std::array<double, 3> p{};
        for (std::size_t k = 0; k < 3; ++k) {
            p[k] = projective_h_probability({}, settings.settings[k], psi);
        }
        report.rho = measure::tomography_from_probabilities(p, settings);
    } else {
        if (*shots == 0) {
            throw Error(ErrorCode::InsufficientData, "tomography needs at least one shot per setting");
        }
        std::array<measure::CountsTable, 3> counts;
        for (std::size_t k = 0; k < 3; ++k) {
            counts[k] = run_projective({}, settings.settings[k], *shots, seed, psi, k * *shots);
        }
        report.rho = measure::tomography_reconstruct(counts, settings);
        report.counts.assign(counts.begin(), counts.end());
    }
    report.fidelity = qbench::fidelity(report.rho, psi);
    return report;
}

// ---------------------------------------------------------------------------

Scene entangled_scene(double pump_pbs_degrees, double pump_hwp_degrees, const PolarizationState &laser) {
    Scene scene = bench::builtin_scene("entangled-pair");
    scene.find("laser")->params = bench::LaserParams{laser};
    std::get<bench::PbsParams>(scene.find("pump_pbs")->params).angle = Angle::degrees(pump_pbs_degrees);
    scene.find("pump_hwp")->params = bench::WaveplateParams{Angle::degrees(pump_hwp_degrees)};
    return scene;
}

EntangledReport run_entangled_source(double pump_pbs_degrees, double pump_hwp_degrees,
                                     const PolarizationState &laser) {
    const auto exact = bench::propagate_exact(entangled_scene(pump_pbs_degrees, pump_hwp_degrees, laser));
    EntangledReport report;
    report.pump = exact.compiled.pump_fields.at("bbo");
    if (report.pump.squaredNorm() < 1e-15 || exact.compiled.emitters.empty()) {
        throw Error(ErrorCode::Configuration, "no pump light reaches the crystals");
    }
    report.pair_probability = exact.compiled.emitters[0].probability;
    const bench::Branch *b = fired_branch(exact, 0);
    report.state = two_photon_amplitudes(b->final_state, "bbo.signal", "bbo.idler").normalized();
    report.concurrence = concurrence(report.state);
    return report;
}

Scene chsh_scene(double a_degrees, double b_degrees) {
    Scene scene = bench::builtin_scene("entangled-pair");
    std::erase_if(scene.components, [](const bench::ComponentInstance &c) { return c.kind == ComponentKind::Smf; });
    std::erase_if(scene.links, [](const bench::Link &l) { return l.to.component.rfind("fiber", 0) == 0; });
    scene.layout.erase("fiber_signal");
    scene.layout.erase("fiber_idler");

    auto add_arm = [&](const std::string &arm, const std::string &port, double degrees, double y) {
        bench::ApdParams apd;
        bench::PbsParams pbs;
        scene.components.push_back({"hwp_" + arm, ComponentKind::Hwp, bench::WaveplateParams{Angle::degrees(degrees / 2.0)}, 5.0});
        scene.components.push_back({"pbs_" + arm, ComponentKind::Pbs, pbs, 5.0});
        scene.components.push_back({"det_" + arm + "_plus", ComponentKind::Apd, apd, 5.0});
        scene.components.push_back({"det_" + arm + "_minus", ComponentKind::Apd, apd, 5.0});
        scene.links.push_back({{"bbo", port}, {"hwp_" + arm, "in"}});
        scene.links.push_back({{"hwp_" + arm, "out"}, {"pbs_" + arm, "in1"}});
        scene.links.push_back({{"pbs_" + arm, "out1"}, {"det_" + arm + "_plus", "in"}});
        scene.links.push_back({{"pbs_" + arm, "out2"}, {"det_" + arm + "_minus", "in"}});
        scene.detectors.push_back("det_" + arm + "_plus");
        scene.detectors.push_back("det_" + arm + "_minus");
        scene.layout["hwp_" + arm] = {1.4, y};
        scene.layout["pbs_" + arm] = {1.7, y};
        scene.layout["det_" + arm + "_plus"] = {2.0, y};
        scene.layout["det_" + arm + "_minus"] = {1.7, y + (y < 0 ? -0.3 : 0.3)};
    };
    add_arm("a", "signal", a_degrees, -0.3);
    add_arm("b", "idler", b_degrees, 0.3);
    bench::validate_scene(scene);
    return scene;
}

namespace {

struct ArmIndices {
    std::size_t ap, am, bp, bm;
};

ArmIndices arm_indices(const bench::CompiledScene &compiled) {
    return {detector_index(compiled, "det_a_plus"), detector_index(compiled, "det_a_minus"),
            detector_index(compiled, "det_b_plus"), detector_index(compiled, "det_b_minus")};
}

}  // namespace

ChshReport run_chsh(std::uint64_t coincidences, std::uint64_t seed, double a, double b, double a_prime,
                    double b_prime) {
    if (coincidences == 0) {
        throw Error(ErrorCode::InsufficientData, "CHSH needs at least one coincidence per setting");
    }
    ChshReport report;
    report.a_degrees = {a, a, a_prime, a_prime};
    report.b_degrees = {b, b_prime, b, b_prime};
    for (std::size_t s = 0; s < 4; ++s) {
        const auto exact = bench::propagate_exact(chsh_scene(report.a_degrees[s], report.b_degrees[s]));
        const bench::ShotSampler sampler(exact, seed);
        const ArmIndices idx = arm_indices(exact.compiled);
        measure::JointCounts &j = report.joint[s];
        // Settings draw from disjoint shot ranges.
        std::uint64_t shot = static_cast<std::uint64_t>(s) << 40;
        while (j.total() < coincidences) {
            const auto o = sampler.sample(shot++);
            ++report.shots;
            const int na = o.clicks[idx.ap] + o.clicks[idx.am];
            const int nb = o.clicks[idx.bp] + o.clicks[idx.bm];
            if (na != 1 || nb != 1) {
                continue;
            }
            const bool ap = o.clicks[idx.ap] == 1;
            const bool bp = o.clicks[idx.bp] == 1;
            (ap ? (bp ? j.pp : j.pm) : (bp ? j.mp : j.mm))++;
        }
        report.correlations[s] = measure::correlation_E(j);
    }
    const auto &e = report.correlations;
    report.s = measure::chsh_value(e[0], e[1], e[2], e[3]);
    return report;
}

double exact_chsh(double a, double b, double a_prime, double b_prime) {
    const std::array<double, 4> as{a, a, a_prime, a_prime};
    const std::array<double, 4> bs{b, b_prime, b, b_prime};
    std::array<double, 4> e{};
    for (std::size_t s = 0; s < 4; ++s) {
        const auto exact = bench::propagate_exact(chsh_scene(as[s], bs[s]));
        const auto dist = bench::outcome_distribution(exact);
        const ArmIndices idx = arm_indices(exact.compiled);
        double agree = 0.0;
        double total = 0.0;
        for (const auto &[c, p] : dist.patterns) {
            if (c[idx.ap] + c[idx.am] != 1 || c[idx.bp] + c[idx.bm] != 1) {
                continue;
            }
            total += p;
            agree += (c[idx.ap] == c[idx.bp]) ? p : -p;
        }
        e[s] = agree / total;
    }
    return measure::chsh_value(e[0], e[1], e[2], e[3]);
}

}  // namespace qbench::experiments
