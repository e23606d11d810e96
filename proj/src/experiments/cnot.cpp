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

#include <Eigen/Eigenvalues>
#include <array>
#include <cmath>
#include <sstream>

#include "qbench/core/error.h"
#include "qbench/experiments/experiments.h"

namespace qbench::experiments {

using nlohmann::json;

namespace {

constexpr std::array<Pauli, 4> kPaulis{Pauli::I, Pauli::X, Pauli::Z, Pauli::XZ};

Eigen::Matrix4cd correction_matrix(const Correction &c) {
    const Eigen::Matrix2cd a = pauli_matrix(c.control);
    const Eigen::Matrix2cd b = pauli_matrix(c.target);
    Eigen::Matrix4cd k;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
        }
    }
    return k;
}

std::string path_of(const bench::CompiledScene &compiled, const std::string &component) {
    for (const auto &t : compiled.terminals) {
        if (t.component == component) {
            return t.path;
        }
    }
    throw Error(ErrorCode::Reference, "no terminal '" + component + "'");
}

Correction best_correction(const TwoQubit &conditional, const TwoQubit &ideal) {
    Correction best;
    double best_f = -1.0;
    for (Pauli a : kPaulis) {
        for (Pauli b : kPaulis) {
            const Correction c{a, b};
            const double f = fidelity(ideal, correction_matrix(c) * conditional);
            if (f > best_f + 1e-12) {
                best_f = f;
                best = c;
            }
        }
    }
    return best;
}

json vector_json(const TwoQubit &v) {
    json out = json::array();
    for (int i = 0; i < 4; ++i) {
        out.push_back({v(i).real(), v(i).imag()});
    }
    return out;
}

json state_json(const PolarizationState &psi) {
    return {{"alpha", {psi.alpha().real(), psi.alpha().imag()}}, {"beta", {psi.beta().real(), psi.beta().imag()}}};
}

std::string state_label(const PolarizationState &psi) {
    if (auto l = psi.exact_label()) {
        return *l;
    }
    for (const char *name : {"H", "V", "D", "A", "R", "L"}) {
        const auto ref = PolarizationState::from_label(name);
        if (std::abs(ref.vector().dot(psi.vector())) > 1.0 - 1e-9) {
            return name;
        }
    }
    std::ostringstream out;
    out << "(" << psi.alpha() << "," << psi.beta() << ")";
    return out.str();
}

// Post-selection of one 1AO1 pattern on the exact output.
struct Conditioned {
    double probability = 0.0;
    TwoQubit raw = TwoQubit::Zero();
    double purity = 0.0;
};

Conditioned condition(const FockState &state, const std::array<std::size_t, 2> &fire,
                      const std::vector<std::size_t> &detector_modes_h, const std::string &c_path,
                      const std::string &t_path) {
    const auto &reg = state.registry();
    const std::size_t nd = detector_modes_h.size();
    const std::array<std::size_t, 4> out_modes{reg.index(c_path, Pol::H), reg.index(c_path, Pol::V),
                                               reg.index(t_path, Pol::H), reg.index(t_path, Pol::V)};
    std::map<Occupation, TwoQubit> by_rest;
    Conditioned c;
    for (const auto &[occ, amp] : state.terms()) {
        bool match = true;
        for (std::size_t d = 0; d < nd && match; ++d) {
            const int n = occ[detector_modes_h[d]] + occ[detector_modes_h[d] + 1];
            const int want = (d == fire[0] || d == fire[1]) ? 1 : 0;
            match = n == want;
        }
        if (!match) {
            continue;
        }
        c.probability += std::norm(amp);
        if (occ[out_modes[0]] + occ[out_modes[1]] != 1 || occ[out_modes[2]] + occ[out_modes[3]] != 1) {
            continue;
        }
        Occupation rest = occ;
        for (auto m : out_modes) {
            rest[m] = 0;
        }
        const int a = occ[out_modes[0]] == 1 ? 0 : 1;
        const int b = occ[out_modes[2]] == 1 ? 0 : 1;
        auto [it, inserted] = by_rest.try_emplace(rest, TwoQubit::Zero());
        it->second(2 * a + b) += amp;
    }
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    double best = -1.0;
    for (const auto &[rest, v] : by_rest) {
        rho += v * v.adjoint();
        if (v.squaredNorm() > best) {
            best = v.squaredNorm();
            c.raw = v;
        }
    }
    const double tr = rho.trace().real();
    c.purity = tr > 0.0 ? (rho * rho).trace().real() / (tr * tr) : 0.0;
    return c;
}

}  // namespace

std::string pauli_name(Pauli p) {
    switch (p) {
        case Pauli::I:
            return "I";
        case Pauli::X:
            return "X";
        case Pauli::Z:
            return "Z";
        case Pauli::XZ:
            return "XZ";
    }
    return "?";
}

Eigen::Matrix2cd pauli_matrix(Pauli p) {
    Eigen::Matrix2cd x;
    x << 0, 1, 1, 0;
    Eigen::Matrix2cd z;
    z << 1, 0, 0, -1;
    switch (p) {
        case Pauli::I:
            return Eigen::Matrix2cd::Identity();
        case Pauli::X:
            return x;
        case Pauli::Z:
            return z;
        case Pauli::XZ:
            return x * z;
    }
    return Eigen::Matrix2cd::Identity();
}

TwoQubit ideal_cnot(const PolarizationState &control, const PolarizationState &target) {
    TwoQubit in = product_state(control, target);
    TwoQubit out = in;
    std::swap(out(2), out(3));
    return out;
}

bench::Scene cnot_scene(const PolarizationState &control, const PolarizationState &target, optics::BellState bell) {
    bench::Scene scene = bench::builtin_scene("heralded-cnot");
    scene.find("control")->params = bench::PhotonSourceParams{control};
    scene.find("target")->params = bench::PhotonSourceParams{target};
    scene.find("ancilla")->params = bench::BellSourceParams{bell};
    return scene;
}

CnotRunReport run_heralded_cnot(const PolarizationState &control, const PolarizationState &target,
                                optics::BellState bell) {
    return run_heralded_cnot(control, target, bell, frozen_corrections(bell));
}

CnotRunReport run_heralded_cnot(const PolarizationState &control, const PolarizationState &target,
                                optics::BellState bell, const CorrectionTable &corrections) {
    const auto exact = bench::propagate_exact(cnot_scene(control, target, bell));
    const auto &compiled = exact.compiled;
    const FockState &state = exact.branches.at(0).final_state;

    std::vector<std::string> detectors;
    std::vector<std::size_t> modes;
    for (const auto &t : compiled.terminals) {
        if (t.detector) {
            detectors.push_back(t.component);
            modes.push_back(compiled.registry.index(t.path, Pol::H));
        }
    }
    auto index = [&](const std::string &id) {
        return static_cast<std::size_t>(std::find(detectors.begin(), detectors.end(), id) - detectors.begin());
    };
    if (compiled.herald_groups.size() != 2) {
        throw Error(ErrorCode::Configuration, "the C-NOT scene needs exactly two herald groups");
    }
    const std::string c_path = path_of(compiled, "c_out");
    const std::string t_path = path_of(compiled, "t_out");

    CnotRunReport report;
    report.control = control;
    report.target = target;
    report.bell = bell;
    report.ideal_output = ideal_cnot(control, target);

    double best = -1.0;
    for (const auto &da : compiled.herald_groups[0].second) {
        for (const auto &db : compiled.herald_groups[1].second) {
            const Conditioned c = condition(state, {index(da), index(db)}, modes, c_path, t_path);
            CnotPattern p;
            p.pattern = da + "+" + db;
            p.probability = c.probability;
            p.raw = c.raw;
            p.purity = c.purity;
            report.success_probability += c.probability;
            if (c.probability > 1e-15 && c.raw.norm() > 0.0) {
                p.conditional = c.raw.normalized();
                auto it = corrections.find(p.pattern);
                p.correction =
                    it != corrections.end() ? it->second : best_correction(p.conditional, report.ideal_output);
                p.corrected = correction_matrix(p.correction) * p.conditional;
                p.fidelity = fidelity(report.ideal_output, p.corrected);
                if (c.probability > best + 1e-12) {
                    best = c.probability;
                    report.corrected_output = p.corrected;
                }
            } else {
                p.conditional = TwoQubit::Zero();
                p.corrected = TwoQubit::Zero();
            }
            report.per_pattern.push_back(p);
        }
    }
    if (report.success_probability < 1e-15) {
        throw Error(ErrorCode::Configuration, "no one-and-only-one detector pattern can occur");
    }
    report.heralded = true;
    return report;
}

CorrectionTable derive_correction_table(optics::BellState bell) {
    const auto label = [](const char *l) { return PolarizationState::from_label(l); };
    const std::vector<std::pair<PolarizationState, PolarizationState>> probes{
        {label("H"), label("H")}, {label("H"), label("V")}, {label("V"), label("H")}, {label("V"), label("V")},
        {label("D"), label("H")}, {label("D"), label("D")}, {label("R"), label("D")}, {label("D"), label("R")},
        {PolarizationState::normalized({0.6, 0.1}, {0.3, -0.7}), PolarizationState::normalized({-0.2, 0.5}, {0.8, 0.4})},
    };
    std::vector<CnotRunReport> runs;
    for (const auto &[c, t] : probes) {
        runs.push_back(run_heralded_cnot(c, t, bell, CorrectionTable{}));
    }
    CorrectionTable table;
    for (std::size_t k = 0; k < runs.front().per_pattern.size(); ++k) {
        const std::string &pattern = runs.front().per_pattern[k].pattern;
        bool found = false;
        for (Pauli a : kPaulis) {
            for (Pauli b : kPaulis) {
                const Correction c{a, b};
                bool all = true;
                for (const auto &run : runs) {
                    const CnotPattern &p = run.per_pattern[k];
                    if (p.probability < 1e-12) {
                        continue;
                    }
                    all = all && fidelity(run.ideal_output, correction_matrix(c) * p.conditional) > 1.0 - 1e-9;
                }
                if (all && !found) {
                    table[pattern] = c;
                    found = true;
                }
            }
        }
        if (!found) {
            throw Error(ErrorCode::Configuration, "no local Pauli correction for pattern " + pattern);
        }
    }
    return table;
}

std::string two_qubit_label(const TwoQubit &psi, double tolerance) {
    static const std::array<const char *, 4> kLabels{"HH", "HV", "VH", "VV"};
    for (int i = 0; i < 4; ++i) {
        if (std::abs(std::abs(psi(i)) - 1.0) < tolerance) {
            return kLabels[static_cast<std::size_t>(i)];
        }
    }
    return {};
}

std::vector<TruthRow> cnot_truth_table(optics::BellState bell) {
    std::vector<TruthRow> rows;
    for (const char *c : {"H", "V"}) {
        for (const char *t : {"H", "V"}) {
            const auto r = run_heralded_cnot(PolarizationState::from_label(c), PolarizationState::from_label(t), bell);
            double worst = 1.0;
            for (const auto &p : r.per_pattern) {
                if (p.probability > 1e-15) {
                    worst = std::min(worst, p.fidelity);
                }
            }
            rows.push_back({c, t, two_qubit_label(r.corrected_output), r.success_probability, worst});
        }
    }
    return rows;
}

std::string truth_table_csv(const std::vector<TruthRow> &rows) {
    std::ostringstream out;
    out.precision(12);
    out << "control,target,output,success_probability,fidelity\n";
    for (const auto &r : rows) {
        out << r.control << "," << r.target << "," << r.output << "," << r.success_probability << "," << r.fidelity
            << "\n";
    }
    return out.str();
}

json cnot_report_to_json(const CnotRunReport &report) {
    json patterns = json::array();
    for (const auto &p : report.per_pattern) {
        patterns.push_back({{"pattern", p.pattern},
                            {"probability", p.probability},
                            {"raw_amplitudes", vector_json(p.raw)},
                            {"conditional", vector_json(p.conditional)},
                            {"purity", p.purity},
                            {"correction", {pauli_name(p.correction.control), pauli_name(p.correction.target)}},
                            {"corrected", vector_json(p.corrected)},
                            {"fidelity", p.fidelity}});
    }
    return {{"schema_version", "1"},
            {"control", state_json(report.control)},
            {"target", state_json(report.target)},
            {"control_label", state_label(report.control)},
            {"target_label", state_label(report.target)},
            {"bell_state", optics::bell_state_name(report.bell)},
            {"basis", {"HH", "HV", "VH", "VV"}},
            {"success_probability", report.success_probability},
            {"heralded", report.heralded},
            {"per_pattern", patterns},
            {"ideal_output", vector_json(report.ideal_output)},
            {"corrected_output", vector_json(report.corrected_output)}};
}

}  // namespace qbench::experiments
