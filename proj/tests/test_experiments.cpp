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


#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracle/oracle.h"
#include "qbench/core/error.h"
#include "qbench/experiments/experiments.h"

namespace qbench::experiments {
namespace {

using optics::BellState;

const double kS = 1.0 / std::sqrt(2.0);
const double kDeg = kPi / 180.0;

PolarizationState label(const char *l) { return PolarizationState::from_label(l); }
PolarizationState from(const oracle::Vec2 &v) { return PolarizationState::normalized(v(0), v(1)); }

template <typename F>
ErrorCode code_of(F &&f) {
    try {
        f();
    } catch (const Error &e) {
        return e.code();
    }
    ADD_FAILURE() << "no qbench::Error thrown";
    return ErrorCode::Configuration;
}

Eigen::Matrix4cd kron(const Eigen::Matrix2cd &a, const Eigen::Matrix2cd &b) {
    Eigen::Matrix4cd k;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            k.block(2 * i, 2 * j, 2, 2) = a(i, j) * b;
        }
    }
    return k;
}

// ---------------------------------------------------------------------------
// Heralded photon
// ---------------------------------------------------------------------------

TEST(Heralded, RateIsBinomial) {
    const std::uint64_t n = 100000;
    const auto r = run_heralded(n, 21);
    const double p = 0.05;
    EXPECT_NEAR(r.pair_probability, p, 1e-15);
    EXPECT_NEAR(static_cast<double>(r.counts.clicks("herald")), n * p, 5 * std::sqrt(n * p * (1 - p)));
    EXPECT_EQ(r.unmatched_heralds, 0u);
    ASSERT_TRUE(r.signal_state.has_value());
    EXPECT_TRUE(equal_up_to_phase(*r.signal_state, label("H"), 1e-14));
}

TEST(Heralded, HorizontalPumpNeverHeralds) {
    HeraldedConfig c;
    c.pump_hwp_degrees = 45.0;  // V from the pump PBS turned to H
    const auto r = run_heralded(20000, 3, c);
    EXPECT_EQ(r.counts.clicks("herald"), 0u);
    EXPECT_EQ(r.herald_rate, 0.0);
}

TEST(Heralded, LossyHeraldStillMatches) {
    HeraldedConfig c;
    c.herald_efficiency = 0.5;
    const std::uint64_t n = 100000;
    const auto r = run_heralded(n, 8, c);
    const double p = 0.025;
    EXPECT_NEAR(static_cast<double>(r.counts.clicks("herald")), n * p, 5 * std::sqrt(n * p * (1 - p)));
    EXPECT_EQ(r.unmatched_heralds, 0u);
}

// ---------------------------------------------------------------------------
// Single-qubit gate
// ---------------------------------------------------------------------------

TEST(Gate, AllZeroKeepsH) {
    const auto r = run_single_qubit_gate(0, 0, 0, label("H"));
    EXPECT_TRUE(equal_up_to_phase(r.output, label("H"), 1e-14));
    ASSERT_EQ(r.trajectory.size(), 3u);
    for (const auto &b : r.trajectory) {
        EXPECT_NEAR(b.z, 1.0, 1e-14);
    }
}

TEST(Gate, MiddlePlateSwaps) {
    const auto r = run_single_qubit_gate(0, kPi / 4, 0, label("H"));
    EXPECT_TRUE(equal_up_to_phase(r.output, label("V"), 1e-14));
}

TEST(Gate, MatchesOracleWithPhase) {
    std::mt19937_64 gen(12);
    std::uniform_real_distribution<double> ang(0.0, kPi);
    for (int i = 0; i < 100; ++i) {
        const double a = ang(gen), b = ang(gen), c = ang(gen);
        const auto v = oracle::random_ket(gen);
        const auto r = run_single_qubit_gate(a, b, c, from(v));
        const oracle::Vec2 o1 = oracle::qwp(a) * v;
        const oracle::Vec2 o2 = oracle::hwp(b) * o1;
        const oracle::Vec2 o3 = oracle::qwp(c) * o2;
        EXPECT_NEAR((r.output_amplitudes - o3).norm(), 0.0, 1e-12);
        ASSERT_EQ(r.trajectory.size(), 3u);
        const std::array<oracle::Vec2, 3> steps{o1, o2, o3};
        for (int k = 0; k < 3; ++k) {
            const auto e = oracle::bloch(steps[k]);
            EXPECT_NEAR(r.trajectory[k].norm(), 1.0, 1e-12);
            EXPECT_NEAR(r.trajectory[k].x, e(0), 1e-12);
            EXPECT_NEAR(r.trajectory[k].y, e(1), 1e-12);
            EXPECT_NEAR(r.trajectory[k].z, e(2), 1e-12);
        }
    }
}

// ---------------------------------------------------------------------------
// Projective measurement and tomography
// ---------------------------------------------------------------------------

TEST(Projective, IdentityPrepAllH) {
    const auto c = run_projective({}, {0, 0}, 1000, 1);
    EXPECT_EQ(c.clicks("det_h"), 1000u);
    EXPECT_EQ(c.clicks("det_v"), 0u);
}

TEST(Projective, DiagonalPrepHalfHalf) {
    const std::uint64_t n = 100000;
    const auto c = run_projective({0, kPi / 8, 0}, {0, 0}, n, 2);
    EXPECT_NEAR(static_cast<double>(c.clicks("det_h")), n / 2.0, 5 * std::sqrt(n / 4.0));
    EXPECT_EQ(c.clicks("det_h") + c.clicks("det_v"), n);
}

TEST(Projective, MatchingAnalyzerIsDeterministic) {
    const auto c = run_projective({0, kPi / 8, 0}, {0, kPi / 8}, 5000, 3);
    EXPECT_TRUE(c.clicks("det_h") == 0 || c.clicks("det_v") == 0);
    EXPECT_EQ(c.clicks("det_h") + c.clicks("det_v"), 5000u);
}

TEST(Projective, ExactMatchesOracle) {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> ang(0.0, kPi);
    for (int i = 0; i < 50; ++i) {
        const QhqPrep prep{ang(gen), ang(gen), ang(gen)};
        const measure::AnalyzerSetting s{ang(gen), ang(gen)};
        const oracle::Vec2 h(1.0, 0.0);
        const oracle::Vec2 out = oracle::hwp(s.hwp) * oracle::qwp(s.qwp) * oracle::qwp(prep.gamma) *
                                 oracle::hwp(prep.beta) * oracle::qwp(prep.alpha) * h;
        EXPECT_NEAR(projective_h_probability(prep, s), std::norm(out(0)), 1e-12);
    }
}

TEST(Tomography, ExactH) {
    const auto r = run_tomography(label("H"), std::nullopt, 0);
    EXPECT_NEAR(r.fidelity, 1.0, 1e-12);
    EXPECT_TRUE(r.counts.empty());
}

TEST(Tomography, SampledDiagonal) {
    const auto r = run_tomography(label("D"), 1000000, 5);
    EXPECT_GT(r.fidelity, 0.999);
    ASSERT_EQ(r.counts.size(), 3u);
    EXPECT_EQ(r.counts[1].clicks("det_h"), 1000000u);
}

TEST(Tomography, ZeroShotsInsufficient) {
    EXPECT_EQ(code_of([] { run_tomography(label("D"), 0, 5); }), ErrorCode::InsufficientData);
}

// ---------------------------------------------------------------------------
// Entangled source and CHSH
// ---------------------------------------------------------------------------

TEST(Entangled, DiagonalPumpGivesPhiPlus) {
    const auto r = run_entangled_source(90.0, 67.5);
    Eigen::Vector4cd phi;
    phi << kS, 0, 0, kS;
    EXPECT_NEAR(fidelity(r.state, phi), 1.0, 1e-12);
    EXPECT_NEAR(r.concurrence, 1.0, 1e-12);
    EXPECT_NEAR(r.pair_probability, 0.05, 1e-15);
}

TEST(Entangled, HorizontalPumpGivesVV) {
    const auto r = run_entangled_source(90.0, 45.0);
    Eigen::Vector4cd vv;
    vv << 0, 0, 0, 1;
    EXPECT_NEAR(fidelity(r.state, vv), 1.0, 1e-12);
    EXPECT_NEAR(r.concurrence, 0.0, 1e-12);
}

TEST(Entangled, BlockedPumpIsConfigurationError) {
    EXPECT_EQ(code_of([] { run_entangled_source(90.0, 0.0, PolarizationState::from_label("H")); }),
              ErrorCode::Configuration);
}

TEST(Chsh, ExactMaximalViolation) { EXPECT_NEAR(exact_chsh(), 2 * std::sqrt(2.0), 1e-12); }

TEST(Chsh, ExactMatchesCosineLaw) {
    // E(a, b) = cos 2(a - b) for |Phi+> and linear analyzers.
    const double s = exact_chsh(10, 40, 55, 85);
    const auto e = [](double a, double b) { return std::cos(2 * (a - b) * kDeg); };
    EXPECT_NEAR(s, std::abs(e(10, 40) - e(10, 85) + e(55, 40) + e(55, 85)), 1e-12);
}

TEST(Chsh, SampledNearTsirelson) {
    const auto r = run_chsh(100000, 17);
    EXPECT_NEAR(r.s, 2 * std::sqrt(2.0), 0.05);
    std::uint64_t total = 0;
    for (const auto &j : r.joint) {
        total += j.total();
    }
    EXPECT_GE(total, 100000u);
}

// ---------------------------------------------------------------------------
// Heralded C-NOT against the permanent oracle
// ---------------------------------------------------------------------------

oracle::Bell to_oracle(BellState b) { return static_cast<oracle::Bell>(static_cast<int>(b)); }

struct PatternId {
    const char *name;
    int a;
    int b;
};
const std::array<PatternId, 4> kPatterns{{{"D1+D3", 1, 3}, {"D1+D4", 1, 4}, {"D2+D3", 2, 3}, {"D2+D4", 2, 4}}};

const std::array<BellState, 4> kBells{BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus,
                                      BellState::PsiMinus};

TEST(CnotOracle, SuccessProbabilityIsQuarter) {
    const auto u = oracle::cnot_network();
    std::mt19937_64 gen(1);
    for (auto bell : kBells) {
        const auto out = oracle::transfer(oracle::cnot_input(oracle::random_ket(gen), oracle::random_ket(gen),
                                                             to_oracle(bell)),
                                          u);
        double total = 0.0;
        for (const auto &p : kPatterns) {
            const auto o = oracle::cnot_outcome(out, p.a, p.b);
            EXPECT_NEAR(o.leakage, 0.0, 1e-14);
            EXPECT_NEAR(o.purity, 1.0, 1e-12);
            EXPECT_NEAR(o.probability, 0.0625, 1e-12);
            total += o.probability;
        }
        EXPECT_NEAR(total, 0.25, 1e-12);
    }
}

TEST(CnotOracle, LibraryPatternsMatchOracle) {
    const auto u = oracle::cnot_network();
    std::mt19937_64 gen(77);
    for (auto bell : kBells) {
        for (int trial = 0; trial < 5; ++trial) {
            const auto c = oracle::random_ket(gen);
            const auto t = oracle::random_ket(gen);
            const auto out = oracle::transfer(oracle::cnot_input(c, t, to_oracle(bell)), u);
            const auto report = run_heralded_cnot(from(c), from(t), bell);
            EXPECT_NEAR(report.success_probability, 0.25, 1e-10);
            ASSERT_EQ(report.per_pattern.size(), 4u);
            for (const auto &p : kPatterns) {
                const auto o = oracle::cnot_outcome(out, p.a, p.b);
                const auto it = std::find_if(report.per_pattern.begin(), report.per_pattern.end(),
                                             [&](const CnotPattern &x) { return x.pattern == p.name; });
                ASSERT_NE(it, report.per_pattern.end()) << p.name;
                EXPECT_NEAR(it->probability, o.probability, 1e-12) << p.name;
                EXPECT_NEAR(it->purity, 1.0, 1e-12);
                EXPECT_NEAR(oracle::overlap2(it->conditional, o.conditional), 1.0, 1e-12) << p.name;
            }
        }
    }
}

TEST(CnotOracle, FrozenCorrectionsRestoreCnot) {
    // The oracle's own conditional states, corrected by the library table,
    // must equal the ideal C-NOT output.
    const auto u = oracle::cnot_network();
    std::mt19937_64 gen(5);
    for (auto bell : kBells) {
        const auto &table = frozen_corrections(bell);
        ASSERT_EQ(table.size(), 4u);
        for (int trial = 0; trial < 5; ++trial) {
            const auto c = oracle::random_ket(gen);
            const auto t = oracle::random_ket(gen);
            const auto out = oracle::transfer(oracle::cnot_input(c, t, to_oracle(bell)), u);
            for (const auto &p : kPatterns) {
                const auto o = oracle::cnot_outcome(out, p.a, p.b);
                const auto &fix = table.at(p.name);
                const Eigen::Vector4cd corrected =
                    kron(pauli_matrix(fix.control), pauli_matrix(fix.target)) * o.conditional;
                EXPECT_NEAR(oracle::overlap2(corrected, oracle::ideal_cnot(c, t)), 1.0, 1e-12)
                    << bell_state_name(bell) << " " << p.name;
            }
        }
    }
}

TEST(CnotOracle, PauliMatricesMatchOracle) {
    const auto o = oracle::paulis();
    const std::array<Pauli, 4> lib{Pauli::I, Pauli::X, Pauli::Z, Pauli::XZ};
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR((pauli_matrix(lib[i]) - o[i]).norm(), 0.0, 1e-15);
    }
}

TEST(Cnot, DerivedTableEqualsFrozen) {
    for (auto bell : kBells) {
        EXPECT_EQ(derive_correction_table(bell), frozen_corrections(bell)) << bell_state_name(bell);
    }
}

TEST(Cnot, TruthTable) {
    const auto rows = cnot_truth_table();
    ASSERT_EQ(rows.size(), 4u);
    const std::map<std::string, std::string> expected{{"HH", "HH"}, {"HV", "HV"}, {"VH", "VV"}, {"VV", "VH"}};
    for (const auto &r : rows) {
        EXPECT_EQ(r.output, expected.at(r.control + r.target));
        EXPECT_NEAR(r.success_probability, 0.25, 1e-10);
        EXPECT_NEAR(r.fidelity, 1.0, 1e-10);
    }
    const auto csv = truth_table_csv(rows);
    EXPECT_EQ(csv.rfind("control,target,output,success_probability,fidelity\n", 0), 0u);
}

TEST(Cnot, DiagonalControlEntangles) {
    const auto r = run_heralded_cnot(label("D"), label("H"));
    Eigen::Vector4cd phi;
    phi << kS, 0, 0, kS;
    EXPECT_NEAR(fidelity(r.corrected_output, phi), 1.0, 1e-10);
    EXPECT_NEAR(r.success_probability, 0.25, 1e-10);
    EXPECT_TRUE(r.heralded);
}

TEST(Cnot, LinearInControl) {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 5; ++trial) {
        const auto c = oracle::random_ket(gen);
        const auto t = from(oracle::random_ket(gen));
        const auto sup = run_heralded_cnot(from(c), t);
        const auto h = run_heralded_cnot(label("H"), t);
        const auto v = run_heralded_cnot(label("V"), t);
        for (std::size_t k = 0; k < 4; ++k) {
            const Eigen::Vector4cd mix = c(0) * h.per_pattern[k].raw + c(1) * v.per_pattern[k].raw;
            EXPECT_NEAR((sup.per_pattern[k].raw - mix).norm(), 0.0, 1e-10);
        }
    }
}

TEST(Cnot, HeraldingIsInputIndependent) {
    std::mt19937_64 gen(100);
    for (int i = 0; i < 20; ++i) {
        const auto r = run_heralded_cnot(from(oracle::random_ket(gen)), from(oracle::random_ket(gen)));
        EXPECT_NEAR(r.success_probability, 0.25, 1e-10);
        for (const auto &p : r.per_pattern) {
            EXPECT_NEAR(p.fidelity, 1.0, 1e-10);
        }
    }
}

TEST(Cnot, ReportJson) {
    const auto j = cnot_report_to_json(run_heralded_cnot(label("V"), label("H")));
    EXPECT_NEAR(j.at("success_probability").get<double>(), 0.25, 1e-10);
    EXPECT_EQ(j.at("bell_state"), "phi+");
    EXPECT_EQ(j.at("per_pattern").size(), 4u);
}

TEST(TwoQubit, Helpers) {
    EXPECT_EQ(two_qubit_label(product_state(label("V"), label("H"))), "VH");
    EXPECT_EQ(two_qubit_label(product_state(label("D"), label("H"))), "");
    Eigen::Vector4cd phi;
    phi << kS, 0, 0, kS;
    EXPECT_NEAR(concurrence(phi), 1.0, 1e-15);
    EXPECT_NEAR(concurrence(product_state(label("D"), label("R"))), 0.0, 1e-15);
}

}  // namespace
}  // namespace qbench::experiments
