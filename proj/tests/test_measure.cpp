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
#include "qbench/measure/counts.h"
#include "qbench/measure/measure.h"

namespace qbench::measure {
namespace {

const double kS = 1.0 / std::sqrt(2.0);

PolarizationState label(const char *l) { return PolarizationState::from_label(l); }

PolarizationState from(const oracle::Vec2 &v) { return PolarizationState::normalized(v(0), v(1)); }

/// P(H port) from the oracle's own plate matrices: HWP after QWP.
double oracle_h_probability(const oracle::Vec2 &psi, double qwp, double hwp) {
    const oracle::Vec2 out = oracle::hwp(hwp) * oracle::qwp(qwp) * psi;
    return std::norm(out(0));
}

TEST(Projective, Examples) {
    EXPECT_DOUBLE_EQ(projective_probability(label("H"), label("H")), 1.0);
    EXPECT_DOUBLE_EQ(projective_probability(label("H"), label("V")), 0.0);
    const PolarizationState minus_i(kS, complex(0, -kS));
    const PolarizationState plus_i(kS, complex(0, kS));
    EXPECT_NEAR(projective_probability(minus_i, plus_i), 0.0, 1e-16);
}

TEST(Analyzer, MatchesOracle) {
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> ang(0.0, kPi);
    for (int i = 0; i < 500; ++i) {
        const auto v = oracle::random_ket(gen);
        const AnalyzerSetting s{ang(gen), ang(gen)};
        EXPECT_NEAR(h_port_probability(from(v), s), oracle_h_probability(v, s.qwp, s.hwp), 1e-13);
        EXPECT_NEAR((analyzer_jones(s) - oracle::hwp(s.hwp) * oracle::qwp(s.qwp)).norm(), 0.0, 1e-14);
        // P(H) = (1 + r . axis) / 2.
        const auto axis = setting_axis(s);
        const auto r = oracle::bloch(v);
        EXPECT_NEAR(h_port_probability(from(v), s), 0.5 * (1 + r(0) * axis.x + r(1) * axis.y + r(2) * axis.z),
                    1e-12);
    }
}

TEST(Analyzer, TomographyAxes) {
    const TomographySettings t;
    const auto z = setting_axis(t.settings[0]);
    const auto x = setting_axis(t.settings[1]);
    const auto y = setting_axis(t.settings[2]);
    EXPECT_NEAR(z.z, 1.0, 1e-14);
    EXPECT_NEAR(x.x, 1.0, 1e-14);
    EXPECT_NEAR(y.y, 1.0, 1e-14);
}

TEST(MeasureShot, HorizontalAlwaysH) {
    Rng rng(5, 0);
    for (int i = 0; i < 1000; ++i) {
        EXPECT_EQ(measure_shot(label("H"), {0, 0}, rng), Port::H);
    }
}

TEST(MeasureShot, DiagonalIsFair) {
    const int n = 100000;
    int h = 0;
    for (int s = 0; s < n; ++s) {
        Rng rng(8, s);
        h += measure_shot(label("D"), {0, 0}, rng) == Port::H ? 1 : 0;
    }
    EXPECT_NEAR(h, n / 2.0, 5 * std::sqrt(n / 4.0));
}

TEST(MeasureShot, DeterministicPorts) {
    // HWP(22.5) alone sends D to H; with the QWP crossed first at 45 degrees D
    // is an eigenstate of the QWP, so the analyzer still reads D on H.
    EXPECT_NEAR(h_port_probability(label("D"), {kPi / 4, kPi / 8}), 1.0, 1e-14);
    // With the QWP at 0 the same HWP reads circular light: R on H, D split.
    EXPECT_NEAR(h_port_probability(label("R"), {0.0, kPi / 8}), 1.0, 1e-14);
    EXPECT_NEAR(h_port_probability(label("D"), {0.0, kPi / 8}), 0.5, 1e-14);
    for (double draw : {0.001, 0.3, 0.999}) {
        EXPECT_EQ(measure_shot(label("D"), {kPi / 4, kPi / 8}, draw), Port::H);
        EXPECT_EQ(measure_shot(label("A"), {kPi / 4, kPi / 8}, draw), Port::V);
    }
}

TEST(Tomography, ExactBasisStates) {
    const TomographySettings t;
    const auto forward = [&](const PolarizationState &psi) {
        std::array<double, 3> p{};
        for (int k = 0; k < 3; ++k) {
            p[k] = oracle_h_probability(psi.vector(), t.settings[k].qwp, t.settings[k].hwp);
        }
        return p;
    };
    const auto h = tomography_from_probabilities(forward(label("H")));
    EXPECT_NEAR((h.matrix() - DensityMatrix2::pure(label("H")).matrix()).norm(), 0.0, 1e-12);
    const auto d = tomography_from_probabilities(forward(label("D")));
    EXPECT_NEAR((d.matrix() - DensityMatrix2::pure(label("D")).matrix()).norm(), 0.0, 1e-12);
}

TEST(Tomography, ExactRandomStates) {
    const TomographySettings t;
    std::mt19937_64 gen(99);
    for (int i = 0; i < 1000; ++i) {
        const auto v = oracle::random_ket(gen);
        std::array<double, 3> p{};
        for (int k = 0; k < 3; ++k) {
            p[k] = oracle_h_probability(v, t.settings[k].qwp, t.settings[k].hwp);
        }
        EXPECT_NEAR(fidelity(tomography_from_probabilities(p), from(v)), 1.0, 1e-10);
    }
}

TEST(Tomography, ClipsUnphysicalFrequencies) {
    // Frequencies outside the Bloch ball are pulled back to a valid state.
    const auto rho = tomography_from_probabilities({1.0, 1.0, 0.5});
    EXPECT_LE(rho.purity(), 1.0 + 1e-12);
    EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-12);
}

TEST(Tomography, DependentAxesRejected) {
    TomographySettings t;
    t.settings[1] = t.settings[0];
    try {
        tomography_from_probabilities({0.5, 0.5, 0.5}, t);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::Validation);
    }
}

TEST(Tomography, EmptyCountsInsufficient) {
    std::array<CountsTable, 3> empty{};
    try {
        tomography_reconstruct(empty);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::InsufficientData);
    }
}

TEST(Tomography, FromCounts) {
    std::array<CountsTable, 3> c{};
    // |D>: z setting 50/50, x setting all H, y setting 50/50.
    const std::array<std::pair<int, int>, 3> hv{{{500, 500}, {1000, 0}, {500, 500}}};
    for (int k = 0; k < 3; ++k) {
        c[k].shots = 1000;
        c[k].per_detector = {{"det_h", hv[k].first}, {"det_v", hv[k].second}};
    }
    EXPECT_NEAR(fidelity(tomography_reconstruct(c), label("D")), 1.0, 1e-12);
}

TEST(Coincidence, OneAndOnlyOne) {
    const std::set<std::string> a{"D1", "D2"};
    const std::set<std::string> b{"D3", "D4"};
    EXPECT_TRUE(coincidence_1ao1({{"D1", 1}, {"D3", 1}}, a, b));
    EXPECT_FALSE(coincidence_1ao1({{"D1", 2}, {"D3", 0}}, a, b));
    EXPECT_FALSE(coincidence_1ao1({{"D1", 1}, {"D2", 1}, {"D3", 1}}, a, b));
    EXPECT_FALSE(coincidence_1ao1({}, a, b));
    try {
        coincidence_1ao1({}, a, {"D2"});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::Validation);
    }
}

TEST(Correlation, PerfectAndEmpty) {
    EXPECT_DOUBLE_EQ(correlation_E({50, 50, 0, 0}), 1.0);
    EXPECT_DOUBLE_EQ(correlation_E({0, 0, 30, 70}), -1.0);
    try {
        correlation_E({});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::InsufficientData);
    }
}

TEST(Correlation, JointCountsParsesPatterns) {
    CountsTable d;
    d.coincidences = {{"ap+bp", 3}, {"bm+am", 4}, {"ap+bm", 5}, {"am+bp", 6}, {"ap+am", 7}, {"none", 8}};
    const auto k = joint_counts(d, "ap", "am", "bp", "bm");
    EXPECT_EQ(k.pp, 3u);
    EXPECT_EQ(k.mm, 4u);
    EXPECT_EQ(k.pm, 5u);
    EXPECT_EQ(k.mp, 6u);
}

// Born-rule correlation of two linear analyzers at a and b (radians).
double e_phi_plus(double a, double b) { return std::cos(2 * (a - b)); }
double e_hh(double a, double b) { return std::cos(2 * a) * std::cos(2 * b); }

TEST(Chsh, CanonicalAngles) {
    const double d = kPi / 180;
    const double a = 0, b = 22.5 * d, ap = 45 * d, bp = 67.5 * d;
    EXPECT_NEAR(chsh_value(e_phi_plus(a, b), e_phi_plus(a, bp), e_phi_plus(ap, b), e_phi_plus(ap, bp)),
                2 * std::sqrt(2.0), 1e-14);
    EXPECT_LE(chsh_value(e_hh(a, b), e_hh(a, bp), e_hh(ap, b), e_hh(ap, bp)), 2.0);
}

TEST(Counts, JsonRoundTripAndCsv) {
    CountsTable c;
    c.shots = 10;
    c.per_detector = {{"D1", 3}, {"D2", 1}};
    c.coincidences = {{"D1", 3}, {"D2", 1}, {"none", 6}};
    c.heralds = 2;
    c.seed = 7;
    c.prng = "splitmix64-ctr/1";
    c.scene = "x";
    c.scene_hash = "00";
    EXPECT_EQ(counts_from_json(counts_to_json(c)), c);
    const auto csv = counts_to_csv(c);
    EXPECT_NE(csv.find("# seed=7\n"), std::string::npos);
    EXPECT_NE(csv.find("detector,clicks\nD1,3\nD2,1\n"), std::string::npos);
    EXPECT_NE(csv.find("coinc:none,6\n"), std::string::npos);
    c.check(1);
    c.coincidences["none"] = 7;
    EXPECT_ANY_THROW(c.check(1));
    EXPECT_ANY_THROW(counts_from_json(nlohmann::json::object()));
}

}  // namespace
}  // namespace qbench::measure
