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
#include <set>

#include "oracle/oracle.h"
#include "qbench/core/angle.h"
#include "qbench/core/error.h"
#include "qbench/core/fock.h"
#include "qbench/core/polarization.h"
#include "qbench/core/rng.h"

namespace qbench {
namespace {

const double kS = 1.0 / std::sqrt(2.0);

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

TEST(Bloch, BasisPoleH) {
    const auto b = bloch_from_state(PolarizationState::from_label("H"));
    EXPECT_EQ(b, (BlochVector{0.0, 0.0, 1.0}));
}

TEST(Bloch, DiagonalOnX) {
    const auto b = bloch_from_state(PolarizationState::from_label("D"));
    EXPECT_NEAR(b.x, 1.0, 1e-15);
    EXPECT_NEAR(b.y, 0.0, 1e-15);
    EXPECT_NEAR(b.z, 0.0, 1e-15);
}

TEST(Bloch, MinusIOnNegativeY) {
    const PolarizationState minus_i(kS, complex(0.0, -kS));
    const auto b = bloch_from_state(minus_i);
    EXPECT_NEAR(b.x, 0.0, 1e-15);
    EXPECT_NEAR(b.y, -1.0, 1e-15);
    EXPECT_NEAR(b.z, 0.0, 1e-15);
    EXPECT_TRUE(equal_up_to_phase(PolarizationState::from_label("L"), minus_i, 1e-15));
}

TEST(Bloch, MatchesOracleAndUnitNorm) {
    std::mt19937_64 gen(11);
    for (int i = 0; i < 2000; ++i) {
        const auto v = oracle::random_ket(gen);
        const PolarizationState psi = PolarizationState::normalized(v(0), v(1));
        const auto b = bloch_from_state(psi);
        const auto o = oracle::bloch(v);
        EXPECT_NEAR(b.x, o(0), 1e-12);
        EXPECT_NEAR(b.y, o(1), 1e-12);
        EXPECT_NEAR(b.z, o(2), 1e-12);
        EXPECT_NEAR(b.norm(), 1.0, 1e-12);
        EXPECT_TRUE(equal_up_to_phase(state_from_bloch(b), psi, 1e-10));
    }
}

TEST(Polarization, LabelsAreOrthonormalPairs) {
    const std::vector<std::pair<const char *, const char *>> pairs{{"H", "V"}, {"D", "A"}, {"R", "L"}};
    for (const auto &[a, b] : pairs) {
        const auto pa = PolarizationState::from_label(a);
        const auto pb = PolarizationState::from_label(b);
        EXPECT_NEAR(std::abs(inner_product(pa, pb)), 0.0, 1e-15) << a << b;
        EXPECT_EQ(pa.exact_label(), std::optional<std::string>(a));
    }
    EXPECT_EQ(code_of([] { PolarizationState::from_label("X"); }), ErrorCode::Validation);
}

TEST(Polarization, RejectsUnnormalized) {
    EXPECT_EQ(code_of([] { PolarizationState(1.0, 1.0); }), ErrorCode::Normalization);
    const auto p = PolarizationState::normalized(3.0, complex(0.0, 4.0));
    EXPECT_NEAR(std::abs(p.alpha()), 0.6, 1e-15);
    EXPECT_NEAR(std::abs(p.beta()), 0.8, 1e-15);
}

TEST(Polarization, InnerProductDH) {
    const auto d = PolarizationState::from_label("D");
    const auto h = PolarizationState::from_label("H");
    EXPECT_NEAR(std::abs(inner_product(d, h) - complex(kS, 0.0)), 0.0, 1e-15);
}

TEST(Polarization, IdentityJones) {
    const auto psi = PolarizationState::normalized(complex(0.3, 0.1), complex(-0.2, 0.9));
    EXPECT_EQ(apply_jones(psi, Jones::Identity()), psi);
}

TEST(Polarization, NonUnitaryJonesRejected) {
    Jones m;
    m << 1, 1, 0, 1;
    EXPECT_EQ(code_of([&] { apply_jones(PolarizationState(), m); }), ErrorCode::Validation);
}

TEST(DensityMatrix, Fidelities) {
    const auto h = PolarizationState::from_label("H");
    EXPECT_DOUBLE_EQ(fidelity(DensityMatrix2::pure(h), h), 1.0);
    std::mt19937_64 gen(3);
    for (int i = 0; i < 20; ++i) {
        const auto v = oracle::random_ket(gen);
        EXPECT_NEAR(fidelity(DensityMatrix2::maximally_mixed(), PolarizationState::normalized(v(0), v(1))), 0.5,
                    1e-15);
    }
}

TEST(DensityMatrix, RejectsInvalid) {
    Eigen::Matrix2cd m;
    m << 1, 0.5, 0, 0;
    EXPECT_EQ(code_of([&] { DensityMatrix2{m}; }), ErrorCode::Validation);
    m << 0.6, 0, 0, 0.6;
    EXPECT_EQ(code_of([&] { DensityMatrix2{m}; }), ErrorCode::Validation);
    m << 1.2, 0, 0, -0.2;
    EXPECT_EQ(code_of([&] { DensityMatrix2{m}; }), ErrorCode::Validation);
}

TEST(DensityMatrix, BlochRoundTripAndPurity) {
    const BlochVector r{0.3, -0.4, 0.5};
    const auto rho = DensityMatrix2::from_bloch(r);
    const auto back = rho.bloch();
    EXPECT_NEAR(back.x, r.x, 1e-15);
    EXPECT_NEAR(back.y, r.y, 1e-15);
    EXPECT_NEAR(back.z, r.z, 1e-15);
    EXPECT_NEAR(rho.purity(), 0.5 * (1.0 + 0.5), 1e-15);
    EXPECT_NEAR(DensityMatrix2::maximally_mixed().purity(), 0.5, 1e-15);
}

TEST(DistanceUpToPhase, IgnoresGlobalPhase) {
    std::mt19937_64 gen(5);
    const auto u = oracle::haar(2, gen);
    EXPECT_NEAR(distance_up_to_phase(u, u * std::exp(complex(0, 1.234))), 0.0, 1e-14);
    EXPECT_NEAR(distance_up_to_phase(u, u), oracle::phase_distance(u, u), 1e-14);
    const auto w = oracle::haar(2, gen);
    EXPECT_NEAR(distance_up_to_phase(u, w), oracle::phase_distance(u, w), 1e-12);
}

TEST(Angle, DegreesAndRadians) {
    EXPECT_DOUBLE_EQ(Angle::degrees(22.5).deg(), 22.5);
    EXPECT_NEAR(Angle::degrees(22.5).rad(), kPi / 8, 1e-16);
    EXPECT_NEAR(Angle::radians(kPi / 4).deg(), 45.0, 1e-13);
}

TEST(Errors, ExitCodes) {
    EXPECT_EQ(exit_code(ErrorCode::Validation), 2);
    EXPECT_EQ(exit_code(ErrorCode::Parse), 2);
    EXPECT_EQ(exit_code(ErrorCode::Reference), 3);
    EXPECT_EQ(exit_code(ErrorCode::InsufficientData), 4);
    EXPECT_EQ(error_code_name(ErrorCode::NotFound), "not_found");
}

TEST(Rng, CounterBasedStreams) {
    Rng a(42, 7);
    Rng b(42, 7);
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(a.next_u64(), b.next_u64());
    }
    EXPECT_NE(Rng(42, 7).next_u64(), Rng(42, 8).next_u64());
    EXPECT_NE(Rng(42, 7).next_u64(), Rng(43, 7).next_u64());
}

TEST(Rng, UniformMoments) {
    Rng r(1, 0);
    const int n = 200000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    // sigma of the mean is sqrt(1/12 / n).
    EXPECT_NEAR(sum / n, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / n));
}

ModeRegistry registry(std::initializer_list<const char *> paths) {
    ModeRegistry r;
    for (const char *p : paths) {
        r.add_path(p);
    }
    return r;
}

TEST(ModeRegistry, OrderAndLimits) {
    auto r = registry({"a", "b"});
    EXPECT_EQ(r.size(), 4u);
    EXPECT_EQ(r.index("b", Pol::V), 3u);
    EXPECT_EQ(code_of([&] { r.add_path("a"); }), ErrorCode::Registry);
    EXPECT_EQ(code_of([&] { r.index("zz", Pol::H); }), ErrorCode::Registry);
    ModeRegistry big;
    for (int i = 0; i < 8; ++i) {
        big.add_path("p" + std::to_string(i));
    }
    EXPECT_EQ(big.size(), kMaxModes);
    EXPECT_EQ(code_of([&] { big.add_path("extra"); }), ErrorCode::Registry);
}

TEST(FockState, Invariants) {
    const auto r = registry({"a"});
    FockState s(r);
    s.add({1, 0}, 1.0);
    EXPECT_ANY_THROW(s.add({1, 1}, 1.0));
    EXPECT_ANY_THROW(s.add({1}, 1.0));
    FockState big(r);
    EXPECT_ANY_THROW(big.add({7, 0}, 1.0));
    FockState zero(r);
    EXPECT_EQ(code_of([&] { zero.renormalize(); }), ErrorCode::ImpossibleOutcome);
}

TEST(ModeUnitary, RejectsNonUnitaryAndWrongSize) {
    const auto r = registry({"a"});
    Eigen::MatrixXcd m(2, 2);
    m << 1, 1, 0, 1;
    EXPECT_EQ(code_of([&] { ModeUnitary(r, m); }), ErrorCode::Validation);
    EXPECT_EQ(code_of([&] { ModeUnitary(r, Eigen::MatrixXcd::Identity(3, 3)); }), ErrorCode::Dimension);
}

TEST(ApplyModeUnitary, IdentityKeepsState) {
    const auto r = registry({"a", "b"});
    FockState s(r);
    s.add({1, 0, 1, 0}, kS);
    s.add({0, 1, 0, 1}, complex(0, kS));
    const auto out = apply_mode_unitary(s, ModeUnitary::identity(r));
    EXPECT_NEAR(std::abs(inner_product(out, s)), 1.0, 1e-15);
}

TEST(ApplyModeUnitary, PermutationMovesPhoton) {
    const auto r = registry({"a", "b"});
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(4, 4);
    p(2, 0) = 1;
    p(3, 1) = 1;
    p(0, 2) = 1;
    p(1, 3) = 1;
    const auto out = apply_mode_unitary(FockState::basis(r, {0, 1, 0, 0}), ModeUnitary(r, p));
    EXPECT_NEAR(std::abs(out.amplitude({0, 0, 0, 1}) - complex(1.0)), 0.0, 1e-15);
}

TEST(ApplyModeUnitary, HongOuMandelDip) {
    // Symmetric 50/50 coupler on the H modes of paths a and b.
    const auto r = registry({"a", "b"});
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(4, 4);
    u(0, 0) = kS;
    u(0, 2) = complex(0, kS);
    u(2, 0) = complex(0, kS);
    u(2, 2) = kS;
    const auto out = apply_mode_unitary(FockState::basis(r, {1, 0, 1, 0}), ModeUnitary(r, u));
    EXPECT_NEAR(std::abs(out.amplitude({1, 0, 1, 0})), 0.0, 1e-15);
    EXPECT_NEAR(std::norm(out.amplitude({2, 0, 0, 0})), 0.5, 1e-15);
    EXPECT_NEAR(std::norm(out.amplitude({0, 0, 2, 0})), 0.5, 1e-15);
}

TEST(ApplyModeUnitary, MatchesPermanentOracle) {
    const auto r = registry({"a", "b", "c"});
    std::mt19937_64 gen(17);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::MatrixXcd u = oracle::haar(6, gen);
        oracle::State in;
        FockState s(r);
        for (const auto &occ : oracle::occupations(6, 3)) {
            std::normal_distribution<double> g;
            if (g(gen) < 0.5) {
                continue;
            }
            const complex a(g(gen), g(gen));
            in[occ] += a;
            s.add(Occupation(occ.begin(), occ.end()), a);
        }
        const double n = std::sqrt(s.norm_squared());
        s.renormalize();
        const auto expected = oracle::transfer(in, u);
        const auto out = apply_mode_unitary(s, ModeUnitary(r, u));
        double total = 0.0;
        for (const auto &[occ, amp] : expected) {
            EXPECT_NEAR(std::abs(out.amplitude(Occupation(occ.begin(), occ.end())) - amp / n), 0.0, 1e-12);
            total += std::norm(amp / n);
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
        EXPECT_NEAR(out.norm_squared(), 1.0, 1e-12);
    }
}

TEST(ModeUnitary, EmbedAndCompose) {
    const auto r = registry({"a", "b"});
    std::mt19937_64 gen(2);
    const Eigen::MatrixXcd l1 = oracle::haar(2, gen);
    const Eigen::MatrixXcd l2 = oracle::haar(2, gen);
    const std::vector<std::size_t> a{0, 1};
    const std::vector<std::size_t> b{3, 2};
    const auto u1 = ModeUnitary::embed(r, a, l1);
    const auto u2 = ModeUnitary::embed(r, b, l2);
    const auto both = u2.after(u1);
    EXPECT_NEAR((both.matrix() - u2.matrix() * u1.matrix()).norm(), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(u2.matrix()(3, 3) - l2(0, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(u2.matrix()(2, 3) - l2(1, 0)), 0.0, 1e-15);
}

TEST(PostSelect, AllMatchingPattern) {
    const auto r = registry({"a"});
    FockState s(r);
    s.add({1, 0}, 0.6);
    s.add({0, 1}, 0.8);
    PostSelectPattern any;
    any.total({0, 1}, 1);
    const auto ps = post_select(s, any);
    EXPECT_NEAR(ps.probability, 1.0, 1e-15);
    EXPECT_NEAR(std::abs(inner_product(ps.conditional, s)), 1.0, 1e-15);
}

TEST(PostSelect, ImpossibleOutcome) {
    const auto r = registry({"a"});
    PostSelectPattern on_v;
    on_v.exactly(1, 1);
    EXPECT_EQ(code_of([&] { post_select(FockState::basis(r, {1, 0}), on_v); }), ErrorCode::ImpossibleOutcome);
    EXPECT_EQ(pattern_probability(FockState::basis(r, {1, 0}), on_v), 0.0);
}

TEST(PostSelect, BellPairFirstPhotonH) {
    const auto r = registry({"a", "b"});
    FockState bell(r);
    bell.add({1, 0, 1, 0}, kS);
    bell.add({0, 1, 0, 1}, kS);
    PostSelectPattern first_h;
    first_h.exactly(0, 1);
    const auto ps = post_select(bell, first_h);
    EXPECT_NEAR(ps.probability, 0.5, 1e-15);
    const std::vector<std::string> drop{"a"};
    const auto second = drop_paths(ps.conditional, drop);
    const auto rho = reduced_polarization(second, "b");
    ASSERT_TRUE(rho.has_value());
    EXPECT_NEAR(fidelity(*rho, PolarizationState::from_label("H")), 1.0, 1e-15);
}

TEST(Fock, TensorAndReducedPolarization) {
    const auto s1 = single_photon(registry({"a"}), "a", PolarizationState::from_label("D"));
    const auto s2 = single_photon(registry({"b"}), "b", PolarizationState::from_label("R"));
    const auto t = tensor(s1, s2);
    EXPECT_EQ(t.photon_number(), 2);
    EXPECT_NEAR(t.norm_squared(), 1.0, 1e-15);
    const auto ra = reduced_polarization(t, "a");
    ASSERT_TRUE(ra.has_value());
    EXPECT_NEAR(fidelity(*ra, PolarizationState::from_label("D")), 1.0, 1e-15);
    EXPECT_EQ(code_of([&] { tensor(s1, s1); }), ErrorCode::Registry);

    FockState bell(registry({"a", "b"}));
    bell.add({1, 0, 1, 0}, kS);
    bell.add({0, 1, 0, 1}, kS);
    const auto mixed = reduced_polarization(bell, "a");
    ASSERT_TRUE(mixed.has_value());
    EXPECT_NEAR(mixed->purity(), 0.5, 1e-15);
    const std::vector<std::string> drop{"a"};
    EXPECT_EQ(code_of([&] { drop_paths(bell, drop); }), ErrorCode::Validation);
}

}  // namespace
}  // namespace qbench
