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

#include <array>
#include <cmath>

#include "qbench/core/error.h"
#include "qbench/optics/optics.h"

namespace qbench::optics {

namespace {

Eigen::Matrix4cd per_port(const Jones &j) {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m.block<2, 2>(0, 0) = j;
    m.block<2, 2>(2, 2) = j;
    return m;
}

}  // namespace

Eigen::Matrix4cd pbs_port_matrix(const PbsSpec &spec) {
    if (std::abs(std::abs(spec.reflection_phase) - 1.0) > 1e-12) {
        throw Error(ErrorCode::Validation, "PBS reflection phase must have unit modulus");
    }
    const complex r = spec.reflection_phase;
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = 1.0;  // in1 H -> out1 H
    m(3, 1) = r;    // in1 V -> out2 V
    m(2, 2) = 1.0;  // in2 H -> out2 H
    m(1, 3) = r;    // in2 V -> out1 V
    if (spec.basis == PbsBasis::DA) {
        Eigen::Matrix4cd w = per_port(jones_hwp(kPi / 8.0));
        m = w * m * w;
    }
    if (spec.angle != 0.0) {
        Eigen::Matrix2cd rot;
        rot << std::cos(spec.angle), -std::sin(spec.angle), std::sin(spec.angle), std::cos(spec.angle);
        m = per_port(rot) * m * per_port(rot.adjoint());
    }
    return m;
}

ModeUnitary pbs_mode_unitary(const PbsSpec &spec, const ModeRegistry &registry) {
    const std::array<std::size_t, 4> in{registry.index(spec.in1, Pol::H), registry.index(spec.in1, Pol::V),
                                        registry.index(spec.in2, Pol::H), registry.index(spec.in2, Pol::V)};
    const std::array<std::size_t, 4> out{registry.index(spec.out1, Pol::H), registry.index(spec.out1, Pol::V),
                                         registry.index(spec.out2, Pol::H), registry.index(spec.out2, Pol::V)};
    if (spec.in1 == spec.in2 || spec.out1 == spec.out2) {
        throw Error(ErrorCode::Registry, "PBS ports must sit on distinct paths");
    }
    Eigen::Matrix4cd local = pbs_port_matrix(spec);
    auto m = static_cast<Eigen::Index>(registry.size());
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(m, m);

    bool in_place = spec.out1 == spec.in1 && spec.out2 == spec.in2;
    bool disjoint = spec.out1 != spec.in1 && spec.out1 != spec.in2 && spec.out2 != spec.in1 && spec.out2 != spec.in2;
    if (!in_place && !disjoint) {
        throw Error(ErrorCode::Registry, "PBS output paths must equal or avoid its input paths");
    }
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            if (in_place) {
                u(out[a], in[b]) = local(a, b);
            } else {
                // Swap-style embedding keeps the full matrix unitary; the
                // output paths are expected to be empty on entry.
                u(out[a], in[b]) = local(a, b);
                u(in[b], out[a]) = std::conj(local(a, b));
                u(in[a], in[b]) = 0.0;
                u(out[a], out[b]) = 0.0;
            }
        }
    }
    return ModeUnitary(registry, std::move(u));
}

}  // namespace qbench::optics
