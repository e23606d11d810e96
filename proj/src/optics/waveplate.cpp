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
#include <limits>

#include "qbench/core/error.h"
#include "qbench/optics/optics.h"

namespace qbench::optics {

namespace {

Eigen::Matrix2d rotation(double t) {
    Eigen::Matrix2d r;
    r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    return r;
}

using Params = Eigen::Vector3d;
using Residual = Eigen::Matrix<double, 8, 1>;

Residual phase_aligned_residual(const Jones &target, const Params &p) {
    Jones v = qhq_unitary(p(0), p(1), p(2));
    complex overlap = (target.adjoint() * v).trace();
    complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : complex(1.0);
    Jones diff = v - phase * target;
    Residual r;
    for (int i = 0; i < 4; ++i) {
        r(2 * i) = diff(i / 2, i % 2).real();
        r(2 * i + 1) = diff(i / 2, i % 2).imag();
    }
    return r;
}

double wrap_pi(double x) {
    double w = std::fmod(x, kPi);
    if (w < 0.0) {
        w += kPi;
    }
    // fmod can land exactly on pi after the shift.
    return w >= kPi ? 0.0 : w;
}

/// Levenberg-Marquardt from one starting point. Returns the final params.
Params refine(const Jones &target, Params p) {
    constexpr int kMaxIterations = 200;
    constexpr double kStep = 1e-6;
    double lambda = 1e-3;
    Residual r = phase_aligned_residual(target, p);
    double cost = r.squaredNorm();
    for (int it = 0; it < kMaxIterations && cost > 1e-26; ++it) {
        Eigen::Matrix<double, 8, 3> jac;
        for (int k = 0; k < 3; ++k) {
            Params hi = p;
            Params lo = p;
            hi(k) += kStep;
            lo(k) -= kStep;
            jac.col(k) = (phase_aligned_residual(target, hi) - phase_aligned_residual(target, lo)) / (2.0 * kStep);
        }
        Eigen::Matrix3d jtj = jac.transpose() * jac;
        Eigen::Vector3d g = jac.transpose() * r;
        bool improved = false;
        for (int attempt = 0; attempt < 12; ++attempt) {
            Eigen::Matrix3d a = jtj;
            a.diagonal().array() += lambda * (jtj.diagonal().array() + 1e-12);
            Params step = a.ldlt().solve(-g);
            Params trial = p + step;
            Residual rt = phase_aligned_residual(target, trial);
            double ct = rt.squaredNorm();
            if (ct < cost) {
                p = trial;
                r = rt;
                cost = ct;
                lambda = std::max(lambda * 0.3, 1e-12);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!improved) {
            break;
        }
    }
    return p;
}

}  // namespace

Jones jones_waveplate(double retardance, double theta) {
    Jones d = Jones::Zero();
    d(0, 0) = std::polar(1.0, retardance / 2.0);
    d(1, 1) = std::polar(1.0, -retardance / 2.0);
    Eigen::Matrix2cd r = rotation(theta).cast<complex>();
    return r * d * r.transpose();
}

Jones jones_hwp(double theta) {
    double c = std::cos(2.0 * theta);
    double s = std::sin(2.0 * theta);
    Jones j;
    j << c, s, s, -c;
    return j;
}

Jones jones_qwp(double theta) { return jones_waveplate(kPi / 2.0, theta); }

Jones WaveplateSpec::jones() const {
    switch (kind) {
        case Kind::Half:
            return jones_hwp(theta);
        case Kind::Quarter:
            return jones_qwp(theta);
        case Kind::General:
            return jones_waveplate(retardance, theta);
    }
    return Jones::Identity();
}

Jones qhq_unitary(double alpha, double beta, double gamma) {
    return jones_qwp(gamma) * jones_hwp(beta) * jones_qwp(alpha);
}

QhqAngles qhq_decompose(const Jones &target) {
    if (!is_unitary(target, 1e-10)) {
        throw Error(ErrorCode::Validation, "cannot decompose a non-unitary matrix into waveplates");
    }
    constexpr int kStarts = 16;
    constexpr double kConverged = 1e-10;
    // Additive-recurrence starting points spread over [0, pi)^3.
    const std::array<double, 3> increments{0.6180339887498949, 0.7548776662466927, 0.5698402909980532};

    QhqAngles best;
    best.residual = std::numeric_limits<double>::infinity();
    for (int s = 0; s < kStarts; ++s) {
        Params start;
        for (int k = 0; k < 3; ++k) {
            start(k) = kPi * std::fmod(0.5 + increments[k] * (s + 1), 1.0);
        }
        Params p = refine(target, start);
        QhqAngles candidate{wrap_pi(p(0)), wrap_pi(p(1)), wrap_pi(p(2)), 0.0};
        candidate.residual =
            distance_up_to_phase(target, qhq_unitary(candidate.alpha, candidate.beta, candidate.gamma));
        if (candidate.residual < best.residual) {
            best = candidate;
        }
        if (best.residual < kConverged) {
            break;
        }
    }
    return best;
}

}  // namespace qbench::optics
