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

#include "qbench/core/polarization.h"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "qbench/core/error.h"

namespace qbench {

namespace {

constexpr double kStateNormTolerance = 1e-12;
constexpr double kRhoTolerance = 1e-10;

struct NamedState {
    const char *label;
    complex alpha;
    complex beta;
};

std::array<NamedState, 6> named_states() {
    const double h = std::sqrt(0.5);
    return {{
        {"H", {1.0, 0.0}, {0.0, 0.0}},
        {"V", {0.0, 0.0}, {1.0, 0.0}},
        {"D", {h, 0.0}, {h, 0.0}},
        {"A", {h, 0.0}, {-h, 0.0}},
        {"R", {h, 0.0}, {0.0, h}},
        {"L", {h, 0.0}, {0.0, -h}},
    }};
}

}  // namespace

PolarizationState::PolarizationState(complex alpha, complex beta) : alpha_(alpha), beta_(beta) {
    double n = std::norm(alpha) + std::norm(beta);
    if (!(std::abs(n - 1.0) <= kStateNormTolerance)) {
        throw Error(ErrorCode::Normalization,
                    "polarization state not normalized: |alpha|^2 + |beta|^2 = " + std::to_string(n));
    }
}

PolarizationState PolarizationState::normalized(complex alpha, complex beta) {
    double n = std::sqrt(std::norm(alpha) + std::norm(beta));
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw Error(ErrorCode::Normalization, "cannot normalize a zero or non-finite polarization vector");
    }
    return PolarizationState(alpha / n, beta / n);
}

PolarizationState PolarizationState::from_label(std::string_view label) {
    for (const auto &s : named_states()) {
        if (label == s.label) {
            return PolarizationState(s.alpha, s.beta);
        }
    }
    throw Error(ErrorCode::Validation, "unknown polarization label '" + std::string(label) + "'");
}

PolarizationState PolarizationState::linear(double radians) {
    return PolarizationState(std::cos(radians), std::sin(radians));
}

std::optional<std::string> PolarizationState::exact_label() const {
    for (const auto &s : named_states()) {
        if (alpha_ == s.alpha && beta_ == s.beta) {
            return std::string(s.label);
        }
    }
    return std::nullopt;
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

DensityMatrix2::DensityMatrix2(const Eigen::Matrix2cd &rho) : rho_(rho) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kRhoTolerance) {
        throw Error(ErrorCode::Validation, "density matrix is not Hermitian");
    }
    if (std::abs(rho.trace() - complex(1.0)) > kRhoTolerance) {
        throw Error(ErrorCode::Validation, "density matrix trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> eig(rho);
    if (eig.eigenvalues().minCoeff() < -kRhoTolerance) {
        throw Error(ErrorCode::Validation, "density matrix has a negative eigenvalue");
    }
}

DensityMatrix2 DensityMatrix2::pure(const PolarizationState &psi) {
    Eigen::Vector2cd v = psi.vector();
    return DensityMatrix2(v * v.adjoint());
}

DensityMatrix2 DensityMatrix2::maximally_mixed() { return DensityMatrix2(Eigen::Matrix2cd::Identity() * 0.5); }

DensityMatrix2 DensityMatrix2::from_bloch(const BlochVector &r) {
    if (r.norm() > 1.0 + 1e-12) {
        throw Error(ErrorCode::Validation, "Bloch vector lies outside the unit ball");
    }
    Eigen::Matrix2cd rho;
    rho << complex(0.5 * (1.0 + r.z), 0.0), complex(0.5 * r.x, -0.5 * r.y), complex(0.5 * r.x, 0.5 * r.y),
        complex(0.5 * (1.0 - r.z), 0.0);
    return DensityMatrix2(rho);
}

BlochVector DensityMatrix2::bloch() const {
    // rho_10 = (x + i y) / 2 under the alpha* beta convention.
    return {2.0 * rho_(1, 0).real(), 2.0 * rho_(1, 0).imag(), (rho_(0, 0) - rho_(1, 1)).real()};
}

double DensityMatrix2::purity() const { return (rho_ * rho_).trace().real(); }

BlochVector bloch_from_state(const PolarizationState &psi) {
    complex c = std::conj(psi.alpha()) * psi.beta();
    return {2.0 * c.real(), 2.0 * c.imag(), std::norm(psi.alpha()) - std::norm(psi.beta())};
}

PolarizationState state_from_bloch(const BlochVector &r) {
    double n = r.norm();
    if (std::abs(n - 1.0) > 1e-10) {
        throw Error(ErrorCode::Normalization, "Bloch vector of a pure state must have unit norm");
    }
    double z = std::clamp(r.z / n, -1.0, 1.0);
    double theta = std::acos(z);
    double phi = std::atan2(r.y, r.x);
    return PolarizationState::normalized(std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi));
}

bool is_unitary(const Eigen::MatrixXcd &m, double tolerance) {
    if (m.rows() != m.cols()) {
        return false;
    }
    if (m.size() == 0) {
        return true;
    }
    Eigen::MatrixXcd d = m * m.adjoint() - Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    return d.cwiseAbs().maxCoeff() <= tolerance;
}

PolarizationState apply_jones(const PolarizationState &psi, const Jones &jones) {
    if (!is_unitary(jones, 1e-10)) {
        throw Error(ErrorCode::Validation, "Jones matrix is not unitary");
    }
    Eigen::Vector2cd out = jones * psi.vector();
    return PolarizationState::normalized(out(0), out(1));
}

complex inner_product(const PolarizationState &a, const PolarizationState &b) {
    return std::conj(a.alpha()) * b.alpha() + std::conj(a.beta()) * b.beta();
}

double fidelity(const DensityMatrix2 &rho, const PolarizationState &psi) {
    Eigen::Vector2cd v = psi.vector();
    double f = (v.adjoint() * rho.matrix() * v)(0, 0).real();
    return std::clamp(f, 0.0, 1.0);
}

bool equal_up_to_phase(const PolarizationState &a, const PolarizationState &b, double tolerance) {
    return std::abs(std::abs(inner_product(a, b)) - 1.0) <= tolerance;
}

double distance_up_to_phase(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorCode::Dimension, "matrix shapes differ");
    }
    complex overlap = (a.adjoint() * b).trace();
    complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : complex(1.0);
    return (b - phase * a).norm();
}

}  // namespace qbench
