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

#ifndef QBENCH_CORE_POLARIZATION_H
#define QBENCH_CORE_POLARIZATION_H

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <string_view>

namespace qbench {

using complex = std::complex<double>;
using Jones = Eigen::Matrix2cd;

inline constexpr double kPi = 3.14159265358979323846;

/// Single-photon polarization qubit alpha|H> + beta|V>. |H> is the qubit's
/// |0>, |V> its |1>.
class PolarizationState {
   public:
    /// |H>.
    PolarizationState() = default;

    /// Throws Normalization if |alpha|^2 + |beta|^2 is not 1 within 1e-12.
    PolarizationState(complex alpha, complex beta);

    /// Rescales any nonzero pair onto the unit sphere.
    static PolarizationState normalized(complex alpha, complex beta);

    /// H, V, D, A, R (= |+i>), L (= |-i>). Case-sensitive.
    static PolarizationState from_label(std::string_view label);

    /// Linear polarization at `radians` from horizontal.
    static PolarizationState linear(double radians);

    complex alpha() const { return alpha_; }
    complex beta() const { return beta_; }
    Eigen::Vector2cd vector() const { return {alpha_, beta_}; }

    /// Label whose amplitudes match bit-for-bit, if any.
    std::optional<std::string> exact_label() const;

    bool operator==(const PolarizationState &other) const = default;

   private:
    complex alpha_{1.0, 0.0};
    complex beta_{0.0, 0.0};
};

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const;
    bool operator==(const BlochVector &other) const = default;
};

/// Validated 2x2 density operator over {H, V}.
class DensityMatrix2 {
   public:
    /// Throws Validation unless Hermitian, unit trace and positive (1e-10).
    explicit DensityMatrix2(const Eigen::Matrix2cd &rho);

    static DensityMatrix2 pure(const PolarizationState &psi);
    static DensityMatrix2 maximally_mixed();
    /// (I + x sx + y sy + z sz) / 2; requires |r| <= 1 + 1e-12.
    static DensityMatrix2 from_bloch(const BlochVector &r);

    const Eigen::Matrix2cd &matrix() const { return rho_; }
    BlochVector bloch() const;
    double purity() const;

   private:
    Eigen::Matrix2cd rho_;
};

/// (2 Re(a* b), 2 Im(a* b), |a|^2 - |b|^2).
BlochVector bloch_from_state(const PolarizationState &psi);

/// Inverse of bloch_from_state on the unit sphere, with real non-negative alpha.
PolarizationState state_from_bloch(const BlochVector &r);

/// J psi. Throws Validation if J is not unitary within 1e-10.
PolarizationState apply_jones(const PolarizationState &psi, const Jones &jones);

bool is_unitary(const Eigen::MatrixXcd &m, double tolerance);

/// <a|b>.
complex inner_product(const PolarizationState &a, const PolarizationState &b);

/// <psi|rho|psi>, clamped to [0, 1].
double fidelity(const DensityMatrix2 &rho, const PolarizationState &psi);

/// True when |<a|b>| = 1 within `tolerance`.
bool equal_up_to_phase(const PolarizationState &a, const PolarizationState &b, double tolerance);

/// min over phi of ||b - e^{i phi} a||_F.
double distance_up_to_phase(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b);

}  // namespace qbench

#endif
