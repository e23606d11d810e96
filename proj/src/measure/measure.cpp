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

#include "qbench/measure/measure.h"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "qbench/core/error.h"
#include "qbench/optics/optics.h"

namespace qbench::measure {

double projective_probability(const PolarizationState &psi, const PolarizationState &basis) {
    return std::clamp(std::norm(inner_product(basis, psi)), 0.0, 1.0);
}

Jones analyzer_jones(const AnalyzerSetting &setting) {
    return optics::jones_hwp(setting.hwp) * optics::jones_qwp(setting.qwp);
}

double h_port_probability(const PolarizationState &psi, const AnalyzerSetting &setting) {
    return std::clamp(std::norm((analyzer_jones(setting) * psi.vector())(0)), 0.0, 1.0);
}

Port measure_shot(const PolarizationState &psi, const AnalyzerSetting &setting, double draw) {
    return draw < h_port_probability(psi, setting) ? Port::H : Port::V;
}

Port measure_shot(const PolarizationState &psi, const AnalyzerSetting &setting, Rng &rng) {
    return measure_shot(psi, setting, rng.uniform());
}

BlochVector setting_axis(const AnalyzerSetting &setting) {
    Eigen::Vector2cd back = analyzer_jones(setting).adjoint() * Eigen::Vector2cd(1.0, 0.0);
    return bloch_from_state(PolarizationState::normalized(back(0), back(1)));
}

DensityMatrix2 tomography_from_probabilities(const std::array<double, 3> &h_probability,
                                             const TomographySettings &settings) {
    Eigen::Matrix3d axes;
    Eigen::Vector3d contrast;
    for (int i = 0; i < 3; ++i) {
        BlochVector a = setting_axis(settings.settings[static_cast<std::size_t>(i)]);
        axes.row(i) << a.x, a.y, a.z;
        contrast(i) = 2.0 * h_probability[static_cast<std::size_t>(i)] - 1.0;
    }
    if (std::abs(axes.determinant()) < 1e-9) {
        throw Error(ErrorCode::Validation, "tomography settings do not span the Bloch sphere");
    }
    Eigen::Vector3d r = axes.partialPivLu().solve(contrast);

    const complex i(0.0, 1.0);
    Eigen::Matrix2cd rho;
    rho << (1.0 + r(2)) / 2.0, (r(0) - i * r(1)) / 2.0, (r(0) + i * r(1)) / 2.0, (1.0 - r(2)) / 2.0;

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> eig(rho);
    Eigen::Vector2d values = eig.eigenvalues();
    if (values.minCoeff() < 0.0) {
        values = values.cwiseMax(0.0);
        values /= values.sum();
        rho = eig.eigenvectors() * values.cast<complex>().asDiagonal() * eig.eigenvectors().adjoint();
        rho = (rho + rho.adjoint().eval()) / 2.0;
    }
    return DensityMatrix2(rho);
}

DensityMatrix2 tomography_reconstruct(const std::array<CountsTable, 3> &counts, const TomographySettings &settings,
                                      const std::string &h_detector, const std::string &v_detector) {
    std::array<double, 3> p{};
    for (std::size_t k = 0; k < 3; ++k) {
        const double nh = static_cast<double>(counts[k].clicks(h_detector));
        const double nv = static_cast<double>(counts[k].clicks(v_detector));
        if (counts[k].shots == 0 || nh + nv == 0.0) {
            throw Error(ErrorCode::InsufficientData, "tomography setting " + std::to_string(k + 1) + " has no counts");
        }
        // (1 + (nh - nv) / (nh + nv)) / 2
        p[k] = nh / (nh + nv);
    }
    return tomography_from_probabilities(p, settings);
}

bool coincidence_1ao1(const std::map<std::string, int> &clicks, const std::set<std::string> &group_a,
                      const std::set<std::string> &group_b) {
    for (const auto &d : group_a) {
        if (group_b.count(d) != 0) {
            throw Error(ErrorCode::Validation, "detector '" + d + "' is in both herald groups");
        }
    }
    auto total = [&](const std::set<std::string> &group) {
        int n = 0;
        for (const auto &d : group) {
            if (auto it = clicks.find(d); it != clicks.end()) {
                n += it->second;
            }
        }
        return n;
    };
    return total(group_a) == 1 && total(group_b) == 1;
}

JointCounts joint_counts(const CountsTable &counts, const std::string &a_plus, const std::string &a_minus,
                         const std::string &b_plus, const std::string &b_minus) {
    JointCounts j;
    for (const auto &[pattern, n] : counts.coincidences) {
        std::set<std::string> parts;
        std::stringstream in(pattern);
        for (std::string part; std::getline(in, part, '+');) {
            parts.insert(part);
        }
        if (parts.size() != 2) {
            continue;
        }
        auto is = [&](const std::string &a, const std::string &b) { return parts.count(a) != 0 && parts.count(b) != 0; };
        if (is(a_plus, b_plus)) {
            j.pp += n;
        } else if (is(a_minus, b_minus)) {
            j.mm += n;
        } else if (is(a_plus, b_minus)) {
            j.pm += n;
        } else if (is(a_minus, b_plus)) {
            j.mp += n;
        }
    }
    return j;
}

double correlation_E(const JointCounts &counts) {
    if (counts.total() == 0) {
        throw Error(ErrorCode::InsufficientData, "no coincidences to correlate");
    }
    const double agree = static_cast<double>(counts.pp + counts.mm);
    const double disagree = static_cast<double>(counts.pm + counts.mp);
    return (agree - disagree) / static_cast<double>(counts.total());
}

double chsh_value(double e_ab, double e_abp, double e_apb, double e_apbp) {
    return std::abs(e_ab - e_abp + e_apb + e_apbp);
}

}  // namespace qbench::measure
