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

#ifndef QBENCH_MEASURE_MEASURE_H
#define QBENCH_MEASURE_MEASURE_H

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>

#include "qbench/core/polarization.h"
#include "qbench/core/rng.h"
#include "qbench/measure/counts.h"

namespace qbench::measure {

/// |<basis|psi>|^2.
double projective_probability(const PolarizationState &psi, const PolarizationState &basis);

enum class Port { H, V };

/// Analysis plates in front of an HV PBS: the QWP is crossed first.
struct AnalyzerSetting {
    double qwp = 0.0;  // radians
    double hwp = 0.0;  // radians

    bool operator==(const AnalyzerSetting &) const = default;
};

/// HWP(hwp) * QWP(qwp).
Jones analyzer_jones(const AnalyzerSetting &setting);

/// Probability that `psi` exits the H port after the analyzer.
double h_port_probability(const PolarizationState &psi, const AnalyzerSetting &setting);

/// Born-samples the port with a uniform draw in [0, 1): H when draw < P(H).
Port measure_shot(const PolarizationState &psi, const AnalyzerSetting &setting, double draw);
Port measure_shot(const PolarizationState &psi, const AnalyzerSetting &setting, Rng &rng);

/// Bloch axis measured by a setting: P(H) = (1 + r . axis) / 2.
BlochVector setting_axis(const AnalyzerSetting &setting);

struct TomographySettings {
    std::array<AnalyzerSetting, 3> settings{
        AnalyzerSetting{0.0, 0.0},
        AnalyzerSetting{kPi / 4.0, kPi / 8.0},
        AnalyzerSetting{0.0, kPi / 8.0},
    };
};

/// Reconstruction from one H-port probability (or frequency) per setting.
/// Throws Validation when the settings' axes are linearly dependent.
DensityMatrix2 tomography_from_probabilities(const std::array<double, 3> &h_probability,
                                             const TomographySettings &settings = {});

/// Reconstruction from three runs, one per setting, each with an H-port and
/// a V-port detector. Throws InsufficientData when a run has no clicks.
DensityMatrix2 tomography_reconstruct(const std::array<CountsTable, 3> &counts, const TomographySettings &settings = {},
                                      const std::string &h_detector = "det_h",
                                      const std::string &v_detector = "det_v");

/// True iff each group's clicks add up to exactly one. Throws Validation on
/// overlapping groups.
bool coincidence_1ao1(const std::map<std::string, int> &clicks, const std::set<std::string> &group_a,
                      const std::set<std::string> &group_b);

/// Joint outcome tallies of a two-arm analyzer; '+' is the H port.
struct JointCounts {
    std::uint64_t pp = 0;
    std::uint64_t mm = 0;
    std::uint64_t pm = 0;
    std::uint64_t mp = 0;

    std::uint64_t total() const { return pp + mm + pm + mp; }
};

/// Two-fold coincidences from a counts table, matching the coincidence
/// patterns "a_plus+b_plus" etc. regardless of detector order.
JointCounts joint_counts(const CountsTable &counts, const std::string &a_plus, const std::string &a_minus,
                         const std::string &b_plus, const std::string &b_minus);

/// (N++ + N-- - N+- - N-+) / N. Throws InsufficientData when empty.
double correlation_E(const JointCounts &counts);

/// |E(a,b) - E(a,b') + E(a',b) + E(a',b')|.
double chsh_value(double e_ab, double e_abp, double e_apb, double e_apbp);

}  // namespace qbench::measure

#endif
