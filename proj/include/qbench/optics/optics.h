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

#ifndef QBENCH_OPTICS_OPTICS_H
#define QBENCH_OPTICS_OPTICS_H

#include <string>
#include <vector>

#include "qbench/core/fock.h"
#include "qbench/core/polarization.h"
#include "qbench/core/rng.h"

namespace qbench::optics {

// ---------------------------------------------------------------------------
// Waveplates
//
// A retarder of retardance d with fast axis at angle t acts as
//   R(t) diag(e^{i d/2}, e^{-i d/2}) R(-t),   R(t) = [[cos t, -sin t], [sin t, cos t]].
// The half-wave matrix drops the global factor i so that it is the real
// reflection [[cos 2t, sin 2t], [sin 2t, -cos 2t]].
// ---------------------------------------------------------------------------

Jones jones_waveplate(double retardance, double theta);
Jones jones_hwp(double theta);
Jones jones_qwp(double theta);

struct WaveplateSpec {
    enum class Kind { Half, Quarter, General };
    Kind kind = Kind::Half;
    double retardance = kPi;  // read only for Kind::General
    double theta = 0.0;       // fast-axis angle, radians

    Jones jones() const;
};

/// Gate realized by plates QWP(alpha), HWP(beta), QWP(gamma) crossed in
/// that order: QWP(gamma) * HWP(beta) * QWP(alpha).
Jones qhq_unitary(double alpha, double beta, double gamma);

struct QhqAngles {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    /// distance_up_to_phase(target, qhq_unitary(alpha, beta, gamma)).
    double residual = 0.0;
};

/// Plate angles in [0, pi) reproducing `target` up to global phase.
/// Multi-start Levenberg-Marquardt on the phase-aligned residual.
/// Throws Validation if `target` is not unitary within 1e-10.
QhqAngles qhq_decompose(const Jones &target);

// ---------------------------------------------------------------------------
// Polarizing beam splitter
// ---------------------------------------------------------------------------

enum class PbsBasis { HV, DA };

struct PbsSpec {
    PbsBasis basis = PbsBasis::HV;
    std::string in1;
    std::string in2;
    std::string out1;
    std::string out2;
    complex reflection_phase{0.0, 1.0};
    /// Rotation of the whole splitter about the beam axis, radians.
    double angle = 0.0;
};

/// 4x4 port matrix, columns (in1 H, in1 V, in2 H, in2 V), rows
/// (out1 H, out1 V, out2 H, out2 V). In the HV basis H is transmitted
/// (in_k -> out_k) and V is reflected (in1 -> out2, in2 -> out1) with the
/// reflection phase. The DA basis conjugates every port by HWP(22.5 deg).
Eigen::Matrix4cd pbs_port_matrix(const PbsSpec &spec);

/// Embeds the port matrix into `registry`. Output paths either coincide with
/// the input paths (in-place) or are disjoint from them.
ModeUnitary pbs_mode_unitary(const PbsSpec &spec, const ModeRegistry &registry);

// ---------------------------------------------------------------------------
// Photon-pair sources
// ---------------------------------------------------------------------------

enum class SpdcGeometry { SingleCrystal, CrossedPair };

struct SpdcSourceSpec {
    SpdcGeometry geometry = SpdcGeometry::SingleCrystal;
    double pump_wavelength = 351e-9;   // meters
    double emission_probability = 0.05;  // per pulse, in (0, 1]
    double relative_phase = 0.0;         // radians, |VV> relative to |HH>

    void validate() const;
};

struct PairEmission {
    /// Per-pulse probability that this pair is emitted.
    double probability = 0.0;
    /// Normalized two-photon state over (signal, idler).
    FockState pair;

    double amplitude_weight() const;
};

/// Type-I down-conversion. A single crystal converts only the V component
/// of the pump into |H,H>; a crossed pair also converts H into |V,V>.
PairEmission spdc_emit(const SpdcSourceSpec &spec, const PolarizationState &pump, const std::string &signal_path,
                       const std::string &idler_path);

enum class BellState { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

std::string bell_state_name(BellState state);
BellState bell_state_from_name(const std::string &name);

/// (|HH> +- |VV>)/sqrt2 or (|HV> +- |VH>)/sqrt2 on (first, second).
FockState bell_pair(BellState state, const std::string &first, const std::string &second);

// ---------------------------------------------------------------------------
// Phase matching
// ---------------------------------------------------------------------------

inline constexpr double kSpeedOfLight = 299792458.0;

struct RefractiveIndexPoint {
    double n_ordinary = 1.0;
    double n_extraordinary = 1.0;
    double omega = 0.0;  // rad/s

    void validate() const;
};

enum class Ray { Ordinary, Extraordinary };

struct PhaseMatchRays {
    Ray pump = Ray::Extraordinary;
    Ray signal = Ray::Ordinary;
    Ray idler = Ray::Ordinary;
};

struct PhaseMatchResult {
    bool matched = false;
    double mismatch = 0.0;  // rad/m
};

/// |n(w3) w3 + n(w2) w2 - n(w1) w1| / c against `tolerance` (rad/m).
/// Throws Validation when w2 + w3 != w1 within relative 1e-9.
PhaseMatchResult phase_match(const RefractiveIndexPoint &pump, const RefractiveIndexPoint &signal,
                             const RefractiveIndexPoint &idler, double tolerance, PhaseMatchRays rays = {});

// ---------------------------------------------------------------------------
// Detectors
// ---------------------------------------------------------------------------

struct DetectorSpec {
    double efficiency = 1.0;
    double dark_count_probability = 0.0;
    bool number_resolving = true;

    void validate() const;
};

/// Clicks for `photons` incident photons: each clicks with probability
/// `efficiency`, plus one dark count with its probability; clipped to {0,1}
/// for non-resolving detectors.
int detect(const DetectorSpec &spec, int photons, Rng &rng);

/// Exact distribution of detect(): element k is P(k clicks).
std::vector<double> click_distribution(const DetectorSpec &spec, int photons);

}  // namespace qbench::optics

#endif
