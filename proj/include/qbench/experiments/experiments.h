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

#ifndef QBENCH_EXPERIMENTS_EXPERIMENTS_H
#define QBENCH_EXPERIMENTS_EXPERIMENTS_H

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "qbench/bench/propagate.h"
#include "qbench/measure/measure.h"

namespace qbench::experiments {

/// Two-qubit amplitudes in the order HH, HV, VH, VV.
using TwoQubit = Eigen::Vector4cd;

TwoQubit product_state(const PolarizationState &a, const PolarizationState &b);
/// |<a|b>|^2 for normalized vectors.
double fidelity(const TwoQubit &a, const TwoQubit &b);
/// 2 |a_HH a_VV - a_HV a_VH| of a normalized pure state.
double concurrence(const TwoQubit &psi);

/// Amplitudes of the terms holding one photon on each of `first` and
/// `second` and nothing elsewhere (unnormalized).
TwoQubit two_photon_amplitudes(const FockState &state, const std::string &first, const std::string &second);

/// Amplitudes (H, V) of the terms holding one photon on `path` and nothing
/// elsewhere (unnormalized, phase kept).
Eigen::Vector2cd single_photon_amplitudes(const FockState &state, const std::string &path);

// ---------------------------------------------------------------------------
// Heralded photon
// ---------------------------------------------------------------------------

struct HeraldedConfig {
    PolarizationState laser = PolarizationState::from_label("V");
    double pump_hwp_degrees = 0.0;
    double emission_probability = 0.05;
    double herald_efficiency = 1.0;
};

struct HeraldedReport {
    measure::CountsTable counts;
    double herald_rate = 0.0;
    /// Exact per-pulse pair probability at the crystal.
    double pair_probability = 0.0;
    /// Polarization of the fiber photon in emitting shots.
    std::optional<PolarizationState> signal_state;
    /// Heralds that did not coincide with exactly one fiber photon.
    std::uint64_t unmatched_heralds = 0;
};

bench::Scene heralded_scene(const HeraldedConfig &config);
HeraldedReport run_heralded(std::uint64_t shots, std::uint64_t seed, const HeraldedConfig &config = {});

// ---------------------------------------------------------------------------
// Single-qubit gate
// ---------------------------------------------------------------------------

struct GateReport {
    PolarizationState input;
    /// Output with the plates' global phase kept.
    Eigen::Vector2cd output_amplitudes;
    PolarizationState output;
    /// Bloch vector after each plate in crossing order.
    std::vector<BlochVector> trajectory;
};

bench::Scene single_qubit_gate_scene(double alpha, double beta, double gamma, const PolarizationState &input);
GateReport run_single_qubit_gate(double alpha, double beta, double gamma, const PolarizationState &input);

// ---------------------------------------------------------------------------
// Projective measurement and tomography
// ---------------------------------------------------------------------------

struct QhqPrep {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

bench::Scene projective_scene(const QhqPrep &prep, const measure::AnalyzerSetting &analysis,
                              const PolarizationState &source = {});

/// Counts on det_h / det_v. `first_shot` offsets the shot counter.
measure::CountsTable run_projective(const QhqPrep &prep, const measure::AnalyzerSetting &analysis,
                                    std::uint64_t shots, std::uint64_t seed, const PolarizationState &source = {},
                                    std::uint64_t first_shot = 0);

/// Exact H-port probability of the projective scene.
double projective_h_probability(const QhqPrep &prep, const measure::AnalyzerSetting &analysis,
                                const PolarizationState &source = {});

struct TomographyReport {
    PolarizationState prepared;
    DensityMatrix2 rho = DensityMatrix2::maximally_mixed();
    double fidelity = 0.0;
    /// Empty in exact mode.
    std::vector<measure::CountsTable> counts;
};

/// Prepares `psi` at the source and runs the three default settings through
/// the projective scene. Exact probabilities when `shots` is empty; setting k
/// uses shots [k * shots, (k + 1) * shots).
TomographyReport run_tomography(const PolarizationState &psi, std::optional<std::uint64_t> shots,
                                std::uint64_t seed);

// ---------------------------------------------------------------------------
// Entangled source and CHSH
// ---------------------------------------------------------------------------

struct EntangledReport {
    Eigen::Vector2cd pump;   // Jones vector at the crystals
    double pair_probability = 0.0;
    TwoQubit state;          // signal, idler
    double concurrence = 0.0;
};

bench::Scene entangled_scene(double pump_pbs_degrees, double pump_hwp_degrees,
                             const PolarizationState &laser = PolarizationState::from_label("V"));

/// Throws Configuration when no pump reaches the crystals.
EntangledReport run_entangled_source(double pump_pbs_degrees, double pump_hwp_degrees,
                                     const PolarizationState &laser = PolarizationState::from_label("V"));

/// Entangled source followed by a HWP at angle/2, an HV PBS and two APDs on
/// each arm, so each arm projects onto linear polarization at its angle.
bench::Scene chsh_scene(double a_degrees, double b_degrees);

struct ChshReport {
    std::array<double, 4> a_degrees{};
    std::array<double, 4> b_degrees{};
    std::array<measure::JointCounts, 4> joint{};
    std::array<double, 4> correlations{};
    double s = 0.0;
    std::uint64_t shots = 0;
};

/// Samples each of the settings (a,b), (a,b'), (a',b), (a',b') until
/// `coincidences` two-fold coincidences are recorded.
ChshReport run_chsh(std::uint64_t coincidences, std::uint64_t seed, double a = 0.0, double b = 22.5,
                    double a_prime = 45.0, double b_prime = 67.5);

/// Exact CHSH value of the same scenes.
double exact_chsh(double a = 0.0, double b = 22.5, double a_prime = 45.0, double b_prime = 67.5);

// ---------------------------------------------------------------------------
// Heralded C-NOT
// ---------------------------------------------------------------------------

enum class Pauli { I, X, Z, XZ };

std::string pauli_name(Pauli p);
Eigen::Matrix2cd pauli_matrix(Pauli p);

struct Correction {
    Pauli control = Pauli::I;
    Pauli target = Pauli::I;
    bool operator==(const Correction &) const = default;
};

/// Heralding pattern "Da+Db" -> correction, over the four 1AO1 patterns.
using CorrectionTable = std::map<std::string, Correction>;

/// Table shipped with the library for `bell`.
const CorrectionTable &frozen_corrections(optics::BellState bell);

/// Recomputes the table from the scene: for each pattern, the first Pauli
/// pair that maps the conditional output to CNOT(input) for a fixed set of
/// probe inputs.
CorrectionTable derive_correction_table(optics::BellState bell);

struct CnotPattern {
    std::string pattern;  // "D1+D3"
    double probability = 0.0;
    /// c_out, t_out amplitudes of the post-selected state (unnormalized).
    TwoQubit raw;
    TwoQubit conditional;  // normalized
    /// Purity of the reduced c_out, t_out state.
    double purity = 0.0;
    Correction correction;
    TwoQubit corrected;
    double fidelity = 0.0;  // to the ideal CNOT output
};

struct CnotRunReport {
    PolarizationState control;
    PolarizationState target;
    optics::BellState bell = optics::BellState::PhiPlus;
    double success_probability = 0.0;
    std::vector<CnotPattern> per_pattern;
    TwoQubit ideal_output;
    TwoQubit corrected_output;
    bool heralded = false;
};

bench::Scene cnot_scene(const PolarizationState &control, const PolarizationState &target,
                        optics::BellState bell = optics::BellState::PhiPlus);

/// Exact run. Throws Configuration when no 1AO1 pattern can occur.
CnotRunReport run_heralded_cnot(const PolarizationState &control, const PolarizationState &target,
                                optics::BellState bell = optics::BellState::PhiPlus);

/// Same, with an explicit correction table (empty: corrections are derived
/// per pattern from this input alone).
CnotRunReport run_heralded_cnot(const PolarizationState &control, const PolarizationState &target,
                                optics::BellState bell, const CorrectionTable &corrections);

/// CNOT(control x target) on the HH, HV, VH, VV basis.
TwoQubit ideal_cnot(const PolarizationState &control, const PolarizationState &target);

struct TruthRow {
    std::string control;
    std::string target;
    std::string output;
    double success_probability = 0.0;
    double fidelity = 0.0;
};

std::vector<TruthRow> cnot_truth_table(optics::BellState bell = optics::BellState::PhiPlus);
/// Columns control,target,output,success_probability,fidelity.
std::string truth_table_csv(const std::vector<TruthRow> &rows);

nlohmann::json cnot_report_to_json(const CnotRunReport &report);

/// Label of a basis product state ("HV"), or empty.
std::string two_qubit_label(const TwoQubit &psi, double tolerance = 1e-9);

}  // namespace qbench::experiments

#endif
