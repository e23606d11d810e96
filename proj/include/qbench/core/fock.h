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

#ifndef QBENCH_CORE_FOCK_H
#define QBENCH_CORE_FOCK_H

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "qbench/core/polarization.h"

namespace qbench {

inline constexpr std::size_t kMaxModes = 16;
inline constexpr int kMaxPhotons = 6;

enum class Pol : std::uint8_t { H = 0, V = 1 };

struct ModeIndex {
    std::string path;
    Pol pol = Pol::H;
    bool operator==(const ModeIndex &) const = default;
};

/// Ordered set of (path, polarization) modes. Order is declaration order.
class ModeRegistry {
   public:
    ModeRegistry() = default;
    explicit ModeRegistry(std::vector<ModeIndex> modes);

    /// Registers both polarizations of `path` (H first). Throws Registry on a
    /// duplicate path or when the mode cap would be exceeded.
    void add_path(const std::string &path);

    std::size_t size() const { return modes_.size(); }
    const ModeIndex &operator[](std::size_t i) const { return modes_[i]; }
    const std::vector<ModeIndex> &modes() const { return modes_; }

    std::optional<std::size_t> find(const std::string &path, Pol pol) const;
    /// Throws Registry when absent.
    std::size_t index(const std::string &path, Pol pol) const;
    bool has_path(const std::string &path) const;
    /// Distinct paths in declaration order.
    std::vector<std::string> paths() const;

    bool operator==(const ModeRegistry &) const = default;

   private:
    std::vector<ModeIndex> modes_;
};

using Occupation = std::vector<std::uint8_t>;

/// Sparse superposition of occupation-number states over a registry.
///
/// Amplitudes are kept normalized. `weight` carries the probability of the
/// branch this state represents (1 for an unconditioned state; the
/// post-selection probability or emission probability otherwise).
class FockState {
   public:
    explicit FockState(ModeRegistry registry);

    static FockState vacuum(ModeRegistry registry);
    /// Single term with amplitude 1.
    static FockState basis(ModeRegistry registry, Occupation occupation);

    /// Adds `amplitude` to the term. Enforces registry size, photon cap and
    /// a common total photon number.
    void add(const Occupation &occupation, complex amplitude);

    const ModeRegistry &registry() const { return registry_; }
    const std::map<Occupation, complex> &terms() const { return terms_; }
    complex amplitude(const Occupation &occupation) const;

    /// Common photon number; 0 for the empty superposition.
    int photon_number() const;
    double norm_squared() const;
    /// Divides by the norm. Throws ImpossibleOutcome on a zero state.
    void renormalize();
    /// Removes terms with |amplitude| below `threshold`.
    void prune(double threshold = 1e-15);

    double weight() const { return weight_; }
    void set_weight(double weight) { weight_ = weight; }

    /// Throws Normalization unless the squared norm is 1 within `tolerance`.
    void require_normalized(double tolerance = 1e-10) const;

   private:
    ModeRegistry registry_;
    std::map<Occupation, complex> terms_;
    double weight_ = 1.0;
};

/// Unitary matrix acting on the modes of a registry; column j is the image
/// of mode j.
class ModeUnitary {
   public:
    /// Throws Dimension on a size mismatch and Validation when not unitary
    /// within 1e-10.
    ModeUnitary(ModeRegistry registry, Eigen::MatrixXcd matrix);

    static ModeUnitary identity(ModeRegistry registry);
    /// Acts as `local` on `modes` (in that order) and as identity elsewhere.
    static ModeUnitary embed(ModeRegistry registry, std::span<const std::size_t> modes,
                             const Eigen::MatrixXcd &local);

    const ModeRegistry &registry() const { return registry_; }
    const Eigen::MatrixXcd &matrix() const { return matrix_; }

    /// this applied after `first`.
    ModeUnitary after(const ModeUnitary &first) const;

   private:
    ModeRegistry registry_;
    Eigen::MatrixXcd matrix_;
};

/// Substitutes a+_j -> sum_k U_kj a+_k in every term and re-expands.
FockState apply_mode_unitary(const FockState &state, const ModeUnitary &unitary);

/// One constraint: the total occupation of `modes` must be in `totals`.
struct OccupationConstraint {
    std::vector<std::size_t> modes;
    std::set<int> totals;
};

struct PostSelectPattern {
    std::vector<OccupationConstraint> constraints;

    PostSelectPattern &exactly(std::size_t mode, int count);
    PostSelectPattern &total(std::vector<std::size_t> modes, int count);
    bool matches(const Occupation &occupation) const;
};

struct PostSelection {
    double probability = 0.0;
    FockState conditional;
};

/// Born-rule probability of `pattern` and the renormalized conditional
/// state (registry unchanged; its weight is probability * input weight).
/// Throws ImpossibleOutcome below 1e-15.
PostSelection post_select(const FockState &state, const PostSelectPattern &pattern);

/// Same as post_select but returns only the probability (never throws).
double pattern_probability(const FockState &state, const PostSelectPattern &pattern);

/// Drops every mode of `paths` whose occupation is the same in all terms.
/// Throws Validation if some dropped mode varies (the result would be mixed).
FockState drop_paths(const FockState &state, std::span<const std::string> paths);

/// Product state over the concatenated registries. Throws Registry on a
/// shared path.
FockState tensor(const FockState &a, const FockState &b);

/// <a|b>. Throws Dimension when the registries differ.
complex inner_product(const FockState &a, const FockState &b);

/// Single photon on `path` with polarization `psi`.
FockState single_photon(const ModeRegistry &registry, const std::string &path,
                        const PolarizationState &psi);

/// Reduced polarization of `path` when it holds exactly one photon in every
/// term; nullopt otherwise.
std::optional<DensityMatrix2> reduced_polarization(const FockState &state, const std::string &path);

}  // namespace qbench

#endif
