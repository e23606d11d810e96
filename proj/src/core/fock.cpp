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

#include "qbench/core/fock.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "qbench/core/error.h"

namespace qbench {

namespace {

double sqrt_factorial_product(const Occupation &occupation) {
    double f = 1.0;
    for (auto n : occupation) {
        for (int k = 2; k <= n; ++k) {
            f *= k;
        }
    }
    return std::sqrt(f);
}

int total(const Occupation &occupation) { return std::accumulate(occupation.begin(), occupation.end(), 0); }

}  // namespace

ModeRegistry::ModeRegistry(std::vector<ModeIndex> modes) : modes_(std::move(modes)) {
    if (modes_.size() > kMaxModes) {
        throw Error(ErrorCode::Registry, "mode registry exceeds " + std::to_string(kMaxModes) + " modes");
    }
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        for (std::size_t j = i + 1; j < modes_.size(); ++j) {
            if (modes_[i] == modes_[j]) {
                throw Error(ErrorCode::Registry, "duplicate mode on path '" + modes_[i].path + "'");
            }
        }
    }
}

void ModeRegistry::add_path(const std::string &path) {
    if (has_path(path)) {
        throw Error(ErrorCode::Registry, "path '" + path + "' already registered");
    }
    if (modes_.size() + 2 > kMaxModes) {
        throw Error(ErrorCode::Registry, "mode registry exceeds " + std::to_string(kMaxModes) + " modes");
    }
    modes_.push_back({path, Pol::H});
    modes_.push_back({path, Pol::V});
}

std::optional<std::size_t> ModeRegistry::find(const std::string &path, Pol pol) const {
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        if (modes_[i].path == path && modes_[i].pol == pol) {
            return i;
        }
    }
    return std::nullopt;
}

std::size_t ModeRegistry::index(const std::string &path, Pol pol) const {
    auto i = find(path, pol);
    if (!i) {
        throw Error(ErrorCode::Registry,
                    "mode (" + path + ", " + (pol == Pol::H ? "H" : "V") + ") is not in the registry");
    }
    return *i;
}

bool ModeRegistry::has_path(const std::string &path) const {
    return std::any_of(modes_.begin(), modes_.end(), [&](const ModeIndex &m) { return m.path == path; });
}

std::vector<std::string> ModeRegistry::paths() const {
    std::vector<std::string> out;
    for (const auto &m : modes_) {
        if (std::find(out.begin(), out.end(), m.path) == out.end()) {
            out.push_back(m.path);
        }
    }
    return out;
}

FockState::FockState(ModeRegistry registry) : registry_(std::move(registry)) {}

FockState FockState::vacuum(ModeRegistry registry) {
    FockState s(std::move(registry));
    s.add(Occupation(s.registry_.size(), 0), 1.0);
    return s;
}

FockState FockState::basis(ModeRegistry registry, Occupation occupation) {
    FockState s(std::move(registry));
    s.add(occupation, 1.0);
    return s;
}

void FockState::add(const Occupation &occupation, complex amplitude) {
    if (occupation.size() != registry_.size()) {
        throw Error(ErrorCode::Dimension, "occupation vector length " + std::to_string(occupation.size()) +
                                              " does not match registry size " +
                                              std::to_string(registry_.size()));
    }
    int n = total(occupation);
    if (n > kMaxPhotons) {
        throw Error(ErrorCode::Validation, "photon number " + std::to_string(n) + " exceeds cap of " +
                                               std::to_string(kMaxPhotons));
    }
    if (!terms_.empty() && n != photon_number()) {
        throw Error(ErrorCode::Validation, "superposition of different photon numbers");
    }
    terms_[occupation] += amplitude;
}

complex FockState::amplitude(const Occupation &occupation) const {
    auto it = terms_.find(occupation);
    return it == terms_.end() ? complex(0.0) : it->second;
}

int FockState::photon_number() const { return terms_.empty() ? 0 : total(terms_.begin()->first); }

double FockState::norm_squared() const {
    double n = 0.0;
    for (const auto &[occ, a] : terms_) {
        n += std::norm(a);
    }
    return n;
}

void FockState::renormalize() {
    double n = std::sqrt(norm_squared());
    if (!(n > 0.0)) {
        throw Error(ErrorCode::ImpossibleOutcome, "cannot renormalize a zero state");
    }
    for (auto &[occ, a] : terms_) {
        a /= n;
    }
}

void FockState::prune(double threshold) {
    std::erase_if(terms_, [&](const auto &kv) { return std::abs(kv.second) < threshold; });
}

void FockState::require_normalized(double tolerance) const {
    double n = norm_squared();
    if (std::abs(n - 1.0) > tolerance) {
        throw Error(ErrorCode::Normalization, "Fock state not normalized: norm^2 = " + std::to_string(n));
    }
}

ModeUnitary::ModeUnitary(ModeRegistry registry, Eigen::MatrixXcd matrix)
    : registry_(std::move(registry)), matrix_(std::move(matrix)) {
    auto m = static_cast<Eigen::Index>(registry_.size());
    if (matrix_.rows() != m || matrix_.cols() != m) {
        throw Error(ErrorCode::Dimension, "mode unitary is " + std::to_string(matrix_.rows()) + "x" +
                                              std::to_string(matrix_.cols()) + " over a registry of " +
                                              std::to_string(m) + " modes");
    }
    if (!is_unitary(matrix_, 1e-10)) {
        throw Error(ErrorCode::Validation, "mode matrix is not unitary");
    }
}

ModeUnitary ModeUnitary::identity(ModeRegistry registry) {
    auto m = static_cast<Eigen::Index>(registry.size());
    return ModeUnitary(std::move(registry), Eigen::MatrixXcd::Identity(m, m));
}

ModeUnitary ModeUnitary::embed(ModeRegistry registry, std::span<const std::size_t> modes,
                               const Eigen::MatrixXcd &local) {
    auto k = static_cast<Eigen::Index>(modes.size());
    if (local.rows() != k || local.cols() != k) {
        throw Error(ErrorCode::Dimension, "local matrix size does not match the number of modes");
    }
    auto m = static_cast<Eigen::Index>(registry.size());
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(m, m);
    for (Eigen::Index a = 0; a < k; ++a) {
        if (modes[a] >= registry.size()) {
            throw Error(ErrorCode::Registry, "mode index out of range");
        }
        for (Eigen::Index b = 0; b < k; ++b) {
            u(modes[a], modes[b]) = local(a, b);
        }
    }
    return ModeUnitary(std::move(registry), std::move(u));
}

ModeUnitary ModeUnitary::after(const ModeUnitary &first) const {
    if (!(registry_ == first.registry_)) {
        throw Error(ErrorCode::Dimension, "cannot compose unitaries over different registries");
    }
    return ModeUnitary(registry_, matrix_ * first.matrix_);
}

FockState apply_mode_unitary(const FockState &state, const ModeUnitary &unitary) {
    if (!(state.registry() == unitary.registry())) {
        throw Error(ErrorCode::Dimension, "state and unitary are defined over different mode registries");
    }
    const auto &u = unitary.matrix();
    const std::size_t m = state.registry().size();

    // Nonzero entries of each column: the creation operators a+_j maps onto.
    std::vector<std::vector<std::pair<std::size_t, complex>>> columns(m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
            if (u(k, j) != complex(0.0)) {
                columns[j].emplace_back(k, u(k, j));
            }
        }
    }

    std::map<Occupation, complex> out;
    for (const auto &[occ, amp] : state.terms()) {
        // Monomial coefficients of prod_j (sum_k U_kj a+_k)^{n_j}.
        std::map<Occupation, complex> poly{{Occupation(m, 0), amp / sqrt_factorial_product(occ)}};
        for (std::size_t j = 0; j < m; ++j) {
            for (int rep = 0; rep < occ[j]; ++rep) {
                std::map<Occupation, complex> next;
                for (const auto &[mono, c] : poly) {
                    for (const auto &[k, ukj] : columns[j]) {
                        Occupation grown = mono;
                        ++grown[k];
                        next[grown] += c * ukj;
                    }
                }
                poly = std::move(next);
            }
        }
        for (const auto &[mono, c] : poly) {
            out[mono] += c * sqrt_factorial_product(mono);
        }
    }

    FockState result(state.registry());
    for (const auto &[occ, a] : out) {
        if (std::abs(a) >= 1e-15) {
            result.add(occ, a);
        }
    }
    result.set_weight(state.weight());
    double drift = std::abs(result.norm_squared() - state.norm_squared());
    if (drift > 1e-12 && state.norm_squared() > 0.0) {
        result.renormalize();
    }
    return result;
}

PostSelectPattern &PostSelectPattern::exactly(std::size_t mode, int count) {
    constraints.push_back({{mode}, {count}});
    return *this;
}

PostSelectPattern &PostSelectPattern::total(std::vector<std::size_t> modes, int count) {
    constraints.push_back({std::move(modes), {count}});
    return *this;
}

bool PostSelectPattern::matches(const Occupation &occupation) const {
    for (const auto &c : constraints) {
        int n = 0;
        for (auto mode : c.modes) {
            n += occupation.at(mode);
        }
        if (!c.totals.contains(n)) {
            return false;
        }
    }
    return true;
}

double pattern_probability(const FockState &state, const PostSelectPattern &pattern) {
    double p = 0.0;
    for (const auto &[occ, a] : state.terms()) {
        if (pattern.matches(occ)) {
            p += std::norm(a);
        }
    }
    return p;
}

PostSelection post_select(const FockState &state, const PostSelectPattern &pattern) {
    for (const auto &c : pattern.constraints) {
        for (auto mode : c.modes) {
            if (mode >= state.registry().size()) {
                throw Error(ErrorCode::Registry, "post-selection pattern names a mode outside the registry");
            }
        }
    }
    double p = pattern_probability(state, pattern);
    if (p < 1e-15) {
        throw Error(ErrorCode::ImpossibleOutcome, "post-selected outcome has zero probability");
    }
    p = std::min(p, 1.0);
    FockState conditional(state.registry());
    double scale = 1.0 / std::sqrt(p);
    for (const auto &[occ, a] : state.terms()) {
        if (pattern.matches(occ)) {
            conditional.add(occ, a * scale);
        }
    }
    conditional.set_weight(state.weight() * p);
    return {p, std::move(conditional)};
}

FockState drop_paths(const FockState &state, std::span<const std::string> paths) {
    const auto &reg = state.registry();
    std::vector<bool> drop(reg.size(), false);
    for (const auto &p : paths) {
        drop[reg.index(p, Pol::H)] = true;
        drop[reg.index(p, Pol::V)] = true;
    }
    std::vector<ModeIndex> kept;
    for (std::size_t i = 0; i < reg.size(); ++i) {
        if (!drop[i]) {
            kept.push_back(reg[i]);
        }
    }
    FockState out{ModeRegistry(kept)};
    const Occupation *first = state.terms().empty() ? nullptr : &state.terms().begin()->first;
    for (const auto &[occ, a] : state.terms()) {
        Occupation reduced;
        for (std::size_t i = 0; i < reg.size(); ++i) {
            if (!drop[i]) {
                reduced.push_back(occ[i]);
            } else if (occ[i] != (*first)[i]) {
                throw Error(ErrorCode::Validation,
                            "dropped mode (" + reg[i].path + ") is not in a definite occupation");
            }
        }
        out.add(reduced, a);
    }
    out.set_weight(state.weight());
    return out;
}

FockState tensor(const FockState &a, const FockState &b) {
    for (const auto &p : b.registry().paths()) {
        if (a.registry().has_path(p)) {
            throw Error(ErrorCode::Registry, "registries collide on path '" + p + "'");
        }
    }
    std::vector<ModeIndex> modes = a.registry().modes();
    modes.insert(modes.end(), b.registry().modes().begin(), b.registry().modes().end());
    FockState out{ModeRegistry(std::move(modes))};
    for (const auto &[oa, xa] : a.terms()) {
        for (const auto &[ob, xb] : b.terms()) {
            Occupation o = oa;
            o.insert(o.end(), ob.begin(), ob.end());
            out.add(o, xa * xb);
        }
    }
    out.set_weight(a.weight() * b.weight());
    return out;
}

complex inner_product(const FockState &a, const FockState &b) {
    if (!(a.registry() == b.registry())) {
        throw Error(ErrorCode::Dimension, "inner product over different mode registries");
    }
    complex s = 0.0;
    for (const auto &[occ, xa] : a.terms()) {
        s += std::conj(xa) * b.amplitude(occ);
    }
    return s;
}

FockState single_photon(const ModeRegistry &registry, const std::string &path, const PolarizationState &psi) {
    FockState s(registry);
    Occupation h(registry.size(), 0);
    Occupation v(registry.size(), 0);
    h[registry.index(path, Pol::H)] = 1;
    v[registry.index(path, Pol::V)] = 1;
    if (psi.alpha() != complex(0.0)) {
        s.add(h, psi.alpha());
    }
    if (psi.beta() != complex(0.0)) {
        s.add(v, psi.beta());
    }
    return s;
}

std::optional<DensityMatrix2> reduced_polarization(const FockState &state, const std::string &path) {
    const auto &reg = state.registry();
    auto ih = reg.find(path, Pol::H);
    auto iv = reg.find(path, Pol::V);
    if (!ih || !iv || state.terms().empty()) {
        return std::nullopt;
    }
    std::map<Occupation, Eigen::Vector2cd> blocks;
    for (const auto &[occ, a] : state.terms()) {
        if (occ[*ih] + occ[*iv] != 1) {
            return std::nullopt;
        }
        Occupation rest = occ;
        rest[*ih] = 0;
        rest[*iv] = 0;
        auto [it, inserted] = blocks.try_emplace(rest, Eigen::Vector2cd::Zero());
        it->second(occ[*ih] == 1 ? 0 : 1) += a;
    }
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    for (const auto &[rest, v] : blocks) {
        rho += v * v.adjoint();
    }
    complex tr = rho.trace();
    if (std::abs(tr) < 1e-15) {
        return std::nullopt;
    }
    rho /= tr;
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix2(rho);
}

}  // namespace qbench
