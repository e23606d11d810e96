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

#include <cmath>

#include "qbench/core/error.h"
#include "qbench/optics/optics.h"

namespace qbench::optics {

namespace {

ModeRegistry pair_registry(const std::string &first, const std::string &second) {
    if (first == second) {
        throw Error(ErrorCode::Registry, "pair outputs must be on distinct paths");
    }
    ModeRegistry reg;
    reg.add_path(first);
    reg.add_path(second);
    return reg;
}

// Occupation over (first H, first V, second H, second V).
Occupation pair_occupation(Pol first, Pol second) {
    Occupation o(4, 0);
    o[first == Pol::H ? 0 : 1] = 1;
    o[second == Pol::H ? 2 : 3] = 1;
    return o;
}

}  // namespace

void SpdcSourceSpec::validate() const {
    if (!(emission_probability > 0.0 && emission_probability <= 1.0)) {
        throw Error(ErrorCode::Validation, "emission_probability must lie in (0, 1]");
    }
    if (!(pump_wavelength > 0.0)) {
        throw Error(ErrorCode::Validation, "pump_wavelength must be positive");
    }
    if (!std::isfinite(relative_phase)) {
        throw Error(ErrorCode::Validation, "relative_phase must be finite");
    }
}

double PairEmission::amplitude_weight() const { return std::sqrt(probability); }

PairEmission spdc_emit(const SpdcSourceSpec &spec, const PolarizationState &pump, const std::string &signal_path,
                       const std::string &idler_path) {
    spec.validate();
    FockState pair(pair_registry(signal_path, idler_path));
    const complex a = pump.alpha();
    const complex b = pump.beta();
    if (spec.geometry == SpdcGeometry::SingleCrystal) {
        pair.add(pair_occupation(Pol::H, Pol::H), 1.0);
        return {spec.emission_probability * std::norm(b), std::move(pair)};
    }
    if (b != complex(0.0)) {
        pair.add(pair_occupation(Pol::H, Pol::H), b);
    }
    if (a != complex(0.0)) {
        pair.add(pair_occupation(Pol::V, Pol::V), a * std::polar(1.0, spec.relative_phase));
    }
    pair.renormalize();
    return {spec.emission_probability, std::move(pair)};
}

std::string bell_state_name(BellState state) {
    switch (state) {
        case BellState::PhiPlus:
            return "phi+";
        case BellState::PhiMinus:
            return "phi-";
        case BellState::PsiPlus:
            return "psi+";
        case BellState::PsiMinus:
            return "psi-";
    }
    return "phi+";
}

BellState bell_state_from_name(const std::string &name) {
    for (auto s : {BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus}) {
        if (bell_state_name(s) == name) {
            return s;
        }
    }
    throw Error(ErrorCode::Validation, "unknown Bell state '" + name + "' (expected phi+, phi-, psi+, psi-)");
}

FockState bell_pair(BellState state, const std::string &first, const std::string &second) {
    FockState pair(pair_registry(first, second));
    const double h = std::sqrt(0.5);
    switch (state) {
        case BellState::PhiPlus:
            pair.add(pair_occupation(Pol::H, Pol::H), h);
            pair.add(pair_occupation(Pol::V, Pol::V), h);
            break;
        case BellState::PhiMinus:
            pair.add(pair_occupation(Pol::H, Pol::H), h);
            pair.add(pair_occupation(Pol::V, Pol::V), -h);
            break;
        case BellState::PsiPlus:
            pair.add(pair_occupation(Pol::H, Pol::V), h);
            pair.add(pair_occupation(Pol::V, Pol::H), h);
            break;
        case BellState::PsiMinus:
            pair.add(pair_occupation(Pol::H, Pol::V), h);
            pair.add(pair_occupation(Pol::V, Pol::H), -h);
            break;
    }
    return pair;
}

void RefractiveIndexPoint::validate() const {
    if (!(n_ordinary > 1.0) || !(n_extraordinary > 1.0)) {
        throw Error(ErrorCode::Validation, "refractive indices must exceed 1");
    }
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw Error(ErrorCode::Validation, "angular frequency must be positive");
    }
}

PhaseMatchResult phase_match(const RefractiveIndexPoint &pump, const RefractiveIndexPoint &signal,
                             const RefractiveIndexPoint &idler, double tolerance, PhaseMatchRays rays) {
    pump.validate();
    signal.validate();
    idler.validate();
    if (std::abs(signal.omega + idler.omega - pump.omega) > 1e-9 * pump.omega) {
        throw Error(ErrorCode::Validation, "invalid frequencies: signal + idler must equal the pump frequency");
    }
    if (!(tolerance >= 0.0)) {
        throw Error(ErrorCode::Validation, "tolerance must be non-negative");
    }
    auto index = [](const RefractiveIndexPoint &p, Ray ray) {
        return ray == Ray::Ordinary ? p.n_ordinary : p.n_extraordinary;
    };
    double k_out = index(signal, rays.signal) * signal.omega + index(idler, rays.idler) * idler.omega;
    double k_in = index(pump, rays.pump) * pump.omega;
    double mismatch = std::abs(k_out - k_in) / kSpeedOfLight;
    return {mismatch <= tolerance, mismatch};
}

void DetectorSpec::validate() const {
    if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
        throw Error(ErrorCode::Validation, "detector efficiency must lie in [0, 1]");
    }
    if (!(dark_count_probability >= 0.0 && dark_count_probability <= 1.0)) {
        throw Error(ErrorCode::Validation, "dark_count_probability must lie in [0, 1]");
    }
}

int detect(const DetectorSpec &spec, int photons, Rng &rng) {
    if (photons < 0) {
        throw Error(ErrorCode::Validation, "negative photon count");
    }
    int clicks = 0;
    for (int i = 0; i < photons; ++i) {
        // Draw even at efficiency 1 so the stream layout is parameter-free.
        if (rng.uniform() < spec.efficiency) {
            ++clicks;
        }
    }
    if (spec.dark_count_probability > 0.0 && rng.uniform() < spec.dark_count_probability) {
        ++clicks;
    }
    if (!spec.number_resolving) {
        clicks = std::min(clicks, 1);
    }
    return clicks;
}

std::vector<double> click_distribution(const DetectorSpec &spec, int photons) {
    if (photons < 0) {
        throw Error(ErrorCode::Validation, "negative photon count");
    }
    // Binomial over real photons.
    std::vector<double> dist(photons + 2, 0.0);
    dist[0] = 1.0;
    for (int i = 0; i < photons; ++i) {
        for (int k = i + 1; k >= 1; --k) {
            dist[k] = dist[k] * (1.0 - spec.efficiency) + dist[k - 1] * spec.efficiency;
        }
        dist[0] *= 1.0 - spec.efficiency;
    }
    if (spec.dark_count_probability > 0.0) {
        double d = spec.dark_count_probability;
        for (int k = photons + 1; k >= 1; --k) {
            dist[k] = dist[k] * (1.0 - d) + dist[k - 1] * d;
        }
        dist[0] *= 1.0 - d;
    }
    if (!spec.number_resolving) {
        double any = 0.0;
        for (std::size_t k = 1; k < dist.size(); ++k) {
            any += dist[k];
        }
        dist = {dist[0], any};
    }
    while (dist.size() > 1 && dist.back() == 0.0) {
        dist.pop_back();
    }
    return dist;
}

}  // namespace qbench::optics
