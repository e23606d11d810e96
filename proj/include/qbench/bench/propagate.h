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

#ifndef QBENCH_BENCH_PROPAGATE_H
#define QBENCH_BENCH_PROPAGATE_H

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qbench/bench/scene.h"
#include "qbench/bench/trace.h"
#include "qbench/core/fock.h"
#include "qbench/core/rng.h"
#include "qbench/measure/counts.h"

namespace qbench::bench {

/// Photons injected by one source component per shot.
struct Emitter {
    std::string component;
    std::vector<std::string> paths;
    /// Per-shot emission probability; 1 for deterministic sources.
    double probability = 1.0;
    bool stochastic = false;
    /// Normalized emitted state over `paths`.
    FockState state{ModeRegistry{}};
};

/// One passive photon-side component compiled to a unitary over the full
/// registry.
struct CompiledStep {
    std::string component;
    ComponentKind kind = ComponentKind::Prism;
    /// Paths the component acts on, in port order.
    std::vector<std::string> paths;
    ModeUnitary unitary{ModeRegistry{}, Eigen::MatrixXcd(0, 0)};

    bool is_plate() const { return kind == ComponentKind::Hwp || kind == ComponentKind::Qwp; }
    /// Identity steps (fiber pass-through, prism) are skipped when applied.
    bool is_identity() const { return kind == ComponentKind::Smf || kind == ComponentKind::Prism; }
};

/// Where a path ends: a detector or a lossless fiber sink.
struct Terminal {
    std::string component;
    std::string path;
    bool detector = false;
    optics::DetectorSpec spec;
};

struct IncomingLink {
    std::string link;  // "a.out->b.in"
    /// Photon path, or the pump beam label on the pump side.
    std::string path;
    /// Pump intensity on the link; unused on the photon side.
    double pump_power = 0.0;
    double nominal_duration_ms = 0.0;
};

/// One component in topological order, with what it does.
struct Visit {
    std::string component;
    ComponentKind kind = ComponentKind::Prism;
    /// Carries the classical pump rather than photons.
    bool classical = false;
    std::vector<IncomingLink> incoming;
    int emitter = -1;
    int step = -1;
    int terminal = -1;
    /// Pump polarization after a pump-side plate.
    std::optional<BlochVector> pump_bloch;
    std::string pump_path;
};

struct CompiledScene {
    ModeRegistry registry;
    std::vector<Emitter> emitters;
    std::vector<CompiledStep> steps;
    /// Detectors in scene order, then sinks in topological order.
    std::vector<Terminal> terminals;
    std::vector<Visit> schedule;
    /// Photon-side output ports left unlinked, with their paths.
    std::vector<std::pair<std::string, std::string>> dangling;
    std::vector<std::pair<std::string, std::vector<std::string>>> herald_groups;
    /// Unnormalized pump Jones vector reaching each crystal.
    std::map<std::string, Eigen::Vector2cd> pump_fields;

    std::size_t detector_count() const;
};

/// Resolves paths, pump conditioning and component unitaries.
CompiledScene compile_scene(const Scene &scene);

/// Applies steps [begin, end) to `state`.
FockState run_steps(const FockState &state, const std::vector<CompiledStep> &steps, std::size_t begin,
                    std::size_t end);

/// One combination of stochastic emitters firing or not.
struct Branch {
    double probability = 0.0;
    /// Per emitter, whether it fired in this branch.
    std::vector<bool> fired;
    FockState initial{ModeRegistry{}};
    FockState final_state{ModeRegistry{}};
    /// Pure single-photon polarization per path after propagation.
    std::map<std::string, PolarizationState> snapshots;
    /// Bloch vector after each plate, in step order.
    std::vector<PlateCrossed> plates;
};

struct ExactResult {
    CompiledScene compiled;
    std::vector<Branch> branches;
    EventTrace trace;
};

/// Composes every component in topological order. Branches with zero
/// probability are dropped. Throws DanglingPath when a photon can reach an
/// unlinked output port.
ExactResult propagate_exact(const Scene &scene);

/// Exact probabilities of detector click patterns (clicks per detector, in
/// scene order), folding in detector efficiency and dark counts.
struct OutcomeDistribution {
    std::vector<std::string> detectors;
    std::map<std::vector<int>, double> patterns;
    /// Probability that every herald group records exactly one click;
    /// nullopt when the scene declares no groups.
    std::optional<double> herald_probability;

    double total() const;
    /// Same as CountsTable coincidence keys.
    std::string key(const std::vector<int> &clicks) const;
};

OutcomeDistribution outcome_distribution(const ExactResult &result);

/// True when every group has exactly one click in total.
bool heralded(const CompiledScene &compiled, const std::vector<int> &clicks);

/// Outcome of one Monte-Carlo shot.
struct ShotOutcome {
    std::uint64_t shot = 0;
    int branch = 0;
    /// Sampled term of the branch's final state.
    const Occupation *occupation = nullptr;
    std::vector<int> clicks;     // per detector, scene order
    std::vector<int> delivered;  // photons per sink, terminal order after the detectors
    std::optional<bool> herald;
};

/// Draws shots from a fixed exact result. Shot k always uses Rng(seed, k).
class ShotSampler {
   public:
    ShotSampler(const ExactResult &exact, std::uint64_t seed);

    ShotOutcome sample(std::uint64_t shot) const;
    /// Emission, traversal, plate, detection and herald events of one shot.
    std::vector<TraceEvent> events(const ShotOutcome &outcome) const;
    std::string pattern_key(const std::vector<int> &clicks) const;

    const ExactResult &exact() const { return exact_; }
    std::uint64_t seed() const { return seed_; }

   private:
    struct Cumulative {
        std::vector<const Occupation *> occupations;
        std::vector<double> cdf;
    };

    const ExactResult &exact_;
    std::uint64_t seed_;
    std::vector<double> branch_cdf_;
    std::vector<Cumulative> term_cdf_;
    std::vector<std::pair<std::size_t, std::size_t>> terminal_modes_;
    std::vector<std::vector<TraceEvent>> branch_events_;
    std::vector<std::string> detector_names_;
};

struct SampledResult {
    measure::CountsTable counts;
    EventTrace trace;
};

/// `shots` Monte-Carlo shots numbered from `first_shot`. The trace is only
/// filled when `record_trace` is set.
SampledResult propagate_sampled(const Scene &scene, std::uint64_t shots, std::uint64_t seed, bool record_trace = false,
                                std::uint64_t first_shot = 0);

/// Zero tallies for every detector of `compiled`, stamped with the seed,
/// generator id and scene hash.
measure::CountsTable empty_counts(const Scene &scene, const CompiledScene &compiled, std::uint64_t seed);

/// Adds one shot to a counts table.
void tally(measure::CountsTable &counts, const ShotSampler &sampler, const ShotOutcome &outcome);

}  // namespace qbench::bench

#endif
