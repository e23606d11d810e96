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

#ifndef QBENCH_BENCH_TRACE_H
#define QBENCH_BENCH_TRACE_H

#include <cstdint>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qbench/core/polarization.h"

namespace qbench::bench {

struct PhotonEmitted {
    std::string source;
    std::string path;
    int photons = 0;
    /// Reduced polarization when the path carries one photon in a pure state.
    std::optional<PolarizationState> state;
};

struct SegmentTraversed {
    std::string link;  // "a.out->b.in"
    std::string path;
    /// Animation pacing only; no physics.
    double nominal_duration_ms = 0.0;
};

struct PlateCrossed {
    std::string component;
    std::string path;
    BlochVector bloch;
};

struct Detection {
    std::string detector;
    int clicks = 0;
};

struct Herald {
    bool success = false;
    std::string pattern;
};

/// Aggregate of shots that were not streamed one by one.
struct Batch {
    std::uint64_t first_shot = 0;
    std::uint64_t shots = 0;
    std::map<std::string, std::uint64_t> clicks;
    std::uint64_t heralds = 0;
};

using EventBody = std::variant<PhotonEmitted, SegmentTraversed, PlateCrossed, Detection, Herald, Batch>;

struct TraceEvent {
    std::uint64_t shot = 0;
    /// Emission branch index for exact traces; -1 for sampled shots.
    int branch = -1;
    EventBody body;
};

struct EventTrace {
    std::vector<TraceEvent> events;
};

std::string_view event_type(const EventBody &body);
nlohmann::json event_to_json(const TraceEvent &event);
nlohmann::json trace_to_json(const EventTrace &trace);

}  // namespace qbench::bench

#endif
