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

#ifndef QBENCH_MEASURE_COUNTS_H
#define QBENCH_MEASURE_COUNTS_H

#include <cstdint>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

namespace qbench::measure {

inline constexpr std::string_view kCountsSchemaVersion = "1";

/// Tallies of a Monte-Carlo run. Coincidence keys list the detectors that
/// clicked in one shot in scene order, joined by '+', with "xN" for N > 1
/// clicks, or "none".
struct CountsTable {
    std::uint64_t shots = 0;
    std::map<std::string, std::uint64_t> per_detector;
    std::map<std::string, std::uint64_t> coincidences;
    /// Shots satisfying every herald group; absent when the scene has none.
    std::optional<std::uint64_t> heralds;
    std::uint64_t seed = 0;
    std::string prng;
    std::string scene;
    std::string scene_hash;

    bool operator==(const CountsTable &) const = default;

    std::uint64_t clicks(const std::string &detector) const;
    std::uint64_t coincidence(const std::string &pattern) const;

    /// Throws Validation when a tally exceeds what `shots` allows.
    void check(int max_clicks_per_shot) const;
};

nlohmann::json counts_to_json(const CountsTable &counts);
CountsTable counts_from_json(const nlohmann::json &doc);

/// Columns "detector,clicks"; coincidence rows are prefixed "coinc:";
/// run metadata rides in leading '#' lines.
std::string counts_to_csv(const CountsTable &counts);

}  // namespace qbench::measure

#endif
