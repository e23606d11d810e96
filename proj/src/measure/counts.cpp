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

#include "qbench/measure/counts.h"

#include <sstream>

#include "qbench/core/error.h"

namespace qbench::measure {

using nlohmann::json;

std::uint64_t CountsTable::clicks(const std::string &detector) const {
    auto it = per_detector.find(detector);
    return it == per_detector.end() ? 0 : it->second;
}

std::uint64_t CountsTable::coincidence(const std::string &pattern) const {
    auto it = coincidences.find(pattern);
    return it == coincidences.end() ? 0 : it->second;
}

void CountsTable::check(int max_clicks_per_shot) const {
    for (const auto &[d, n] : per_detector) {
        if (n > shots * static_cast<std::uint64_t>(max_clicks_per_shot)) {
            throw Error(ErrorCode::Validation, "detector '" + d + "' exceeds the per-shot click bound");
        }
    }
    std::uint64_t total = 0;
    for (const auto &[p, n] : coincidences) {
        if (n > shots) {
            throw Error(ErrorCode::Validation, "coincidence '" + p + "' exceeds the shot count");
        }
        total += n;
    }
    if (!coincidences.empty() && total != shots) {
        throw Error(ErrorCode::Validation, "coincidence patterns do not partition the shots");
    }
    if (heralds && *heralds > shots) {
        throw Error(ErrorCode::Validation, "herald count exceeds the shot count");
    }
}

json counts_to_json(const CountsTable &counts) {
    json j{{"schema_version", kCountsSchemaVersion},
           {"shots", counts.shots},
           {"per_detector", counts.per_detector},
           {"coincidences", counts.coincidences},
           {"seed", counts.seed},
           {"prng", counts.prng},
           {"scene", counts.scene},
           {"scene_hash", counts.scene_hash}};
    if (counts.heralds) {
        j["heralds"] = *counts.heralds;
    }
    return j;
}

CountsTable counts_from_json(const json &doc) {
    try {
        CountsTable c;
        c.shots = doc.at("shots").get<std::uint64_t>();
        c.per_detector = doc.at("per_detector").get<std::map<std::string, std::uint64_t>>();
        c.coincidences = doc.at("coincidences").get<std::map<std::string, std::uint64_t>>();
        if (doc.contains("heralds")) {
            c.heralds = doc.at("heralds").get<std::uint64_t>();
        }
        c.seed = doc.at("seed").get<std::uint64_t>();
        c.prng = doc.at("prng").get<std::string>();
        c.scene = doc.value("scene", "");
        c.scene_hash = doc.value("scene_hash", "");
        return c;
    } catch (const json::exception &e) {
        throw Error(ErrorCode::Validation, std::string("malformed counts table: ") + e.what());
    }
}

std::string counts_to_csv(const CountsTable &counts) {
    std::ostringstream out;
    out << "# schema_version=" << kCountsSchemaVersion << "\n";
    out << "# scene=" << counts.scene << "\n";
    out << "# scene_hash=" << counts.scene_hash << "\n";
    out << "# seed=" << counts.seed << "\n";
    out << "# prng=" << counts.prng << "\n";
    out << "# shots=" << counts.shots << "\n";
    if (counts.heralds) {
        out << "# heralds=" << *counts.heralds << "\n";
    }
    out << "detector,clicks\n";
    for (const auto &[d, n] : counts.per_detector) {
        out << d << "," << n << "\n";
    }
    for (const auto &[p, n] : counts.coincidences) {
        out << "coinc:" << p << "," << n << "\n";
    }
    return out.str();
}

}  // namespace qbench::measure
