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

#include "qbench/bench/trace.h"

namespace qbench::bench {

using nlohmann::json;

namespace {

json complex_json(complex z) { return json::array({z.real(), z.imag()}); }

json bloch_json(const BlochVector &b) { return json::array({b.x, b.y, b.z}); }

struct BodyJson {
    json &out;

    void operator()(const PhotonEmitted &e) const {
        out["source"] = e.source;
        out["path"] = e.path;
        out["photons"] = e.photons;
        if (e.state) {
            out["state"] = {{"alpha", complex_json(e.state->alpha())},
                            {"beta", complex_json(e.state->beta())},
                            {"bloch", bloch_json(bloch_from_state(*e.state))}};
        }
    }
    void operator()(const SegmentTraversed &e) const {
        out["link"] = e.link;
        out["path"] = e.path;
        out["nominal_duration_ms"] = e.nominal_duration_ms;
    }
    void operator()(const PlateCrossed &e) const {
        out["component"] = e.component;
        out["path"] = e.path;
        out["bloch"] = bloch_json(e.bloch);
    }
    void operator()(const Detection &e) const {
        out["detector"] = e.detector;
        out["clicks"] = e.clicks;
    }
    void operator()(const Herald &e) const {
        out["success"] = e.success;
        out["pattern"] = e.pattern;
    }
    void operator()(const Batch &e) const {
        out["first_shot"] = e.first_shot;
        out["shots"] = e.shots;
        out["clicks"] = e.clicks;
        out["heralds"] = e.heralds;
    }
};

}  // namespace

std::string_view event_type(const EventBody &body) {
    static constexpr std::string_view kNames[] = {"photon_emitted", "segment_traversed", "plate_crossed",
                                                  "detection",      "herald",            "batch"};
    return kNames[body.index()];
}

json event_to_json(const TraceEvent &event) {
    json j{{"type", event_type(event.body)}, {"shot", event.shot}};
    if (event.branch >= 0) {
        j["branch"] = event.branch;
    }
    std::visit(BodyJson{j}, event.body);
    return j;
}

json trace_to_json(const EventTrace &trace) {
    json events = json::array();
    for (const auto &e : trace.events) {
        events.push_back(event_to_json(e));
    }
    return events;
}

}  // namespace qbench::bench
