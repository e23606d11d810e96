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

#include <cstdint>
#include <cstdio>
#include <set>

#include "qbench/bench/scene.h"
#include "qbench/core/error.h"

namespace qbench::bench {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string &message) { throw Error(ErrorCode::Validation, message); }

void reject_unknown(const json &obj, std::initializer_list<std::string_view> allowed, const std::string &where) {
    if (!obj.is_object()) {
        invalid(where + " must be a JSON object");
    }
    for (const auto &[key, value] : obj.items()) {
        bool ok = false;
        for (auto a : allowed) {
            ok = ok || key == a;
        }
        if (!ok) {
            invalid(where + ": unknown field '" + key + "'");
        }
    }
}

double number(const json &v, const std::string &where) {
    if (!v.is_number()) {
        invalid(where + " must be a number");
    }
    return v.get<double>();
}

std::string string(const json &v, const std::string &where) {
    if (!v.is_string()) {
        invalid(where + " must be a string");
    }
    return v.get<std::string>();
}

bool boolean(const json &v, const std::string &where) {
    if (!v.is_boolean()) {
        invalid(where + " must be a boolean");
    }
    return v.get<bool>();
}

complex complex_from(const json &v, const std::string &where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        invalid(where + " must be a [re, im] pair");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

json polarization_to_json(const PolarizationState &psi) {
    if (auto label = psi.exact_label()) {
        return *label;
    }
    return json{{"alpha", {psi.alpha().real(), psi.alpha().imag()}}, {"beta", {psi.beta().real(), psi.beta().imag()}}};
}

PolarizationState polarization_from_json(const json &v, const std::string &where) {
    if (v.is_string()) {
        try {
            return PolarizationState::from_label(v.get<std::string>());
        } catch (const Error &e) {
            invalid(where + ": " + e.what());
        }
    }
    reject_unknown(v, {"alpha", "beta"}, where);
    if (!v.contains("alpha") || !v.contains("beta")) {
        invalid(where + " needs alpha and beta");
    }
    try {
        return PolarizationState(complex_from(v["alpha"], where + ".alpha"), complex_from(v["beta"], where + ".beta"));
    } catch (const Error &e) {
        invalid(where + ": " + e.what());
    }
}

namespace {

PortRef port_from(const json &v, const std::string &where) {
    auto s = string(v, where);
    auto dot = s.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == s.size()) {
        invalid(where + " must look like 'component.port', got '" + s + "'");
    }
    return {s.substr(0, dot), s.substr(dot + 1)};
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

std::vector<std::string> param_keys(ComponentKind kind) {
    switch (kind) {
        case ComponentKind::Laser:
        case ComponentKind::PhotonSource:
            return {"polarization"};
        case ComponentKind::Pbs:
            return {"basis", "angle", "reflection_phase"};
        case ComponentKind::Hwp:
        case ComponentKind::Qwp:
            return {"angle"};
        case ComponentKind::Bbo:
            return {"geometry", "emission_probability", "relative_phase", "pump_wavelength_nm"};
        case ComponentKind::Apd:
            return {"efficiency", "dark_count_probability", "number_resolving", "herald_group"};
        case ComponentKind::BellSource:
            return {"state"};
        case ComponentKind::Smf:
        case ComponentKind::Prism:
            return {};
    }
    return {};
}

}  // namespace

std::vector<std::string> angle_params(ComponentKind kind) {
    switch (kind) {
        case ComponentKind::Pbs:
            return {"angle"};
        case ComponentKind::Hwp:
        case ComponentKind::Qwp:
            return {"angle"};
        default:
            return {};
    }
}

json params_to_json(const ComponentInstance &component) {
    return std::visit(
        [](const auto &p) -> json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, LaserParams> || std::is_same_v<T, PhotonSourceParams>) {
                return {{"polarization", polarization_to_json(p.polarization)}};
            } else if constexpr (std::is_same_v<T, PbsParams>) {
                return {{"basis", p.basis == optics::PbsBasis::HV ? "HV" : "DA"},
                        {"angle", p.angle.deg()},
                        {"reflection_phase", p.reflection_phase.deg()}};
            } else if constexpr (std::is_same_v<T, WaveplateParams>) {
                return {{"angle", p.angle.deg()}};
            } else if constexpr (std::is_same_v<T, BboParams>) {
                return {{"geometry", p.geometry == optics::SpdcGeometry::SingleCrystal ? "single" : "crossed"},
                        {"emission_probability", p.emission_probability},
                        {"relative_phase", p.relative_phase.deg()},
                        {"pump_wavelength_nm", p.pump_wavelength_nm}};
            } else if constexpr (std::is_same_v<T, ApdParams>) {
                json j{{"efficiency", p.efficiency},
                       {"dark_count_probability", p.dark_count_probability},
                       {"number_resolving", p.number_resolving}};
                if (!p.herald_group.empty()) {
                    j["herald_group"] = p.herald_group;
                }
                return j;
            } else if constexpr (std::is_same_v<T, BellSourceParams>) {
                return {{"state", optics::bell_state_name(p.state)}};
            } else {
                return json::object();
            }
        },
        component.params);
}

ComponentParams params_from_json(ComponentKind kind, const json &params, std::string_view component_id) {
    const std::string where = "component '" + std::string(component_id) + "' params";
    if (!params.is_object()) {
        invalid(where + " must be a JSON object");
    }
    auto keys = param_keys(kind);
    for (const auto &[key, value] : params.items()) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            invalid(where + ": unknown field '" + key + "' for kind '" + std::string(kind_name(kind)) + "'");
        }
    }
    ComponentParams out = default_params(kind);
    std::visit(
        [&](auto &p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, LaserParams> || std::is_same_v<T, PhotonSourceParams>) {
                if (params.contains("polarization")) {
                    p.polarization = polarization_from_json(params["polarization"], where + ".polarization");
                }
            } else if constexpr (std::is_same_v<T, PbsParams>) {
                if (params.contains("basis")) {
                    auto b = string(params["basis"], where + ".basis");
                    if (b != "HV" && b != "DA") {
                        invalid(where + ".basis must be 'HV' or 'DA'");
                    }
                    p.basis = b == "HV" ? optics::PbsBasis::HV : optics::PbsBasis::DA;
                }
                if (params.contains("angle")) {
                    p.angle = Angle::degrees(number(params["angle"], where + ".angle"));
                }
                if (params.contains("reflection_phase")) {
                    p.reflection_phase = Angle::degrees(number(params["reflection_phase"], where + ".reflection_phase"));
                }
            } else if constexpr (std::is_same_v<T, WaveplateParams>) {
                if (params.contains("angle")) {
                    p.angle = Angle::degrees(number(params["angle"], where + ".angle"));
                }
            } else if constexpr (std::is_same_v<T, BboParams>) {
                if (params.contains("geometry")) {
                    auto g = string(params["geometry"], where + ".geometry");
                    if (g != "single" && g != "crossed") {
                        invalid(where + ".geometry must be 'single' or 'crossed'");
                    }
                    p.geometry = g == "single" ? optics::SpdcGeometry::SingleCrystal : optics::SpdcGeometry::CrossedPair;
                }
                if (params.contains("emission_probability")) {
                    p.emission_probability = number(params["emission_probability"], where + ".emission_probability");
                }
                if (params.contains("relative_phase")) {
                    p.relative_phase = Angle::degrees(number(params["relative_phase"], where + ".relative_phase"));
                }
                if (params.contains("pump_wavelength_nm")) {
                    p.pump_wavelength_nm = number(params["pump_wavelength_nm"], where + ".pump_wavelength_nm");
                }
            } else if constexpr (std::is_same_v<T, ApdParams>) {
                if (params.contains("efficiency")) {
                    p.efficiency = number(params["efficiency"], where + ".efficiency");
                }
                if (params.contains("dark_count_probability")) {
                    p.dark_count_probability =
                        number(params["dark_count_probability"], where + ".dark_count_probability");
                }
                if (params.contains("number_resolving")) {
                    p.number_resolving = boolean(params["number_resolving"], where + ".number_resolving");
                }
                if (params.contains("herald_group")) {
                    p.herald_group = string(params["herald_group"], where + ".herald_group");
                }
            } else if constexpr (std::is_same_v<T, BellSourceParams>) {
                if (params.contains("state")) {
                    try {
                        p.state = optics::bell_state_from_name(string(params["state"], where + ".state"));
                    } catch (const Error &e) {
                        invalid(where + ": " + e.what());
                    }
                }
            }
        },
        out);
    return out;
}

Scene scene_from_json(const json &doc) {
    reject_unknown(doc, {"schema_version", "components", "links", "sources", "detectors", "layout"}, "scene");
    Scene scene;
    if (!doc.contains("schema_version")) {
        invalid("scene: missing schema_version");
    }
    scene.schema_version = string(doc["schema_version"], "schema_version");
    if (scene.schema_version != kSceneSchemaVersion) {
        throw Error(ErrorCode::Version, "unsupported schema_version '" + scene.schema_version + "' (expected '" +
                                            std::string(kSceneSchemaVersion) + "')");
    }
    if (!doc.contains("components") || !doc["components"].is_array()) {
        invalid("scene: components must be an array");
    }
    for (const auto &c : doc["components"]) {
        reject_unknown(c, {"id", "kind", "params", "angle_step"}, "component");
        if (!c.contains("id") || !c.contains("kind")) {
            invalid("component: id and kind are required");
        }
        ComponentInstance inst;
        inst.id = string(c["id"], "component.id");
        inst.kind = kind_from_name(string(c["kind"], "component '" + inst.id + "'.kind"));
        inst.params = params_from_json(inst.kind, c.value("params", json::object()), inst.id);
        if (c.contains("angle_step")) {
            inst.angle_step = number(c["angle_step"], "component '" + inst.id + "'.angle_step");
        }
        scene.components.push_back(std::move(inst));
    }
    if (doc.contains("links")) {
        if (!doc["links"].is_array()) {
            invalid("scene: links must be an array");
        }
        for (const auto &l : doc["links"]) {
            reject_unknown(l, {"from", "to"}, "link");
            if (!l.contains("from") || !l.contains("to")) {
                invalid("link: from and to are required");
            }
            scene.links.push_back({port_from(l["from"], "link.from"), port_from(l["to"], "link.to")});
        }
    }
    for (const auto *key : {"sources", "detectors"}) {
        if (!doc.contains(key)) {
            continue;
        }
        if (!doc[key].is_array()) {
            invalid(std::string("scene: ") + key + " must be an array");
        }
        auto &target = std::string_view(key) == "sources" ? scene.sources : scene.detectors;
        for (const auto &v : doc[key]) {
            target.push_back(string(v, key));
        }
    }
    if (doc.contains("layout")) {
        if (!doc["layout"].is_object()) {
            invalid("scene: layout must be an object");
        }
        for (const auto &[id, v] : doc["layout"].items()) {
            if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
                invalid("layout entry for '" + id + "' must be [x, y] in meters");
            }
            scene.layout[id] = {v[0].get<double>(), v[1].get<double>()};
        }
    }
    validate_scene(scene);
    return scene;
}

Scene load_scene(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        auto [line, col] = line_column(text, e.byte);
        throw Error(ErrorCode::Parse, "scene parse error at line " + std::to_string(line) + ", column " +
                                          std::to_string(col) + ": " + e.what());
    }
    return scene_from_json(doc);
}

json scene_to_json(const Scene &scene) {
    json components = json::array();
    for (const auto &c : scene.components) {
        components.push_back(
            {{"id", c.id}, {"kind", kind_name(c.kind)}, {"params", params_to_json(c)}, {"angle_step", c.angle_step}});
    }
    json links = json::array();
    for (const auto &l : scene.links) {
        links.push_back({{"from", l.from.str()}, {"to", l.to.str()}});
    }
    json layout = json::object();
    for (const auto &[id, p] : scene.layout) {
        layout[id] = {p.x, p.y};
    }
    return {{"schema_version", scene.schema_version},
            {"components", components},
            {"links", links},
            {"sources", scene.sources},
            {"detectors", scene.detectors},
            {"layout", layout}};
}

std::string serialize_scene(const Scene &scene) { return scene_to_json(scene).dump(2) + "\n"; }

std::string scene_hash(const Scene &scene) {
    std::string canonical = scene_to_json(scene).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void set_param(Scene &scene, std::string_view component_id, std::string_view param, const json &value) {
    auto *c = scene.find(component_id);
    if (c == nullptr) {
        throw Error(ErrorCode::Reference, "no component with id '" + std::string(component_id) + "'");
    }
    if (param == "angle_step") {
        double step = number(value, "angle_step");
        if (!(step > 0.0)) {
            invalid("angle_step must be positive");
        }
        c->angle_step = step;
        return;
    }
    auto keys = param_keys(c->kind);
    if (std::find(keys.begin(), keys.end(), param) == keys.end()) {
        throw Error(ErrorCode::Reference, "component '" + c->id + "' (" + std::string(kind_name(c->kind)) +
                                              ") has no parameter '" + std::string(param) + "'");
    }
    json patched = params_to_json(*c);
    patched[std::string(param)] = value;
    ComponentInstance updated = *c;
    updated.params = params_from_json(c->kind, patched, c->id);
    Scene trial = scene;
    *trial.find(component_id) = updated;
    validate_scene(trial);
    *c = std::move(updated);
}

}  // namespace qbench::bench
