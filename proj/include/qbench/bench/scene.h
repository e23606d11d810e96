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

#ifndef QBENCH_BENCH_SCENE_H
#define QBENCH_BENCH_SCENE_H

#include <map>
#include <nlohmann/json.hpp>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qbench/core/angle.h"
#include "qbench/optics/optics.h"

namespace qbench::bench {

enum class ComponentKind { Laser, Pbs, Hwp, Qwp, Bbo, Apd, Smf, Prism, PhotonSource, BellSource };

std::string_view kind_name(ComponentKind kind);
/// Throws Validation on an unknown name.
ComponentKind kind_from_name(std::string_view name);

struct LaserParams {
    PolarizationState polarization = PolarizationState::from_label("V");
    bool operator==(const LaserParams &) const = default;
};

struct PbsParams {
    optics::PbsBasis basis = optics::PbsBasis::HV;
    Angle angle;
    Angle reflection_phase = Angle::degrees(90.0);
    bool operator==(const PbsParams &) const = default;
};

struct WaveplateParams {
    Angle angle;
    bool operator==(const WaveplateParams &) const = default;
};

struct BboParams {
    optics::SpdcGeometry geometry = optics::SpdcGeometry::SingleCrystal;
    double emission_probability = 0.05;
    Angle relative_phase;
    double pump_wavelength_nm = 351.0;
    bool operator==(const BboParams &) const = default;
};

struct ApdParams {
    double efficiency = 1.0;
    double dark_count_probability = 0.0;
    bool number_resolving = true;
    /// Detectors sharing a group form one "one and only one" set. A shot is
    /// heralded when every group of the scene records exactly one click.
    std::string herald_group;

    optics::DetectorSpec spec() const { return {efficiency, dark_count_probability, number_resolving}; }
    bool operator==(const ApdParams &) const = default;
};

struct PassiveParams {
    bool operator==(const PassiveParams &) const = default;
};

struct PhotonSourceParams {
    PolarizationState polarization;
    bool operator==(const PhotonSourceParams &) const = default;
};

struct BellSourceParams {
    optics::BellState state = optics::BellState::PhiPlus;
    bool operator==(const BellSourceParams &) const = default;
};

using ComponentParams = std::variant<LaserParams, PbsParams, WaveplateParams, BboParams, ApdParams, PassiveParams,
                                     PhotonSourceParams, BellSourceParams>;

/// Default parameters for `kind`.
ComponentParams default_params(ComponentKind kind);

struct ComponentInstance {
    std::string id;
    ComponentKind kind = ComponentKind::Prism;
    ComponentParams params = PassiveParams{};
    /// Granularity of interactive angle changes, degrees.
    double angle_step = 5.0;

    bool operator==(const ComponentInstance &) const = default;
};

struct PortRef {
    std::string component;
    std::string port;

    std::string str() const { return component + "." + port; }
    bool operator==(const PortRef &) const = default;
    auto operator<=>(const PortRef &) const = default;
};

struct Link {
    PortRef from;
    PortRef to;
    bool operator==(const Link &) const = default;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point2 &) const = default;
};

struct Scene {
    std::string schema_version = "1";
    std::vector<ComponentInstance> components;
    std::vector<Link> links;
    std::vector<std::string> sources;
    std::vector<std::string> detectors;
    std::map<std::string, Point2> layout;

    const ComponentInstance *find(std::string_view id) const;
    ComponentInstance *find(std::string_view id);
    /// Throws Reference when absent.
    const ComponentInstance &at(std::string_view id) const;
    std::size_t index_of(std::string_view id) const;

    /// Link whose `from` is `port`, or nullptr.
    const Link *link_from(const PortRef &port) const;
    /// Link whose `to` is `port`, or nullptr.
    const Link *link_to(const PortRef &port) const;

    /// Declared herald groups in first-appearance order over `detectors`.
    std::vector<std::pair<std::string, std::vector<std::string>>> herald_groups() const;

    bool operator==(const Scene &) const = default;
};

const std::vector<std::string> &input_ports(ComponentKind kind);
const std::vector<std::string> &output_ports(ComponentKind kind);
bool is_source_kind(ComponentKind kind);

/// Checks every structural invariant; throws Validation (or Reference)
/// naming the offending component, port or link.
void validate_scene(const Scene &scene);

/// Component ids in a topological order; ties broken by declaration order.
std::vector<std::string> topological_order(const Scene &scene);

// ---------------------------------------------------------------------------
// Documents
// ---------------------------------------------------------------------------

inline constexpr std::string_view kSceneSchemaVersion = "1";

/// Parses and validates a UTF-8 JSON scene document. Unknown fields are
/// rejected. Parse errors carry line and column.
Scene load_scene(std::string_view text);
Scene scene_from_json(const nlohmann::json &doc);
nlohmann::json scene_to_json(const Scene &scene);
/// Pretty-printed document, angles in degrees, trailing newline.
std::string serialize_scene(const Scene &scene);

/// 16 hex digits of FNV-1a over the compact canonical document.
std::string scene_hash(const Scene &scene);

nlohmann::json params_to_json(const ComponentInstance &component);
ComponentParams params_from_json(ComponentKind kind, const nlohmann::json &params, std::string_view component_id);

/// Label string when the amplitudes are exactly a named state, else
/// {"alpha": [re, im], "beta": [re, im]}.
nlohmann::json polarization_to_json(const PolarizationState &psi);
/// Inverse of polarization_to_json; throws Validation naming `where`.
PolarizationState polarization_from_json(const nlohmann::json &value, const std::string &where = "polarization");

/// Replaces one parameter. Throws Reference for an unknown component or
/// parameter name and Validation for a bad value.
void set_param(Scene &scene, std::string_view component_id, std::string_view param, const nlohmann::json &value);

/// Names of parameters holding angles in degrees for `kind`.
std::vector<std::string> angle_params(ComponentKind kind);

// ---------------------------------------------------------------------------
// Builtin experiments
// ---------------------------------------------------------------------------

struct BuiltinInfo {
    std::string name;
    std::string description;
};

/// The five experiments in presentation order.
const std::vector<BuiltinInfo> &builtin_scenes();
/// Throws Reference for an unknown name.
Scene builtin_scene(std::string_view name);

}  // namespace qbench::bench

#endif
