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

#include "qbench/bench/scene.h"
#include "qbench/core/error.h"

namespace qbench::bench {

namespace {

class SceneBuilder {
   public:
    SceneBuilder &add(std::string id, ComponentKind kind, ComponentParams params, Point2 at) {
        scene_.components.push_back({id, kind, std::move(params), 5.0});
        scene_.layout[id] = at;
        return *this;
    }
    SceneBuilder &add(std::string id, ComponentKind kind, Point2 at) { return add(id, kind, default_params(kind), at); }
    SceneBuilder &link(const std::string &from, const std::string &to) {
        auto split = [](const std::string &s) {
            auto dot = s.find('.');
            return PortRef{s.substr(0, dot), s.substr(dot + 1)};
        };
        scene_.links.push_back({split(from), split(to)});
        return *this;
    }
    SceneBuilder &source(std::string id) {
        scene_.sources.push_back(std::move(id));
        return *this;
    }
    SceneBuilder &detector(std::string id) {
        scene_.detectors.push_back(std::move(id));
        return *this;
    }
    Scene build() {
        validate_scene(scene_);
        return scene_;
    }

   private:
    Scene scene_;
};

WaveplateParams plate(double degrees) { return {Angle::degrees(degrees)}; }

PbsParams pbs(optics::PbsBasis basis, double angle_degrees = 0.0) {
    PbsParams p;
    p.basis = basis;
    p.angle = Angle::degrees(angle_degrees);
    return p;
}

ApdParams apd(std::string group = {}) {
    ApdParams p;
    p.herald_group = std::move(group);
    return p;
}

Scene heralded() {
    BboParams bbo;
    return SceneBuilder()
        .add("laser", ComponentKind::Laser, LaserParams{PolarizationState::from_label("V")}, {0.0, 0.0})
        .add("pump_pbs", ComponentKind::Pbs, pbs(optics::PbsBasis::HV, 90.0), {0.4, 0.0})
        .add("pump_hwp", ComponentKind::Hwp, plate(0.0), {0.7, 0.0})
        .add("bbo", ComponentKind::Bbo, bbo, {1.0, 0.0})
        .add("herald", ComponentKind::Apd, apd("herald"), {1.6, 0.3})
        .add("fiber", ComponentKind::Smf, {1.6, -0.3})
        .link("laser.out", "pump_pbs.in1")
        .link("pump_pbs.out1", "pump_hwp.in")
        .link("pump_hwp.out", "bbo.pump")
        .link("bbo.idler", "herald.in")
        .link("bbo.signal", "fiber.in")
        .source("laser")
        .detector("herald")
        .build();
}

Scene single_qubit_gate() {
    return SceneBuilder()
        .add("source", ComponentKind::PhotonSource, PhotonSourceParams{}, {0.0, 0.0})
        .add("qwp1", ComponentKind::Qwp, plate(0.0), {0.3, 0.0})
        .add("hwp", ComponentKind::Hwp, plate(0.0), {0.5, 0.0})
        .add("qwp2", ComponentKind::Qwp, plate(0.0), {0.7, 0.0})
        .add("fiber", ComponentKind::Smf, {1.0, 0.0})
        .link("source.out", "qwp1.in")
        .link("qwp1.out", "hwp.in")
        .link("hwp.out", "qwp2.in")
        .link("qwp2.out", "fiber.in")
        .source("source")
        .build();
}

Scene projective_measurement() {
    return SceneBuilder()
        .add("source", ComponentKind::PhotonSource, PhotonSourceParams{}, {0.0, 0.0})
        .add("prep_qwp1", ComponentKind::Qwp, plate(0.0), {0.3, 0.0})
        .add("prep_hwp", ComponentKind::Hwp, plate(0.0), {0.5, 0.0})
        .add("prep_qwp2", ComponentKind::Qwp, plate(0.0), {0.7, 0.0})
        .add("analysis_qwp", ComponentKind::Qwp, plate(0.0), {1.0, 0.0})
        .add("analysis_hwp", ComponentKind::Hwp, plate(0.0), {1.2, 0.0})
        .add("pbs", ComponentKind::Pbs, pbs(optics::PbsBasis::HV), {1.5, 0.0})
        .add("det_h", ComponentKind::Apd, apd(), {1.9, 0.0})
        .add("det_v", ComponentKind::Apd, apd(), {1.5, -0.4})
        .link("source.out", "prep_qwp1.in")
        .link("prep_qwp1.out", "prep_hwp.in")
        .link("prep_hwp.out", "prep_qwp2.in")
        .link("prep_qwp2.out", "analysis_qwp.in")
        .link("analysis_qwp.out", "analysis_hwp.in")
        .link("analysis_hwp.out", "pbs.in1")
        .link("pbs.out1", "det_h.in")
        .link("pbs.out2", "det_v.in")
        .source("source")
        .detector("det_h")
        .detector("det_v")
        .build();
}

Scene entangled_pair() {
    BboParams bbo;
    bbo.geometry = optics::SpdcGeometry::CrossedPair;
    return SceneBuilder()
        .add("laser", ComponentKind::Laser, LaserParams{PolarizationState::from_label("V")}, {0.0, 0.0})
        .add("pump_pbs", ComponentKind::Pbs, pbs(optics::PbsBasis::HV, 90.0), {0.4, 0.0})
        .add("pump_hwp", ComponentKind::Hwp, plate(67.5), {0.7, 0.0})
        .add("bbo", ComponentKind::Bbo, bbo, {1.0, 0.0})
        .add("fiber_signal", ComponentKind::Smf, {1.6, -0.3})
        .add("fiber_idler", ComponentKind::Smf, {1.6, 0.3})
        .link("laser.out", "pump_pbs.in1")
        .link("pump_pbs.out1", "pump_hwp.in")
        .link("pump_hwp.out", "bbo.pump")
        .link("bbo.signal", "fiber_signal.in")
        .link("bbo.idler", "fiber_idler.in")
        .source("laser")
        .build();
}

Scene heralded_cnot() {
    using optics::PbsBasis;
    return SceneBuilder()
        .add("control", ComponentKind::PhotonSource, PhotonSourceParams{}, {0.0, 1.0})
        .add("control_qwp1", ComponentKind::Qwp, plate(0.0), {0.3, 1.0})
        .add("control_hwp", ComponentKind::Hwp, plate(0.0), {0.5, 1.0})
        .add("control_qwp2", ComponentKind::Qwp, plate(0.0), {0.7, 1.0})
        .add("target", ComponentKind::PhotonSource, PhotonSourceParams{}, {0.0, -1.0})
        .add("target_qwp1", ComponentKind::Qwp, plate(0.0), {0.3, -1.0})
        .add("target_hwp", ComponentKind::Hwp, plate(0.0), {0.5, -1.0})
        .add("target_qwp2", ComponentKind::Qwp, plate(0.0), {0.7, -1.0})
        .add("ancilla", ComponentKind::BellSource, BellSourceParams{}, {1.0, 0.0})
        .add("pbs1", ComponentKind::Pbs, pbs(PbsBasis::HV), {1.0, 1.0})
        .add("pbs2", ComponentKind::Pbs, pbs(PbsBasis::DA), {1.0, -1.0})
        .add("analyzer1", ComponentKind::Pbs, pbs(PbsBasis::DA), {1.0, 1.6})
        .add("analyzer2", ComponentKind::Pbs, pbs(PbsBasis::HV), {1.0, -1.6})
        .add("D1", ComponentKind::Apd, apd("a1"), {1.4, 1.6})
        .add("D2", ComponentKind::Apd, apd("a1"), {1.0, 2.0})
        .add("D3", ComponentKind::Apd, apd("a2"), {1.4, -1.6})
        .add("D4", ComponentKind::Apd, apd("a2"), {1.0, -2.0})
        .add("c_out", ComponentKind::Smf, {1.6, 1.0})
        .add("t_out", ComponentKind::Smf, {1.6, -1.0})
        .link("control.out", "control_qwp1.in")
        .link("control_qwp1.out", "control_hwp.in")
        .link("control_hwp.out", "control_qwp2.in")
        .link("control_qwp2.out", "pbs1.in1")
        .link("target.out", "target_qwp1.in")
        .link("target_qwp1.out", "target_hwp.in")
        .link("target_hwp.out", "target_qwp2.in")
        .link("target_qwp2.out", "pbs2.in1")
        .link("ancilla.a1", "pbs1.in2")
        .link("ancilla.a2", "pbs2.in2")
        .link("pbs1.out1", "c_out.in")
        .link("pbs1.out2", "analyzer1.in1")
        .link("pbs2.out1", "t_out.in")
        .link("pbs2.out2", "analyzer2.in1")
        .link("analyzer1.out1", "D1.in")
        .link("analyzer1.out2", "D2.in")
        .link("analyzer2.out1", "D3.in")
        .link("analyzer2.out2", "D4.in")
        .source("control")
        .source("target")
        .source("ancilla")
        .detector("D1")
        .detector("D2")
        .detector("D3")
        .detector("D4")
        .build();
}

}  // namespace

const std::vector<BuiltinInfo> &builtin_scenes() {
    static const std::vector<BuiltinInfo> kScenes{
        {"heralded", "Heralded photon production: a type-I SPDC pair where one photon announces the other"},
        {"single-qubit-gate", "Single-qubit gate: QWP, HWP, QWP plates rotate one photon's polarization"},
        {"projective-measurement", "Projective measurement: QHQ preparation, QWP+HWP analyzer, PBS and two APDs"},
        {"entangled-pair", "Entangled pair: crossed BBO crystals pumped at 45 degrees emit a Bell pair"},
        {"heralded-cnot", "Heralded C-NOT: two parity-check PBSs with an entangled ancilla pair, 1AO1 heralding"},
    };
    return kScenes;
}

Scene builtin_scene(std::string_view name) {
    if (name == "heralded") {
        return heralded();
    }
    if (name == "single-qubit-gate") {
        return single_qubit_gate();
    }
    if (name == "projective-measurement") {
        return projective_measurement();
    }
    if (name == "entangled-pair") {
        return entangled_pair();
    }
    if (name == "heralded-cnot") {
        return heralded_cnot();
    }
    throw Error(ErrorCode::Reference, "unknown builtin scene '" + std::string(name) + "'");
}

}  // namespace qbench::bench
