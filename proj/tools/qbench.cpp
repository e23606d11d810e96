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

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "qbench/core/error.h"
#include "qbench/experiments/experiments.h"
#include "qbench/optics/optics.h"
#include "qbench/service/server.h"

namespace {

using nlohmann::json;
using namespace qbench;

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Reference, "cannot read '" + path + "'");
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_output(const std::string &out, const std::string &text) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) {
        throw Error(ErrorCode::Reference, "cannot write '" + out + "'");
    }
    f << text;
}

/// Builtin name, or a path to a scene document.
std::pair<std::string, bench::Scene> resolve_scene(const std::string &spec) {
    for (const auto &b : bench::builtin_scenes()) {
        if (b.name == spec) {
            return {spec, bench::builtin_scene(spec)};
        }
    }
    if (std::filesystem::is_regular_file(spec)) {
        return {std::filesystem::path(spec).stem().string(), bench::load_scene(read_file(spec))};
    }
    throw Error(ErrorCode::Reference, "'" + spec + "' is neither a builtin scene nor a file");
}

/// "component.param=value"; the value is read as JSON when it parses, else
/// as a string.
void apply_override(bench::Scene &scene, const std::string &text) {
    const auto eq = text.find('=');
    const auto dot = text.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
        throw Error(ErrorCode::Validation, "override '" + text + "' is not component.param=value");
    }
    const std::string component = text.substr(0, dot);
    const std::string param = text.substr(dot + 1, eq - dot - 1);
    const std::string raw = text.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) {
        value = raw;
    }
    bench::set_param(scene, component, param, value);
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t> &flag) {
    if (flag) {
        return *flag;
    }
    if (const char *env = std::getenv("QBENCH_SEED"); env != nullptr && *env != '\0') {
        try {
            return std::stoull(env);
        } catch (const std::exception &) {
            throw Error(ErrorCode::Validation, "QBENCH_SEED must be an unsigned integer");
        }
    }
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

PolarizationState parse_state(const std::string &text) {
    json value = json::parse(text, nullptr, false);
    return bench::polarization_from_json(value.is_discarded() ? json(text) : value, "state");
}

json bloch_json(const BlochVector &b) { return {b.x, b.y, b.z}; }

json rho_json(const DensityMatrix2 &rho) {
    json m = json::array();
    for (int i = 0; i < 2; ++i) {
        json row = json::array();
        for (int j = 0; j < 2; ++j) {
            row.push_back({rho.matrix()(i, j).real(), rho.matrix()(i, j).imag()});
        }
        m.push_back(row);
    }
    return m;
}

json distribution_json(const std::string &name, const bench::Scene &scene, const bench::ExactResult &exact) {
    const auto dist = bench::outcome_distribution(exact);
    json patterns = json::object();
    for (const auto &[clicks, p] : dist.patterns) {
        patterns[dist.key(clicks)] = p;
    }
    json per_detector = json::object();
    for (std::size_t i = 0; i < dist.detectors.size(); ++i) {
        double mean = 0.0;
        for (const auto &[clicks, p] : dist.patterns) {
            mean += p * clicks[i];
        }
        per_detector[dist.detectors[i]] = mean;
    }
    json out{{"schema_version", "1"},
             {"scene", name},
             {"scene_hash", bench::scene_hash(scene)},
             {"detectors", dist.detectors},
             {"patterns", patterns},
             {"mean_clicks", per_detector},
             {"total", dist.total()}};
    if (dist.herald_probability) {
        out["herald_probability"] = *dist.herald_probability;
        out["success_probability"] = *dist.herald_probability;
    }
    json branches = json::array();
    for (const auto &b : exact.branches) {
        json snaps = json::object();
        for (const auto &[path, psi] : b.snapshots) {
            snaps[path] = bloch_json(bloch_from_state(psi));
        }
        branches.push_back({{"probability", b.probability}, {"bloch", snaps}});
    }
    out["branches"] = branches;
    return out;
}

// Input polarization of a C-NOT arm: the source state through its QHQ plates.
PolarizationState cnot_input(const bench::Scene &scene, const std::string &arm) {
    const auto &src = std::get<bench::PhotonSourceParams>(scene.at(arm).params).polarization;
    auto angle = [&](const std::string &id) { return std::get<bench::WaveplateParams>(scene.at(id).params).angle.rad(); };
    Jones u = optics::qhq_unitary(angle(arm + "_qwp1"), angle(arm + "_hwp"), angle(arm + "_qwp2"));
    return apply_jones(src, u);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"qbench: linear-optics quantum computing bench"};
    app.require_subcommand(1);

    auto *list = app.add_subcommand("list-scenes", "List the builtin experiments");
    bool list_json = false;
    list->add_flag("--json", list_json, "JSON output");

    auto *run = app.add_subcommand("run", "Run shots on a scene and emit the counts table");
    std::string run_scene;
    std::uint64_t shots = 1000;
    std::optional<std::uint64_t> seed;
    std::string format = "json";
    std::string out;
    std::string trace_out;
    std::vector<std::string> overrides;
    bool exact = false;
    run->add_option("scene", run_scene, "Builtin name or scene file")->required();
    run->add_option("--shots", shots, "Number of shots")->check(CLI::PositiveNumber);
    run->add_option("--seed", seed, "64-bit seed (default: $QBENCH_SEED, else random)");
    run->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    run->add_option("--out", out, "Output file (default stdout)");
    run->add_option("--trace", trace_out, "Write the per-shot event trace as JSON");
    run->add_option("--set", overrides, "component.param=value override")->take_all();
    run->add_flag("--exact", exact, "Exact outcome probabilities instead of sampling");

    auto *amps = app.add_subcommand("amplitudes", "Exact outcome probabilities per detector pattern");
    std::string amp_scene;
    std::vector<std::string> amp_overrides;
    std::vector<std::string> amp_inputs;
    amps->add_option("scene", amp_scene, "Builtin name or scene file")->required();
    amps->add_option("--set", amp_overrides, "component.param=value override")->take_all();
    amps->add_option("--input", amp_inputs, "source=STATE (H, V, D, A, R, L or JSON amplitudes)")->take_all();
    amps->add_option("--out", out, "Output file (default stdout)");

    auto *tomo = app.add_subcommand("tomography", "Reconstruct a prepared polarization state");
    std::string tomo_state = "H";
    std::optional<std::uint64_t> tomo_shots;
    tomo->add_option("--state", tomo_state, "Prepared state: H, V, D, A, R, L or {\"alpha\":[re,im],\"beta\":[re,im]}");
    tomo->add_option("--shots", tomo_shots, "Shots per setting (omit for exact probabilities)");
    tomo->add_option("--seed", seed, "64-bit seed (default: $QBENCH_SEED, else random)");
    tomo->add_option("--out", out, "Output file (default stdout)");

    auto *dec = app.add_subcommand("decompose", "QWP-HWP-QWP angles for a 2x2 unitary");
    std::string unitary_file;
    dec->add_option("file", unitary_file, "JSON [[a,b],[c,d]] with complex entries as [re,im]")->required();

    auto *cnot = app.add_subcommand("cnot", "Exact heralded C-NOT run or truth table");
    std::string control = "H";
    std::string target = "H";
    std::string bell = "phi+";
    bool table = false;
    cnot->add_option("--control", control, "Control input state");
    cnot->add_option("--target", target, "Target input state");
    cnot->add_option("--bell", bell, "Ancilla Bell state")->check(CLI::IsMember({"phi+", "phi-", "psi+", "psi-"}));
    cnot->add_flag("--table", table, "Emit the 4-row truth table as CSV");
    cnot->add_option("--out", out, "Output file (default stdout)");

    auto *serve = app.add_subcommand("serve", "Run the HTTP session service");
    int port = 8080;
    std::string bind = "127.0.0.1";
    std::uint64_t stream_shots = 50;
    serve->add_option("--port", port, "TCP port");
    serve->add_option("--bind", bind, "Bind address");
    serve->add_option("--stream-shots", stream_shots, "Shots per fire streamed individually");

    auto *exp = app.add_subcommand("export-scene", "Print a builtin scene document");
    std::string export_name;
    exp->add_option("name", export_name, "Builtin name")->required();
    exp->add_option("--out", out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (list->parsed()) {
            json j = json::array();
            for (const auto &b : bench::builtin_scenes()) {
                if (list_json) {
                    j.push_back({{"name", b.name}, {"description", b.description}});
                } else {
                    std::cout << b.name << "\t" << b.description << "\n";
                }
            }
            if (list_json) {
                std::cout << j.dump(2) << "\n";
            }
        } else if (run->parsed()) {
            auto [name, scene] = resolve_scene(run_scene);
            for (const auto &o : overrides) {
                apply_override(scene, o);
            }
            if (exact) {
                const auto result = bench::propagate_exact(scene);
                json j = distribution_json(name, scene, result);
                if (scene.find("c_out") != nullptr && scene.find("control") != nullptr) {
                    const auto &bp = std::get<bench::BellSourceParams>(scene.at("ancilla").params);
                    j["cnot"] = experiments::cnot_report_to_json(experiments::run_heralded_cnot(
                        cnot_input(scene, "control"), cnot_input(scene, "target"), bp.state));
                }
                write_output(out, j.dump(2) + "\n");
            } else {
                const std::uint64_t s = resolve_seed(seed);
                auto result = bench::propagate_sampled(scene, shots, s, !trace_out.empty());
                result.counts.scene = name;
                write_output(out, format == "csv" ? measure::counts_to_csv(result.counts)
                                                  : measure::counts_to_json(result.counts).dump(2) + "\n");
                if (!trace_out.empty()) {
                    write_output(trace_out, bench::trace_to_json(result.trace).dump() + "\n");
                }
            }
        } else if (amps->parsed()) {
            auto [name, scene] = resolve_scene(amp_scene);
            for (const auto &o : amp_overrides) {
                apply_override(scene, o);
            }
            for (const auto &in : amp_inputs) {
                const auto eq = in.find('=');
                if (eq == std::string::npos) {
                    throw Error(ErrorCode::Validation, "input '" + in + "' is not source=STATE");
                }
                json value = json::parse(in.substr(eq + 1), nullptr, false);
                if (value.is_discarded()) {
                    value = in.substr(eq + 1);
                }
                bench::set_param(scene, in.substr(0, eq), "polarization", value);
            }
            write_output(out, distribution_json(name, scene, bench::propagate_exact(scene)).dump(2) + "\n");
        } else if (tomo->parsed()) {
            const PolarizationState psi = parse_state(tomo_state);
            std::optional<std::uint64_t> s;
            if (tomo_shots) {
                s = resolve_seed(seed);
            }
            const auto report = experiments::run_tomography(psi, tomo_shots, s.value_or(0));
            json j{{"schema_version", "1"},
                   {"mode", tomo_shots ? "sampled" : "exact"},
                   {"prepared", {{"alpha", {psi.alpha().real(), psi.alpha().imag()}},
                                 {"beta", {psi.beta().real(), psi.beta().imag()}}}},
                   {"rho", rho_json(report.rho)},
                   {"bloch", bloch_json(report.rho.bloch())},
                   {"fidelity", report.fidelity}};
            if (s) {
                j["seed"] = *s;
                j["prng"] = std::string(Rng::kAlgorithm);
                j["shots_per_setting"] = *tomo_shots;
                json counts = json::array();
                for (const auto &c : report.counts) {
                    counts.push_back(measure::counts_to_json(c));
                }
                j["counts"] = counts;
            }
            write_output(out, j.dump(2) + "\n");
        } else if (dec->parsed()) {
            json doc;
            try {
                doc = json::parse(read_file(unitary_file));
            } catch (const json::parse_error &e) {
                throw Error(ErrorCode::Parse, e.what());
            }
            if (doc.is_object()) {
                doc = doc.at("matrix");
            }
            Jones u;
            try {
                for (int i = 0; i < 2; ++i) {
                    for (int j = 0; j < 2; ++j) {
                        const json &e = doc.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j));
                        u(i, j) = e.is_array() ? complex(e.at(0).get<double>(), e.at(1).get<double>())
                                               : complex(e.get<double>(), 0.0);
                    }
                }
            } catch (const json::exception &e) {
                throw Error(ErrorCode::Validation, std::string("matrix must be 2x2: ") + e.what());
            }
            const auto a = optics::qhq_decompose(u);
            json j{{"alpha_deg", a.alpha * 180.0 / kPi},
                   {"beta_deg", a.beta * 180.0 / kPi},
                   {"gamma_deg", a.gamma * 180.0 / kPi},
                   {"residual", a.residual}};
            std::cout << j.dump(2) << "\n";
        } else if (cnot->parsed()) {
            const auto b = optics::bell_state_from_name(bell);
            if (table) {
                write_output(out, experiments::truth_table_csv(experiments::cnot_truth_table(b)));
            } else {
                const auto report = experiments::run_heralded_cnot(parse_state(control), parse_state(target), b);
                write_output(out, experiments::cnot_report_to_json(report).dump(2) + "\n");
            }
        } else if (serve->parsed()) {
            service::ServiceConfig config;
            config.streamed_shots_per_fire = stream_shots;
            service::Server server(config);
            std::cerr << "qbench service on http://" << bind << ":" << port << "\n";
            if (!server.listen(bind, port)) {
                throw Error(ErrorCode::Configuration, "cannot bind " + bind + ":" + std::to_string(port));
            }
        } else if (exp->parsed()) {
            write_output(out, bench::serialize_scene(bench::builtin_scene(export_name)));
        }
    } catch (const Error &e) {
        std::cerr << "error[" << error_code_name(e.code()) << "]: " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const json::exception &e) {
        std::cerr << "error[validation]: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
