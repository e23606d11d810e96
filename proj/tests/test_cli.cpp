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


#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace {

using nlohmann::json;

struct Result {
    int code = -1;
    std::string out;
};

Result run(const std::string &args, const std::string &env = "QBENCH_SEED=") {
    const std::string cmd = env + " " + QBENCH_CLI + " " + args + " 2>/dev/null";
    Result r;
    FILE *pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        return r;
    }
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        r.out.append(buf.data(), n);
    }
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::filesystem::path temp_file(const std::string &name, const std::string &content) {
    const auto p = std::filesystem::temp_directory_path() / ("qbench_cli_" + name);
    std::ofstream(p) << content;
    return p;
}

TEST(Cli, ListScenes) {
    const auto r = run("list-scenes");
    ASSERT_EQ(r.code, 0);
    std::istringstream in(r.out);
    std::vector<std::string> names;
    for (std::string line; std::getline(in, line);) {
        const auto tab = line.find('\t');
        ASSERT_NE(tab, std::string::npos);
        EXPECT_GT(line.size(), tab + 1);
        names.push_back(line.substr(0, tab));
    }
    EXPECT_EQ(names, (std::vector<std::string>{"heralded", "single-qubit-gate", "projective-measurement",
                                               "entangled-pair", "heralded-cnot"}));
    EXPECT_EQ(run("list-scenes").out, r.out);
    EXPECT_EQ(json::parse(run("list-scenes --json").out).size(), 5u);
}

TEST(Cli, RunIsByteIdentical) {
    const auto a = run("run heralded --shots 1 --seed 1");
    const auto b = run("run heralded --shots 1 --seed 1");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    const auto doc = json::parse(a.out);
    EXPECT_EQ(doc.at("seed"), 1);
    EXPECT_EQ(doc.at("prng"), "splitmix64-ctr/1");
    EXPECT_EQ(doc.at("scene_hash").get<std::string>().size(), 16u);
    const auto c1 = run("run heralded-cnot --shots 500 --seed 3 --format csv");
    EXPECT_EQ(c1.out, run("run heralded-cnot --shots 500 --seed 3 --format csv").out);
    EXPECT_NE(c1.out.find("# seed=3\n"), std::string::npos);
}

TEST(Cli, SeedFromEnvironmentIsRecorded) {
    const auto a = run("run heralded --shots 100", "QBENCH_SEED=77");
    EXPECT_EQ(json::parse(a.out).at("seed"), 77);
    const auto r = run("run heralded --shots 100");
    ASSERT_EQ(r.code, 0);
    const auto seed = json::parse(r.out).at("seed").get<std::uint64_t>();
    EXPECT_EQ(run("run heralded --shots 100 --seed " + std::to_string(seed)).out, r.out);
}

TEST(Cli, OverrideConservesShots) {
    const auto r = run("run projective-measurement --shots 2000 --seed 4 --set prep_hwp.angle=22.5");
    ASSERT_EQ(r.code, 0);
    const auto doc = json::parse(r.out);
    const auto &d = doc.at("per_detector");
    EXPECT_EQ(d.at("det_h").get<int>() + d.at("det_v").get<int>(), 2000);
}

TEST(Cli, ExitCodes) {
    const auto bad = temp_file("bad.json", R"({"schema_version": "1", "components": [{"id": "x", "kind": "warp"}]})");
    EXPECT_EQ(run("run " + bad.string() + " --shots 1 --seed 1").code, 2);
    EXPECT_EQ(run("run heralded --shots 1 --seed 1 --set ghost.angle=3").code, 3);
    EXPECT_EQ(run("run heralded --shots 1 --seed 1 --set pump_hwp.spin=3").code, 3);
    EXPECT_EQ(run("run no-such-scene --shots 1").code, 3);
    EXPECT_EQ(run("tomography --state D --shots 0 --seed 1").code, 4);
    EXPECT_EQ(run("run heralded --shots 0").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
}

TEST(Cli, ExactCnotReport) {
    const auto r = run("run heralded-cnot --exact");
    ASSERT_EQ(r.code, 0);
    const auto doc = json::parse(r.out);
    EXPECT_NEAR(doc.at("cnot").at("success_probability").get<double>(), 0.25, 1e-10);
    EXPECT_NEAR(doc.at("herald_probability").get<double>(), 0.25, 1e-10);
}

TEST(Cli, Amplitudes) {
    const auto d = json::parse(run("amplitudes projective-measurement --input source=D").out);
    EXPECT_NEAR(d.at("patterns").at("det_h").get<double>(), 0.5, 1e-12);
    EXPECT_NEAR(d.at("patterns").at("det_v").get<double>(), 0.5, 1e-12);
    double total = 0.0;
    for (const auto &[k, v] : d.at("patterns").items()) {
        total += v.get<double>();
    }
    EXPECT_NEAR(total, 1.0, 1e-9);

    const auto c = json::parse(run("amplitudes heralded-cnot --input control=D").out);
    EXPECT_NEAR(c.at("herald_probability").get<double>(), 0.25, 1e-10);
    EXPECT_EQ(run("amplitudes heralded-cnot --input ghost=D").code, 3);
}

TEST(Cli, Tomography) {
    const auto exact = json::parse(run("tomography --state H").out);
    EXPECT_NEAR(exact.at("fidelity").get<double>(), 1.0, 1e-12);
    const auto sampled = run("tomography --state D --shots 1000000 --seed 2");
    ASSERT_EQ(sampled.code, 0);
    EXPECT_GT(json::parse(sampled.out).at("fidelity").get<double>(), 0.999);
    const auto custom = run(R"(tomography --state '{"alpha":[0.6,0],"beta":[0,0.8]}')");
    ASSERT_EQ(custom.code, 0);
    EXPECT_NEAR(json::parse(custom.out).at("fidelity").get<double>(), 1.0, 1e-10);
}

TEST(Cli, Decompose) {
    const auto id = temp_file("id.json", "[[[1,0],[0,0]],[[0,0],[1,0]]]");
    const auto r = run("decompose " + id.string());
    ASSERT_EQ(r.code, 0);
    EXPECT_LT(json::parse(r.out).at("residual").get<double>(), 1e-8);
    const auto had = temp_file("had.json", R"({"matrix": [[0.7071067811865476, 0.7071067811865476],
                                                          [0.7071067811865476, -0.7071067811865476]]})");
    EXPECT_LT(json::parse(run("decompose " + had.string()).out).at("residual").get<double>(), 1e-8);
    const auto bad = temp_file("bad_u.json", "[[1,1],[0,1]]");
    EXPECT_EQ(run("decompose " + bad.string()).code, 2);
}

TEST(Cli, CnotTableAndOutFile) {
    const auto r = run("cnot --table");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("control,target,output,success_probability,fidelity\n", 0), 0u);
    EXPECT_NE(r.out.find("V,H,VV,"), std::string::npos);
    const auto out = std::filesystem::temp_directory_path() / "qbench_cli_cnot.json";
    std::filesystem::remove(out);
    ASSERT_EQ(run("cnot --control D --target H --out " + out.string()).code, 0);
    std::ifstream in(out);
    const auto doc = json::parse(in);
    EXPECT_NEAR(doc.at("success_probability").get<double>(), 0.25, 1e-10);
}

TEST(Cli, ExportSceneRoundTrips) {
    const auto r = run("export-scene heralded-cnot");
    ASSERT_EQ(r.code, 0);
    const auto file = temp_file("cnot_scene.json", r.out);
    const auto a = json::parse(run("run " + file.string() + " --shots 300 --seed 9").out);
    const auto b = json::parse(run("run heralded-cnot --shots 300 --seed 9").out);
    EXPECT_EQ(a.at("per_detector"), b.at("per_detector"));
    EXPECT_EQ(a.at("scene_hash"), b.at("scene_hash"));
}

}  // namespace
