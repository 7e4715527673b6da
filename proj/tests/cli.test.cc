// Copyright 2026 The spinmbqc Authors
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

#include "spinmbqc/cli.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"

using namespace spinmbqc;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path &p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string &name) {
    auto dir = std::filesystem::temp_directory_path() / ("spinmbqc_cli_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::vector<std::string> csv_lines(const std::string &text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        lines.push_back(line);
    }
    return lines;
}

}  // namespace

TEST(cli, validate) {
    auto r = cli({"validate", "IZI -> ZXI -> IZX -> IXI"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "valid\n");
    r = cli({"validate", "IX -> ZX"});
    EXPECT_NE(r.code, 0);
    EXPECT_NE(r.out.find("violation at step 2"), std::string::npos);
    EXPECT_EQ(cli({"validate", "IX ->"}).code, 2);
}

TEST(cli, derive) {
    auto r = cli({"derive", "IY -> YX -> IZ"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["label"], "HX");
    EXPECT_EQ(j["unitary"], true);

    r = cli({"derive", "IX -> ZX"});
    ASSERT_EQ(r.code, 0);
    j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["unitary"], false);

    r = cli({"derive", "IZI -> ZXI -> IZX -> IXI", "--outcomes", "0110"});
    ASSERT_EQ(r.code, 0);
    j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["label"], "CNOT");
    EXPECT_EQ(j["U"].size(), 4u);
    EXPECT_EQ(j["unitary"], true);

    EXPECT_EQ(cli({"derive", "IY -> YX -> IZ", "--outcomes", "01"}).code, 2);
}

TEST(cli, run) {
    auto r = cli({"run", "hadamard", "--input", "0", "--seed", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_GT(j["fidelity"].get<double>(), 1 - 1e-12);

    r = cli({"run", "entangle-asym", "--input", "00", "--seed", "5"});
    ASSERT_EQ(r.code, 0) << r.err;
    j = nlohmann::json::parse(r.out);
    EXPECT_GT(j["fidelity"].get<double>(), 1 - 1e-12);
    auto amps = j["corrected_state"];
    EXPECT_NEAR(amps[0][0].get<double>(), 1 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(amps[3][0].get<double>(), -1 / std::sqrt(2.0), 1e-12);

    EXPECT_EQ(cli({"run", "entangle-asym", "--seed", "9", "--input", "random"}).out,
              cli({"run", "entangle-asym", "--seed", "9", "--input", "random"}).out);
    EXPECT_EQ(cli({"run", "entangle-asym", "--input", "22"}).code, 2);
    EXPECT_EQ(cli({"run", "entangle-asym", "--seed", "-1"}).code, 2);
    EXPECT_EQ(cli({"run", "entangle-asym", "--asym-model", "fuzzy"}).code, 2);
}

TEST(cli, montecarlo_outputs) {
    auto dir = scratch("mc");
    auto r = cli({"montecarlo", "--trials", "200", "--ej-max", "0.01", "--seed", "4", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char *f : {"measurements.csv", "infidelity.csv", "leakage.csv", "trials.csv", "summary.json",
                          "effective_config.json"}) {
        EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
    }
    auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    double mean = summary["mean_measurements"].get<double>();
    EXPECT_GE(mean, 3);
    EXPECT_LE(mean, 5);
    EXPECT_EQ(csv_lines(slurp(dir / "trials.csv")).size(), 201u);

    // Re-running from the effective config reproduces every artifact.
    auto dir2 = scratch("mc2");
    auto cfg = nlohmann::json::parse(slurp(dir / "effective_config.json"));
    cfg["out"] = dir2.string();
    std::ofstream(dir2 / "cfg.json") << cfg.dump();
    r = cli({"montecarlo", "--config", (dir2 / "cfg.json").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char *f : {"measurements.csv", "infidelity.csv", "leakage.csv", "trials.csv", "summary.json"}) {
        EXPECT_EQ(slurp(dir / f), slurp(dir2 / f)) << f;
    }
    std::filesystem::remove_all(dir);
    std::filesystem::remove_all(dir2);
}

TEST(cli, montecarlo_single_trial) {
    auto dir = scratch("mc1");
    auto r = cli({"montecarlo", "--trials", "1", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(csv_lines(slurp(dir / "trials.csv")).size(), 2u);
    std::filesystem::remove_all(dir);
}

TEST(cli, config_rules) {
    auto dir = scratch("cfg");
    std::ofstream(dir / "bad.json") << R"({"seed": 1, "colour": "red"})";
    EXPECT_EQ(cli({"run", "--config", (dir / "bad.json").string()}).code, 2);
    std::ofstream(dir / "typed.json") << R"({"seed": "one"})";
    EXPECT_EQ(cli({"run", "--config", (dir / "typed.json").string()}).code, 2);
    std::ofstream(dir / "ok.json") << R"({"seed": 1, "input": "random", "protocol": "entangle-exact"})";
    auto from_file = cli({"run", "--config", (dir / "ok.json").string()});
    auto flag_override = cli({"run", "--config", (dir / "ok.json").string(), "--seed", "2"});
    auto direct = cli({"run", "entangle-exact", "--input", "random", "--seed", "2"});
    ASSERT_EQ(from_file.code, 0) << from_file.err;
    EXPECT_NE(from_file.out, flag_override.out);
    EXPECT_EQ(flag_override.out, direct.out);
    EXPECT_EQ(cli({"montecarlo", "--trials", "5"}).code, 2);
    EXPECT_EQ(cli({"frobnicate"}).code, 2);
    EXPECT_EQ(cli({}).code, 2);
    std::filesystem::remove_all(dir);

    RunConfig c = RunConfig::defaults();
    EXPECT_THROW(c.merge(nlohmann::json{{"unknown", 1}}), ConfigError);
    EXPECT_THROW(c.set_from_text("ej-max", "0.01x"), ConfigError);
    c.set_from_text("ej-max", "0.02");
    EXPECT_DOUBLE_EQ(c.error_model().ej_max, 0.02);
}

TEST(cli, compile) {
    auto r = cli({"compile", "entangle-asym", "--layout", "ideal"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    for (const auto &step : j["steps"]) {
        EXPECT_FALSE(step.contains("swap_chain"));
    }
    auto dir = scratch("compile");
    r = cli({"compile", "entangle-asym", "--layout", "linear", "--out", (dir / "s.json").string(), "--verify", "50"});
    ASSERT_EQ(r.code, 0) << r.err;
    j = nlohmann::json::parse(slurp(dir / "s.json"));
    int swaps = 0;
    for (const auto &step : j["steps"]) {
        swaps += step.contains("swap_chain") ? 1 : 0;
    }
    EXPECT_GT(swaps, 0);
    EXPECT_NE(r.out.find("max deviation"), std::string::npos);
    double dev = std::stod(r.out.substr(r.out.find("deviation") + 10));
    EXPECT_LE(dev, 1e-10);
    EXPECT_EQ(cli({"compile", "hadamard"}).code, 2);
    EXPECT_EQ(cli({"compile", "entangle-asym", "--layout", "ring"}).code, 2);
    std::filesystem::remove_all(dir);
}
