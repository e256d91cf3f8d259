// Copyright 2026 The steanesim Authors
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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "nlohmann/json.hpp"

namespace {

namespace fs = std::filesystem;

struct Result {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "steanesim_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

Result cli(const std::string& args) {
    static int counter = 0;
    const fs::path out = scratch("stdout_" + std::to_string(counter));
    const fs::path err = scratch("stderr_" + std::to_string(counter++));
    const std::string cmd =
        std::string(STEANESIM_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string l; std::getline(is, l);) out.push_back(l);
    return out;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
}

}  // namespace

TEST(cli, noiseless_run_prints_unit_fidelity) {
    const Result r = cli("run --seed 1 --p 0 --q 20 --sequence AB");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 2u);
    EXPECT_EQ(ls[0].rfind("engine,p_x,p_y,p_z,q,fidelity", 0), 0u);
    std::vector<std::string> f;
    std::istringstream row(ls[1]);
    for (std::string cell; std::getline(row, cell, ',');) f.push_back(cell);
    ASSERT_GE(f.size(), 7u);
    EXPECT_EQ(f[4], "20");
    EXPECT_NEAR(std::stod(f[5]), 1.0, 1e-9) << ls[1];
}

TEST(cli, unsupported_scheme_is_a_config_error) {
    const Result r = cli("run --seed 1 --p 1e-4 --q 7");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("q:"), std::string::npos) << r.err;
}

TEST(cli, missing_seed_is_a_config_error) {
    const Result r = cli("run --p 1e-4 --q 20 --sequence AB");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("seed"), std::string::npos) << r.err;
}

TEST(cli, bad_flag_values_are_config_errors) {
    EXPECT_EQ(cli("run --seed 1 --p 1e-4 --q 20 --engine gpu").code, 2);
    EXPECT_EQ(cli("run --seed 1 --p abc --q 20").code, 2);
    EXPECT_EQ(cli("run --seed 1 --p 1e-4,1e-3 --q 20").code, 2);
    EXPECT_EQ(cli("run --seed 1 --p 1e-4 --q 20 --sequence ABX").code, 2);
    EXPECT_EQ(cli("frobnicate").code, 2);
    EXPECT_EQ(cli("run --seed 1 --config /nonexistent.json").code, 2);
}

TEST(cli, unknown_config_key_rejected) {
    const fs::path cfg = scratch("unknown.json");
    write_file(cfg, R"({"seed": 1, "qec": [20]})");
    const Result r = cli("run --config " + cfg.string());
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("qec"), std::string::npos) << r.err;
}

TEST(cli, flags_override_config) {
    const fs::path cfg = scratch("override.json");
    write_file(cfg, R"({"seed": 1, "p": [1e-3], "q": [50], "sequence": "B", "preset": "z"})");
    const Result r = cli("run --config " + cfg.string() + " --q 0 --preset x");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto row = lines(r.out).at(1);
    EXPECT_EQ(row.rfind("dense,0.001,1e-10,1e-10,0,", 0), 0u) << row;
}

TEST(cli, sweep_writes_identical_csv_and_json_on_rerun) {
    const fs::path a = scratch("a.csv"), b = scratch("b.csv");
    const std::string args = "sweep --seed 3 --p 1e-3,1e-2 --q 50,20,0 --sequence AB --jobs 2 --out ";
    ASSERT_EQ(cli(args + a.string()).code, 0);
    ASSERT_EQ(cli(args + b.string()).code, 0);
    const std::string csv = slurp(a);
    EXPECT_EQ(csv, slurp(b));
    EXPECT_EQ(lines(csv).size(), 7u);

    const auto j = nlohmann::json::parse(slurp(scratch("a.json")));
    ASSERT_EQ(j.size(), 6u);
    EXPECT_EQ(j[3]["q"], 50);
    EXPECT_EQ(j[3]["D_vs_q50"].get<double>(), 0.0);
    EXPECT_EQ(j[5]["q"], 0);
    const auto row = lines(csv)[6];
    EXPECT_NE(row.find(",0," + nlohmann::json(j[5]["fidelity"]).dump() + ","), std::string::npos) << row;
}

TEST(cli, monte_carlo_run_reports_stderr) {
    const Result r = cli("run --engine mc --ntraj 40 --seed 5 --p 1e-2 --q 0 --sequence B --jobs 2");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto row = lines(r.out).at(1);
    EXPECT_EQ(row.rfind("mc,", 0), 0u);
    EXPECT_NE(row.find(",40,5,0,"), std::string::npos) << row;
}

TEST(cli, validate_passes_with_standard_decoder) {
    const Result r = cli("validate --seed 11 --ntraj 400 --sequence AB");
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_NE(r.out.find("validate: all checks passed"), std::string::npos);
}

TEST(cli, validate_fails_with_mutated_decoder) {
    const fs::path cfg = scratch("mutated.json");
    // Syndromes 3 and 5 point at swapped qubits.
    write_file(cfg, R"({"seed": 11, "n_traj": 400, "sequence": "AB", "decoder": [0, 1, 2, 5, 4, 3, 6, 7]})");
    const Result r = cli("validate --config " + cfg.string());
    EXPECT_EQ(r.code, 1) << r.out << r.err;
    EXPECT_NE(r.out.find("FAIL single-error correctability"), std::string::npos) << r.out;
}
