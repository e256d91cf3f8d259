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

// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--full-table] [--expected-fail N[,N...]] [--seed S] [--jobs J]
//
// Criterion 8 runs only with --full-table or STEANESIM_FULL_TABLE=1.
// Exit status is 0 when every failing criterion is listed in --expected-fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "steanesim/steanesim.hpp"

using namespace steanesim;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Options {
    bool full_table = false;
    std::set<int> expected_fail;
    std::uint64_t seed = 2026;
    unsigned jobs = 0;
};

std::string num(double x) { return format_number(x); }

SweepSpec depolarizing_spec(std::vector<double> p, std::vector<int> q) {
    SweepSpec s;
    s.preset = Preset::Depolarizing;
    s.p_grid = std::move(p);
    s.schemes = std::move(q);
    s.seed = 0;
    return s;
}

Outcome noiseless_transparency() {
    const GateSequence seq = parse_sequence(kDefaultSequence);
    Outcome o{true, ""};
    double worst = 0.0;
    for (int q : kSchemes) {
        const double f = run_schedule(seq, build_schedule(q, seq), NoiseModel::noiseless(), {}).fidelity;
        worst = std::max(worst, std::abs(1.0 - f));
    }
    o.pass = worst <= 1e-9;
    o.detail = "max |1-F| over 7 schemes " + num(worst);
    return o;
}

Outcome single_error_correctability() {
    const ValidationCheck c = check_single_error_correctability({});
    return {c.pass, c.detail};
}

Outcome t_gadget_identity() {
    std::mt19937_64 rng(46);
    std::uniform_real_distribution<double> u(0.0, std::numbers::pi);
    DenseProtocol dense(NoiseModel::noiseless());
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const steane::LogicalInput in{u(rng), 2.0 * u(rng)};
        PureState target = in.as_qubit();
        target.apply_matrix(0, gates::matrix(GateKind::T));
        const DensityMatrix out = dense.t_gate_teleport(DensityMatrix::from_pure(steane::encode_ideal(in)));
        worst = std::max(worst, std::abs(1.0 - fidelity(steane::encode_state(target), out)));
    }

    // One-qubit model: input on qubit 0, T-ancilla on qubit 1, CNOT 1 -> 0,
    // qubit 0 read as 1, then X and S on the survivor.
    const steane::LogicalInput in{0.7, 1.9};
    PureState joint = in.as_qubit().tensor(PureState::single_qubit(std::numbers::pi / 4, std::numbers::pi / 4));
    apply_gate(joint, GateOp::cnot(1, 0));
    joint.collapse_and_remove(0, 1);
    joint.apply_matrix(0, gates::matrix(GateKind::X));
    joint.apply_matrix(0, gates::matrix(GateKind::S));
    PureState target = in.as_qubit();
    target.apply_matrix(0, gates::matrix(GateKind::T));
    const double branch = std::abs(1.0 - fidelity(target, joint));

    Outcome o;
    o.pass = worst <= 1e-9 && branch <= 1e-12;
    o.detail = "max |1-F| over 10 inputs " + num(worst) + ", outcome-1 branch |1-F| " + num(branch);
    return o;
}

Outcome engine_agreement(const Options& opt) {
    const GateSequence seq = parse_sequence("AB");
    const auto c = compare_engines(seq, build_schedule(20, seq), NoiseModel::depolarizing(1e-2), {}, 100000,
                                   opt.seed, opt.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opt.jobs);
    return {c.pass, "dense " + num(c.dense_fidelity) + ", mc " + num(c.mc_fidelity) + " +- " + num(c.std_error) +
                        ", z " + num(c.z_score)};
}

Outcome linearity(unsigned jobs) {
    const auto rows = run_sweep(depolarizing_spec({1e-6, 1e-5}, {50}), jobs);
    const double ratio = rows[1].infidelity / rows[0].infidelity;
    return {ratio >= 9.0 && ratio <= 11.0,
            "I(1e-6)=" + num(rows[0].infidelity) + ", I(1e-5)=" + num(rows[1].infidelity) + ", ratio " + num(ratio)};
}

Outcome scheme_ordering(unsigned jobs) {
    const auto rows = run_sweep(depolarizing_spec({1e-4}, {50, 20, 10, 4, 2, 1, 0}), jobs);
    std::map<int, double> d;
    for (const auto& r : rows) d[r.q] = *r.d_vs_q50;
    const bool pass = d[20] > 0 && d[10] > 0 && d[4] < 0 && d[2] < 0 && d[1] < 0 && d[0] < -0.5;
    std::ostringstream os;
    os << "I50=" << num(rows[0].infidelity);
    for (int q : {20, 10, 4, 2, 1, 0}) os << ", D(" << q << ")=" << num(d[q]);
    return {pass, os.str()};
}

Outcome bit_flip_regime(unsigned jobs) {
    SweepSpec s = depolarizing_spec({1e-3}, {50, 0});
    s.preset = Preset::XDominant;
    const auto rows = run_sweep(s, jobs);
    const double d0 = *rows[1].d_vs_q50;
    return {d0 > 0.0, "I50=" + num(rows[0].infidelity) + ", I0=" + num(rows[1].infidelity) + ", D(0)=" + num(d0)};
}

// Depolarizing table: first row infidelity at q=50, other rows fractional change.
const std::map<int, std::array<double, 4>>& reference_table() {
    static const std::map<int, std::array<double, 4>> t{
        {50, {4.50e-5, 4.54e-4, 4.90e-3, 8.27e-2}},   {20, {7.54e-6, 7.55e-5, 7.62e-4, 7.85e-3}},
        {10, {2.76e-6, 2.80e-5, 3.13e-4, 4.97e-3}},   {4, {-1.94e-6, -1.89e-5, -1.39e-4, 1.52e-3}},
        {2, {-2.71e-6, -2.65e-5, -2.12e-4, 9.88e-4}}, {1, {-3.38e-6, -3.31e-5, -2.76e-4, 5.12e-4}},
        {0, {-1.02, -1.01, -0.941, -0.544}}};
    return t;
}

Outcome full_table(unsigned jobs) {
    const std::vector<double> ps{1e-6, 1e-5, 1e-4, 1e-3};
    const auto rows = run_sweep(depolarizing_spec(ps, {50, 20, 10, 4, 2, 1, 0}), jobs);
    const auto& ref = reference_table();
    bool pass = true;
    std::ostringstream os;
    os << "ratios simulated/reference infidelity:";
    for (const auto& r : rows) {
        const std::size_t col = static_cast<std::size_t>(std::find(ps.begin(), ps.end(), r.p) - ps.begin());
        const double i50 = ref.at(50)[col];
        const double expected = r.q == 50 ? i50 : i50 * (1.0 - ref.at(r.q)[col]);
        const double ratio = r.infidelity / expected;
        if (!(ratio >= 1.0 / 3.0 && ratio <= 3.0)) pass = false;
        os << "\n    p=" << num(r.p) << " q=" << r.q << " I=" << num(r.infidelity) << " ref=" << num(expected)
           << " ratio=" << num(ratio);
    }
    return {pass, os.str()};
}

std::set<int> parse_set(const std::string& text) {
    std::set<int> out;
    for (int v : parse_int_list(text, "expected-fail")) out.insert(v);
    return out;
}

Options parse_args(int argc, char** argv) {
    Options o;
    if (const char* env = std::getenv("STEANESIM_FULL_TABLE"); env && std::string(env) == "1") o.full_table = true;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        auto value = [&]() -> std::string {
            if (i + 1 >= argc) throw ConfigError(a + ": missing value");
            return argv[++i];
        };
        if (a == "--full-table") o.full_table = true;
        else if (a == "--expected-fail") o.expected_fail = parse_set(value());
        else if (a == "--seed") o.seed = std::stoull(value());
        else if (a == "--jobs") o.jobs = static_cast<unsigned>(std::stoul(value()));
        else throw ConfigError("unknown argument " + a);
    }
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    try {
        opt = parse_args(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
    const unsigned jobs = opt.jobs;
    std::vector<std::pair<int, std::function<Outcome()>>> criteria{
        {1, noiseless_transparency},
        {2, single_error_correctability},
        {3, t_gadget_identity},
        {4, [&] { return engine_agreement(opt); }},
        {5, [&] { return linearity(jobs); }},
        {6, [&] { return scheme_ordering(jobs); }},
        {7, [&] { return bit_flip_regime(jobs); }},
        {8, [&] { return full_table(jobs); }},
    };
    const char* names[] = {"",
                           "noiseless transparency",
                           "single-error correctability",
                           "T-gadget identity",
                           "dense vs mc agreement",
                           "small-p linearity",
                           "scheme ordering at p=1e-4",
                           "bit-flip regime favours no QEC",
                           "full depolarizing table"};
    int unexpected = 0;
    for (const auto& [id, run] : criteria) {
        std::cout << "criterion " << id << " (" << names[id] << "): ";
        if (id == 8 && !opt.full_table) {
            std::cout << "SKIP (opt-in: --full-table)\n";
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        const Outcome o = run();
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool expected = opt.expected_fail.contains(id);
        std::cout << (o.pass ? "PASS" : "FAIL") << (!o.pass && expected ? " (expected)" : "") << " [" << num(secs)
                  << " s] " << o.detail << std::endl;
        if (!o.pass && !expected) ++unexpected;
    }
    return unexpected == 0 ? 0 : 1;
}
