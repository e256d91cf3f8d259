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

// steanesim run|sweep|validate [flags]
//
// Exit codes: 0 ok, 1 validation failure, 2 configuration error,
// 3 capacity error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "steanesim/steanesim.hpp"

namespace {

using namespace steanesim;

constexpr int kExitOk = 0;
constexpr int kExitValidateFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCapacity = 3;

struct Flags {
    std::string config_path;
    std::string out;
    std::string engine;
    std::uint64_t seed = 0;
    unsigned jobs = 0;
    std::string preset;
    std::string p_list;
    std::string q_list;
    std::uint64_t n_traj = 0;
    std::string sequence;
    std::string sequence_order;
    std::string round_order;
    bool noisy_prep = true;
    bool noisy_measure = true;
    bool noisy_recovery = true;
    bool ideal_theta = false;
    bool record_timing = false;
};

struct Handles {
    CLI::Option* config = nullptr;
    CLI::Option* out = nullptr;
    CLI::Option* engine = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* jobs = nullptr;
    CLI::Option* preset = nullptr;
    CLI::Option* p = nullptr;
    CLI::Option* q = nullptr;
    CLI::Option* n_traj = nullptr;
    CLI::Option* sequence = nullptr;
    CLI::Option* sequence_order = nullptr;
    CLI::Option* round_order = nullptr;
    CLI::Option* noisy_prep = nullptr;
    CLI::Option* noisy_measure = nullptr;
    CLI::Option* noisy_recovery = nullptr;
    CLI::Option* ideal_theta = nullptr;
    CLI::Option* record_timing = nullptr;
};

Handles add_common(CLI::App* cmd, Flags& f) {
    Handles h;
    h.config = cmd->add_option("--config", f.config_path, "JSON configuration file");
    h.out = cmd->add_option("--out", f.out, "CSV output path (JSON written next to it)");
    h.engine = cmd->add_option("--engine", f.engine, "dense or mc");
    h.seed = cmd->add_option("--seed", f.seed, "base seed (required)");
    h.jobs = cmd->add_option("--jobs", f.jobs, "worker threads (default: all cores)");
    h.preset = cmd->add_option("--preset", f.preset, "depolarizing, x, y or z");
    h.p = cmd->add_option("--p", f.p_list, "comma-separated error probabilities");
    h.q = cmd->add_option("--q", f.q_list, "comma-separated QEC schemes");
    h.n_traj = cmd->add_option("--ntraj", f.n_traj, "Monte-Carlo trajectories per point");
    h.sequence = cmd->add_option("--sequence", f.sequence, "composite string over A and B");
    h.sequence_order = cmd->add_option("--sequence-order", f.sequence_order, "right_to_left or left_to_right");
    h.round_order = cmd->add_option("--round-order", f.round_order, "interleaved or grouped");
    h.noisy_prep = cmd->add_flag("--noisy-prep,!--no-noisy-prep", f.noisy_prep, "noisy state preparation");
    h.noisy_measure = cmd->add_flag("--noisy-measure,!--no-noisy-measure", f.noisy_measure, "noisy measurement");
    h.noisy_recovery = cmd->add_flag("--noisy-recovery,!--no-noisy-recovery", f.noisy_recovery, "noisy recovery gates");
    h.ideal_theta = cmd->add_flag("--ideal-theta,!--noisy-theta", f.ideal_theta, "perfectly encoded T-gadget ancilla");
    h.record_timing = cmd->add_flag("--record-timing", f.record_timing, "fill wall_seconds (breaks byte-identical reruns)");
    return h;
}

Config merged_config(const Flags& f, const Handles& h) {
    Config cfg = h.config->count() ? load_config(f.config_path) : Config{};
    auto& s = cfg.spec;
    if (h.out->count()) cfg.out = f.out;
    if (h.engine->count()) s.engine = parse_engine(f.engine);
    if (h.seed->count()) cfg.seed = f.seed;
    if (h.jobs->count()) cfg.jobs = f.jobs;
    if (h.preset->count()) s.preset = parse_preset(f.preset);
    if (h.p->count()) s.p_grid = parse_double_list(f.p_list, "p");
    if (h.q->count()) s.schemes = parse_int_list(f.q_list, "q");
    if (h.n_traj->count()) s.n_traj = f.n_traj;
    if (h.sequence->count()) s.sequence = f.sequence;
    if (h.sequence_order->count()) s.sequence_order = parse_sequence_order(f.sequence_order);
    if (h.round_order->count()) s.protocol.round_order = parse_round_order(f.round_order);
    if (h.noisy_prep->count()) s.flags.noisy_prep = f.noisy_prep;
    if (h.noisy_measure->count()) s.flags.noisy_measure = f.noisy_measure;
    if (h.noisy_recovery->count()) s.flags.noisy_recovery = f.noisy_recovery;
    if (h.ideal_theta->count()) s.flags.ideal_theta_ancilla = f.ideal_theta;
    if (h.record_timing->count()) s.record_timing = f.record_timing;
    cfg.finalize();
    return cfg;
}

std::string json_path_for(const std::string& csv_path) {
    std::filesystem::path p(csv_path);
    if (p.extension() == ".csv") return p.replace_extension(".json").string();
    return csv_path + ".json";
}

void emit(const Config& cfg, const std::vector<RunResult>& rows) {
    for (const auto& r : rows)
        if (r.low_confidence)
            std::cerr << "warning: low confidence at p=" << format_number(r.p) << " q=" << r.q << " (n_traj "
                      << r.n_traj << " < " << kMinConfidentTrajectories << ")\n";
    if (cfg.out.empty()) {
        write_csv(std::cout, rows);
        return;
    }
    std::ofstream csv(cfg.out);
    if (!csv) throw ConfigError("out: cannot write " + cfg.out);
    write_csv(csv, rows);
    const std::string jpath = json_path_for(cfg.out);
    std::ofstream js(jpath);
    if (!js) throw ConfigError("out: cannot write " + jpath);
    js << to_json(rows).dump(2) << '\n';
}

int cmd_run(const Config& cfg) {
    if (cfg.spec.p_grid.size() != 1 || cfg.spec.schemes.size() != 1)
        throw ConfigError("run: expects exactly one p and one q (use sweep for grids)");
    std::vector<RunResult> rows{run_point(cfg.spec, cfg.spec.p_grid[0], cfg.spec.schemes[0], cfg.effective_jobs())};
    attach_fractional_change(rows);
    emit(cfg, rows);
    return kExitOk;
}

int cmd_sweep(const Config& cfg) {
    emit(cfg, run_sweep(cfg.spec, cfg.effective_jobs()));
    return kExitOk;
}

int cmd_validate(const Config& cfg) {
    ValidateOptions opt;
    opt.decoder = cfg.spec.protocol.decoder;
    opt.sequence = cfg.spec.sequence;
    opt.n_traj = cfg.spec.n_traj;
    opt.seed = cfg.spec.seed;
    opt.jobs = cfg.effective_jobs();
    const ValidationReport report = run_validation(opt);
    for (const auto& c : report.checks)
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    std::cout << (report.all_pass() ? "validate: all checks passed" : "validate: FAILED") << '\n';
    return report.all_pass() ? kExitOk : kExitValidateFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Encoded single-qubit gates on the [[7,1,3]] code under Pauli noise"};
    app.require_subcommand(1);
    Flags run_flags, sweep_flags, validate_flags;
    CLI::App* run = app.add_subcommand("run", "simulate one (p, q) point");
    CLI::App* sweep = app.add_subcommand("sweep", "simulate a grid of (p, q) points");
    CLI::App* validate = app.add_subcommand("validate", "run the invariant suite");
    const Handles run_h = add_common(run, run_flags);
    const Handles sweep_h = add_common(sweep, sweep_flags);
    const Handles validate_h = add_common(validate, validate_flags);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }
    try {
        if (run->parsed()) return cmd_run(merged_config(run_flags, run_h));
        if (sweep->parsed()) return cmd_sweep(merged_config(sweep_flags, sweep_h));
        return cmd_validate(merged_config(validate_flags, validate_h));
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const std::bad_alloc&) {
        std::cerr << "capacity error: out of memory\n";
        return kExitCapacity;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::runtime_error& e) {  // ParseError and friends
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
}
