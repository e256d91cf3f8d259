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

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "steanesim/gadgets.hpp"
#include "steanesim/noise.hpp"
#include "steanesim/schedule.hpp"
#include "steanesim/steane.hpp"
#include "steanesim/trajectory.hpp"

namespace steanesim {

class MetricError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

enum class Engine { Dense, MonteCarlo };

inline std::string_view to_string(Engine e) { return e == Engine::Dense ? "dense" : "mc"; }

enum class Preset { Depolarizing, XDominant, YDominant, ZDominant, Custom };

inline std::string_view to_string(Preset p) {
    switch (p) {
        case Preset::Depolarizing: return "depolarizing";
        case Preset::XDominant: return "x";
        case Preset::YDominant: return "y";
        case Preset::ZDominant: return "z";
        case Preset::Custom: return "custom";
    }
    return "?";
}

/// D = (I_50 - I_q) / I_50; positive when the scheme with less QEC does better.
inline double fractional_change(double i50, double iq) {
    if (!(i50 > 0.0)) throw MetricError("fractional change is undefined for baseline infidelity " + std::to_string(i50));
    return (i50 - iq) / i50;
}

struct RunResult {
    Engine engine = Engine::Dense;
    double p = 0.0;  // grid value (dominant probability)
    double p_x = 0.0;
    double p_y = 0.0;
    double p_z = 0.0;
    int q = 50;
    double fidelity = 0.0;
    double infidelity = 1.0;
    std::optional<double> d_vs_q50;
    std::optional<double> d_over_p;
    double std_error = 0.0;
    std::uint64_t n_traj = 0;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
    std::uint64_t location_count = 0;
    bool low_confidence = false;
};

struct SweepSpec {
    Preset preset = Preset::Depolarizing;
    std::vector<double> p_grid{1e-6, 1e-5, 1e-4};
    std::array<double, 3> custom_weights{1.0, 1.0, 1.0};  // p_i = p * w_i under Preset::Custom
    std::vector<int> schemes{50, 20, 1, 0};
    std::string sequence{kDefaultSequence};
    SequenceOrder sequence_order = SequenceOrder::RightToLeft;
    EveryOtherOffset every_other = EveryOtherOffset::Even;
    steane::LogicalInput input;
    Engine engine = Engine::Dense;
    std::uint64_t n_traj = 10000;
    std::uint64_t seed = 0;
    NoiseModel flags;  // only the boolean switches are read
    ProtocolOptions protocol;
    bool record_timing = false;

    NoiseModel noise_at(double p) const {
        NoiseModel m;
        switch (preset) {
            case Preset::Depolarizing: m = NoiseModel::depolarizing(p); break;
            case Preset::XDominant: m = NoiseModel::dominant(PauliAxis::X, p); break;
            case Preset::YDominant: m = NoiseModel::dominant(PauliAxis::Y, p); break;
            case Preset::ZDominant: m = NoiseModel::dominant(PauliAxis::Z, p); break;
            case Preset::Custom:
                m = NoiseModel{.p_x = p * custom_weights[0], .p_y = p * custom_weights[1], .p_z = p * custom_weights[2]};
                break;
        }
        m.noisy_prep = flags.noisy_prep;
        m.noisy_measure = flags.noisy_measure;
        m.noisy_recovery = flags.noisy_recovery;
        m.ideal_theta_ancilla = flags.ideal_theta_ancilla;
        return m;
    }

    void validate() const {
        if (p_grid.empty()) throw UsageError("p: grid must not be empty");
        for (double p : p_grid) {
            if (!(p >= 0.0)) throw UsageError("p: probabilities must be non-negative");
            noise_at(p).validate();
        }
        if (schemes.empty()) throw UsageError("q: scheme list must not be empty");
        for (int q : schemes)
            if (!is_supported_scheme(q))
                throw UsageError("q: unsupported QEC scheme " + std::to_string(q) + " (expected one of 50,20,10,4,2,1,0)");
        if (engine == Engine::MonteCarlo && n_traj < 1) throw UsageError("n_traj: must be at least 1");
        for (double w : custom_weights)
            if (!(w >= 0.0)) throw UsageError("custom_weights: must be non-negative");
        (void)parse_sequence(sequence, sequence_order);
    }
};

/// One (p, q) point with either engine.
inline RunResult run_point(const SweepSpec& spec, double p, int q, unsigned mc_jobs = 1) {
    const auto start = std::chrono::steady_clock::now();
    const GateSequence seq = parse_sequence(spec.sequence, spec.sequence_order);
    const QecSchedule schedule = build_schedule(q, seq, spec.every_other);
    const NoiseModel noise = spec.noise_at(p);
    RunResult r;
    r.engine = spec.engine;
    r.p = p;
    r.p_x = noise.p_x;
    r.p_y = noise.p_y;
    r.p_z = noise.p_z;
    r.q = q;
    r.seed = spec.seed;
    r.location_count = schedule_locations(seq, schedule, noise, spec.protocol.round_order).channel_applications();
    if (spec.engine == Engine::Dense) {
        const ScheduleRun run = run_schedule(seq, schedule, noise, spec.input, spec.protocol);
        r.fidelity = run.fidelity;
    } else {
        const McEstimate est = mc_estimate(seq, schedule, noise, spec.input, spec.n_traj, spec.seed, mc_jobs, spec.protocol);
        r.fidelity = std::clamp(est.fidelity, 0.0, 1.0);
        r.std_error = est.std_error;
        r.n_traj = est.n_traj;
        r.low_confidence = est.low_confidence;
    }
    r.infidelity = 1.0 - r.fidelity;
    if (spec.record_timing)
        r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

/// Fills D against the q=50 row at the same p, and D/p. Rows without a
/// q=50 partner (or with a zero baseline) keep both fields empty.
inline void attach_fractional_change(std::vector<RunResult>& rows) {
    for (auto& r : rows) {
        r.d_vs_q50.reset();
        r.d_over_p.reset();
        auto base = std::find_if(rows.begin(), rows.end(), [&](const RunResult& b) { return b.q == 50 && b.p == r.p; });
        if (base == rows.end() || !(base->infidelity > 0.0)) continue;
        r.d_vs_q50 = fractional_change(base->infidelity, r.infidelity);
        if (r.p > 0.0) r.d_over_p = *r.d_vs_q50 / r.p;
    }
}

/// Runs every (p, q) point. Dense points are spread over `jobs` workers;
/// Monte-Carlo points run in turn with the workers shared by trajectories.
/// Rows come back in (p grid, scheme list) order whatever the scheduling.
inline std::vector<RunResult> run_sweep(const SweepSpec& spec, unsigned jobs = 1) {
    spec.validate();
    struct Key {
        double p;
        int q;
    };
    std::vector<Key> keys;
    for (double p : spec.p_grid)
        for (int q : spec.schemes) keys.push_back({p, q});
    std::vector<RunResult> rows(keys.size());
    jobs = std::max(1u, jobs);
    if (spec.engine == Engine::MonteCarlo || jobs == 1) {
        for (std::size_t i = 0; i < keys.size(); ++i) rows[i] = run_point(spec, keys[i].p, keys[i].q, jobs);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(keys.size());
        auto worker = [&] {
            for (std::size_t i = next++; i < keys.size(); i = next++) {
                try {
                    rows[i] = run_point(spec, keys[i].p, keys[i].q);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        };
        {
            std::vector<std::jthread> pool;
            for (unsigned j = 0; j < std::min<std::size_t>(jobs, keys.size()); ++j) pool.emplace_back(worker);
        }
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    attach_fractional_change(rows);
    return rows;
}

struct EngineComparison {
    double dense_fidelity = 0.0;
    double mc_fidelity = 0.0;
    double std_error = 0.0;
    double z_score = 0.0;
    bool pass = false;
};

/// Dense vs Monte-Carlo at one point. `mc_noise` defaults to `noise`; a
/// different model there is how the comparison's sensitivity is exercised.
inline EngineComparison compare_engines(const GateSequence& seq, const QecSchedule& schedule, const NoiseModel& noise,
                                        const steane::LogicalInput& input, std::uint64_t n_traj, std::uint64_t seed,
                                        unsigned jobs = 1, ProtocolOptions options = {},
                                        std::optional<NoiseModel> mc_noise = std::nullopt) {
    EngineComparison c;
    c.dense_fidelity = run_schedule(seq, schedule, noise, input, options).fidelity;
    const McEstimate est = mc_estimate(seq, schedule, mc_noise.value_or(noise), input, n_traj, seed, jobs, options);
    c.mc_fidelity = est.fidelity;
    c.std_error = est.std_error;
    const double diff = std::abs(c.dense_fidelity - c.mc_fidelity);
    if (c.std_error > 0.0) {
        c.z_score = diff / c.std_error;
        c.pass = c.z_score <= 3.0;
    } else {
        c.z_score = diff > 1e-9 ? INFINITY : 0.0;
        c.pass = diff <= 1e-9;
    }
    return c;
}

inline constexpr std::string_view kCsvHeader =
    "engine,p_x,p_y,p_z,q,fidelity,infidelity,D_vs_q50,D_over_p,stderr,n_traj,seed,wall_seconds,location_count";

inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv(std::ostream& out, const std::vector<RunResult>& rows) {
    out << kCsvHeader << '\n';
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
    for (const auto& r : rows) {
        out << to_string(r.engine) << ',' << format_number(r.p_x) << ',' << format_number(r.p_y) << ','
            << format_number(r.p_z) << ',' << r.q << ',' << format_number(r.fidelity) << ','
            << format_number(r.infidelity) << ',' << opt(r.d_vs_q50) << ',' << opt(r.d_over_p) << ','
            << format_number(r.std_error) << ',' << r.n_traj << ',' << r.seed << ',' << format_number(r.wall_seconds)
            << ',' << r.location_count << '\n';
    }
}

/// Same columns as the CSV; empty D fields become null.
inline nlohmann::ordered_json to_json(const std::vector<RunResult>& rows) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json o;
        o["engine"] = to_string(r.engine);
        o["p_x"] = r.p_x;
        o["p_y"] = r.p_y;
        o["p_z"] = r.p_z;
        o["q"] = r.q;
        o["fidelity"] = r.fidelity;
        o["infidelity"] = r.infidelity;
        o["D_vs_q50"] = r.d_vs_q50 ? nlohmann::ordered_json(*r.d_vs_q50) : nlohmann::ordered_json(nullptr);
        o["D_over_p"] = r.d_over_p ? nlohmann::ordered_json(*r.d_over_p) : nlohmann::ordered_json(nullptr);
        o["stderr"] = r.std_error;
        o["n_traj"] = r.n_traj;
        o["seed"] = r.seed;
        o["wall_seconds"] = r.wall_seconds;
        o["location_count"] = r.location_count;
        arr.push_back(std::move(o));
    }
    return arr;
}

}  // namespace steanesim
