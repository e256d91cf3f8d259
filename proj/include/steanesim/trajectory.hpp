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

// Monte-Carlo trajectories. Each trajectory runs the literal gadget circuits
// on a pure state (11 qubits for a stabilizer measurement, 14 for the T
// gadget), sampling one Pauli per noise location and one outcome per
// measurement.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include "steanesim/gadgets.hpp"
#include "steanesim/noise.hpp"
#include "steanesim/qstate.hpp"
#include "steanesim/schedule.hpp"
#include "steanesim/steane.hpp"

namespace steanesim {

/// Generator for trajectory `index` under `base`; depends on nothing else,
/// so any partition of trajectories over workers gives the same draws.
inline std::mt19937_64 trajectory_rng(std::uint64_t base, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

class TrajectorySampler {
public:
    TrajectorySampler(const NoiseModel& noise, ProtocolOptions options, std::mt19937_64& rng)
        : noise_(noise), options_(options), rng_(rng) {
        noise_.validate();
    }

    /// Samples I, X, Y or Z on one qubit.
    void noise_location(PureState& psi, int q) {
        if (noise_.is_noiseless()) return;
        const double u = uniform_(rng_);
        GateKind k;
        if (u < noise_.p_x) {
            k = GateKind::X;
        } else if (u < noise_.p_x + noise_.p_y) {
            k = GateKind::Y;
        } else if (u < noise_.total()) {
            k = GateKind::Z;
        } else {
            return;
        }
        psi.apply_matrix(q, gates::matrix(k));
    }

    void noisy_gate(PureState& psi, const GateOp& op) {
        apply_gate(psi, op);
        noise_location(psi, op.qubits[0]);
        if (op.arity() == 2) noise_location(psi, op.qubits[1]);
    }

    /// Samples a Z readout, projecting in place (the qubit stays in the register).
    int measure(PureState& psi, int q) {
        if (noise_.noisy_measure) noise_location(psi, q);
        return project(psi, q);
    }

    /// Runs a circuit; MeasureZ projects in place and appends to `outcomes`.
    void run(PureState& psi, const Circuit& circuit, std::vector<int>* outcomes = nullptr) {
        for (const auto& op : circuit) {
            switch (op.kind) {
                case GateKind::PrepZero:
                    if (project(psi, op.qubits[0]) == 1) psi.apply_matrix(op.qubits[0], gates::matrix(GateKind::X));
                    if (noise_.noisy_prep) noise_location(psi, op.qubits[0]);
                    break;
                case GateKind::MeasureZ: {
                    const int o = measure(psi, op.qubits[0]);
                    if (outcomes) outcomes->push_back(o);
                    break;
                }
                default: noisy_gate(psi, op); break;
            }
        }
    }

    int measure_stabilizer(PureState& block, const steane::StabilizerSpec& g) {
        PureState joint = block.tensor(PureState(circuits::kShorSize));
        std::vector<int> outcomes;
        run(joint, circuits::stabilizer_measurement(g), &outcomes);
        int bit = 0;
        for (int o : outcomes) bit ^= o;
        for (int i = circuits::kShorSize - 1; i >= 0; --i)
            joint.collapse_and_remove(steane::kBlockSize + i, outcomes[i]);
        block = std::move(joint);
        return bit;
    }

    void qec_cycle(PureState& block) {
        SyndromeRecord record;
        for (const auto& g : circuits::qec_measurement_order(options_.round_order))
            record.push(g.pauli_type, measure_stabilizer(block, g));
        if (auto pos = record.bit_flip.decision(options_.decoder)) recovery(block, GateKind::X, *pos - 1);
        if (auto pos = record.phase_flip.decision(options_.decoder)) recovery(block, GateKind::Z, *pos - 1);
    }

    PureState theta_state() {
        if (noise_.ideal_theta_ancilla) {
            const double a = std::numbers::pi / 4.0;
            return steane::encode_ideal({a, a});
        }
        PureState theta(steane::kBlockSize);
        run(theta, circuits::theta_preparation());
        return theta;
    }

    void t_gate_teleport(PureState& block) {
        PureState joint = block.tensor(theta_state());
        std::vector<int> outcomes;
        run(joint, circuits::t_teleport_coupling(), &outcomes);
        std::uint32_t m = 0;
        for (int q = steane::kBlockSize - 1; q >= 0; --q) {
            joint.collapse_and_remove(q, outcomes[q]);
            m |= static_cast<std::uint32_t>(outcomes[q]) << q;
        }
        block = std::move(joint);
        if (steane::classical_correct_and_parity(m) == 1) run(block, circuits::t_correction());
    }

    void logical_clifford(PureState& block, GateKind kind) { run(block, steane::transversal_circuit(kind)); }

private:
    int project(PureState& psi, int q) {
        const double p1 = std::clamp(psi.probability_one(q), 0.0, 1.0);
        const int outcome = uniform_(rng_) < p1 ? 1 : 0;
        const std::size_t bit = std::size_t{1} << q;
        auto amps = psi.amplitudes();
        const double keep = outcome ? p1 : 1.0 - p1;
        const double s = 1.0 / std::sqrt(keep);
        for (std::size_t k = 0; k < amps.size(); ++k) {
            if (((k & bit) != 0) == (outcome == 1)) {
                amps[k] *= s;
            } else {
                amps[k] = 0.0;
            }
        }
        return outcome;
    }

    void recovery(PureState& block, GateKind kind, int q) {
        if (noise_.noisy_recovery) {
            noisy_gate(block, GateOp::single(kind, q));
        } else {
            apply_gate(block, GateOp::single(kind, q));
        }
    }

    NoiseModel noise_;
    ProtocolOptions options_;
    std::mt19937_64& rng_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Final 7-qubit block of one sampled trajectory.
inline PureState run_trajectory(const GateSequence& seq, const QecSchedule& schedule, const NoiseModel& noise,
                                const steane::LogicalInput& input, ProtocolOptions options, std::mt19937_64& rng) {
    TrajectorySampler sampler(noise, options, rng);
    PureState block = steane::encode_ideal(input);
    for (std::size_t i = 0; i < seq.expanded.size(); ++i) {
        const GateKind k = seq.expanded[i];
        if (k == GateKind::T) {
            sampler.t_gate_teleport(block);
        } else {
            sampler.logical_clifford(block, k);
        }
        if (schedule.insertion_points.contains(i)) sampler.qec_cycle(block);
    }
    return block;
}

struct McEstimate {
    double fidelity = 0.0;
    double std_error = 0.0;
    std::uint64_t n_traj = 0;
    bool low_confidence = false;  // fewer than 100 trajectories
};

inline constexpr std::uint64_t kMinConfidentTrajectories = 100;

/// Mean overlap over n_traj trajectories. Trajectory t draws from
/// trajectory_rng(seed, t); per-trajectory overlaps are reduced in index
/// order, so the estimate does not depend on `jobs`.
inline McEstimate mc_estimate(const GateSequence& seq, const QecSchedule& schedule, const NoiseModel& noise,
                              const steane::LogicalInput& input, std::uint64_t n_traj, std::uint64_t seed,
                              unsigned jobs = 1, ProtocolOptions options = {}) {
    if (n_traj < 1) throw UsageError("n_traj must be at least 1");
    noise.validate();
    const PureState ideal = ideal_final_state(seq, input);
    std::vector<double> overlap(n_traj);
    auto work = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t t = begin; t < end; ++t) {
            auto rng = trajectory_rng(seed, t);
            overlap[t] = std::min(1.0, std::norm(ideal.inner(run_trajectory(seq, schedule, noise, input, options, rng))));
        }
    };
    jobs = std::max(1u, static_cast<unsigned>(std::min<std::uint64_t>(jobs, n_traj)));
    if (jobs == 1) {
        work(0, n_traj);
    } else {
        std::vector<std::jthread> pool;
        const std::uint64_t chunk = (n_traj + jobs - 1) / jobs;
        for (unsigned j = 0; j < jobs; ++j) {
            const std::uint64_t b = j * chunk, e = std::min(n_traj, b + chunk);
            if (b < e) pool.emplace_back(work, b, e);
        }
    }
    double sum = 0.0;
    for (double v : overlap) sum += v;
    const double mean = sum / static_cast<double>(n_traj);
    double ss = 0.0;
    for (double v : overlap) ss += (v - mean) * (v - mean);
    McEstimate out;
    out.fidelity = mean;
    out.n_traj = n_traj;
    out.std_error = n_traj > 1 ? std::sqrt(ss / static_cast<double>(n_traj - 1) / static_cast<double>(n_traj)) : 0.0;
    out.low_confidence = n_traj < kMinConfidentTrajectories;
    return out;
}

}  // namespace steanesim
