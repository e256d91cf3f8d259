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

// Nonequiprobable Pauli noise and the location policy: only qubits taking
// part in a gate, a preparation or a measurement are hit; idle qubits are
// stored perfectly. Errors follow the ideal gate; preparation noise follows
// the reset; measurement noise precedes the projection.

#include <array>
#include <cstdint>
#include <string>

#include "steanesim/qstate.hpp"

namespace steanesim {

inline constexpr double kBackgroundErrorRate = 1e-10;

enum class PauliAxis { X, Y, Z };

struct NoiseModel {
    double p_x = 0.0;
    double p_y = 0.0;
    double p_z = 0.0;
    bool noisy_prep = true;
    bool noisy_measure = true;
    bool noisy_recovery = true;
    bool ideal_theta_ancilla = false;

    static NoiseModel noiseless() { return {}; }

    static NoiseModel depolarizing(double p) { return {.p_x = p, .p_y = p, .p_z = p}; }

    /// One dominant Pauli type; the other two sit at the 1e-10 background.
    static NoiseModel dominant(PauliAxis axis, double p, double background = kBackgroundErrorRate) {
        NoiseModel m{.p_x = background, .p_y = background, .p_z = background};
        switch (axis) {
            case PauliAxis::X: m.p_x = p; break;
            case PauliAxis::Y: m.p_y = p; break;
            case PauliAxis::Z: m.p_z = p; break;
        }
        return m;
    }

    double total() const { return p_x + p_y + p_z; }
    bool is_noiseless() const { return p_x == 0.0 && p_y == 0.0 && p_z == 0.0; }

    void validate() const {
        if (!(p_x >= 0.0) || !(p_y >= 0.0) || !(p_z >= 0.0))
            throw UsageError("Pauli error probabilities must be non-negative");
        if (total() > 1.0) throw UsageError("p_x + p_y + p_z must not exceed 1");
    }

    bool operator==(const NoiseModel&) const = default;
};

/// Counts channel applications by location type.
struct LocationTally {
    std::uint64_t single_qubit_gates = 0;
    std::uint64_t cnots = 0;
    std::uint64_t preps = 0;
    std::uint64_t measurements = 0;

    /// One channel per single-qubit gate, prep and measurement; two per CNOT.
    std::uint64_t channel_applications() const { return single_qubit_gates + 2 * cnots + preps + measurements; }

    LocationTally& operator+=(const LocationTally& o) {
        single_qubit_gates += o.single_qubit_gates;
        cnots += o.cnots;
        preps += o.preps;
        measurements += o.measurements;
        return *this;
    }

    bool operator==(const LocationTally&) const = default;
};

/// rho -> (1-s) rho + p_x X rho X + p_y Y rho Y + p_z Z rho Z on one qubit.
inline void pauli_channel(DensityMatrix& rho, int qubit, const NoiseModel& noise) {
    noise.validate();
    rho.check_qubit(qubit);
    if (noise.is_noiseless()) return;
    const double flip = noise.p_x + noise.p_y;
    const double keep = 1.0 - flip;
    // Per 2x2 block [[a, b], [c, d]]: b' = (1 - s - p_z) b + (p_x - p_y) c.
    const double coh_same = 1.0 - noise.total() - noise.p_z;
    const double coh_swap = noise.p_x - noise.p_y;
    const int n = rho.num_qubits();
    const std::size_t d = rho.dim();
    const std::size_t bit = std::size_t{1} << qubit;
    auto e = rho.entries();
    for (std::size_t r = 0; r < d; ++r) {
        if (r & bit) continue;
        const std::size_t r1 = r | bit;
        for (std::size_t c = 0; c < d; ++c) {
            if (c & bit) continue;
            const std::size_t c1 = c | bit;
            cplx& a = e[(r << n) | c];
            cplx& b = e[(r << n) | c1];
            cplx& cc = e[(r1 << n) | c];
            cplx& dd = e[(r1 << n) | c1];
            const cplx a0 = a, b0 = b, c0 = cc, d0 = dd;
            a = keep * a0 + flip * d0;
            dd = flip * a0 + keep * d0;
            b = coh_same * b0 + coh_swap * c0;
            cc = coh_same * c0 + coh_swap * b0;
        }
    }
}

/// Ideal gate followed by one independent channel per participating qubit.
inline void apply_noisy_gate(DensityMatrix& rho, const GateOp& op, const NoiseModel& noise,
                             LocationTally* tally = nullptr) {
    apply_gate(rho, op);
    pauli_channel(rho, op.qubits[0], noise);
    if (op.arity() == 2) pauli_channel(rho, op.qubits[1], noise);
    if (tally) (op.arity() == 2 ? tally->cnots : tally->single_qubit_gates) += 1;
}

/// Resets a qubit to |0> (discarding whatever it held), then the prep channel.
inline void noisy_prep_zero(DensityMatrix& rho, int qubit, const NoiseModel& noise,
                            LocationTally* tally = nullptr) {
    rho.check_qubit(qubit);
    const int n = rho.num_qubits();
    const std::size_t d = rho.dim();
    const std::size_t bit = std::size_t{1} << qubit;
    auto e = rho.entries();
    for (std::size_t r = 0; r < d; ++r) {
        if (r & bit) continue;
        for (std::size_t c = 0; c < d; ++c) {
            if (c & bit) continue;
            e[(r << n) | c] += e[((r | bit) << n) | (c | bit)];
            e[(r << n) | (c | bit)] = 0.0;
            e[((r | bit) << n) | c] = 0.0;
            e[((r | bit) << n) | (c | bit)] = 0.0;
        }
    }
    if (noise.noisy_prep) {
        pauli_channel(rho, qubit, noise);
        if (tally) ++tally->preps;
    }
}

/// Measurement channel, then projective Z measurement.
inline std::array<MeasureBranch, 2> noisy_measure_z(const DensityMatrix& rho, int qubit, const NoiseModel& noise,
                                                    LocationTally* tally = nullptr) {
    rho.check_qubit(qubit);
    if (!noise.noisy_measure) return measure_z(rho, qubit);
    DensityMatrix noisy = rho;
    pauli_channel(noisy, qubit, noise);
    if (tally) ++tally->measurements;
    return measure_z(noisy, qubit);
}

/// Runs a circuit on a density matrix. MeasureZ here is non-selective: the
/// outcome branches are summed back, leaving the dephased state.
inline void run_noisy_circuit(DensityMatrix& rho, const Circuit& circuit, const NoiseModel& noise,
                              LocationTally* tally = nullptr) {
    for (const auto& op : circuit) {
        switch (op.kind) {
            case GateKind::PrepZero: noisy_prep_zero(rho, op.qubits[0], noise, tally); break;
            case GateKind::MeasureZ: {
                auto branches = noisy_measure_z(rho, op.qubits[0], noise, tally);
                rho = std::move(branches[0].post_state);
                rho += branches[1].post_state;
                break;
            }
            default: apply_noisy_gate(rho, op, noise, tally); break;
        }
    }
}

/// Static location count of a circuit under the given flags.
inline LocationTally count_locations(const Circuit& circuit, const NoiseModel& noise) {
    LocationTally t;
    for (const auto& op : circuit) {
        switch (op.kind) {
            case GateKind::PrepZero: t.preps += noise.noisy_prep ? 1 : 0; break;
            case GateKind::MeasureZ: t.measurements += noise.noisy_measure ? 1 : 0; break;
            case GateKind::CNOT: ++t.cnots; break;
            default: ++t.single_qubit_gates; break;
        }
    }
    return t;
}

}  // namespace steanesim
