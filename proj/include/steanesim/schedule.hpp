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
#include <array>
#include <chrono>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "steanesim/gadgets.hpp"
#include "steanesim/noise.hpp"
#include "steanesim/qstate.hpp"
#include "steanesim/steane.hpp"

namespace steanesim {

inline constexpr std::string_view kDefaultSequence = "ABBBAAAABBABABABBBAA";
inline constexpr std::array<int, 7> kSchemes{50, 20, 10, 4, 2, 1, 0};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

enum class SequenceOrder {
    RightToLeft,  // operator product: the rightmost composite acts first
    LeftToRight,
};

/// A composite string expanded into logical H/P/T gates in application order.
struct GateSequence {
    std::string composite_string;
    std::vector<GateKind> expanded;
    std::vector<std::size_t> composite_ends;  // exclusive end index of each composite, application order

    std::size_t num_composites() const { return composite_ends.size(); }

    /// Every gate is its own composite.
    static GateSequence from_gates(std::vector<GateKind> gates) {
        GateSequence s;
        s.expanded = std::move(gates);
        for (std::size_t i = 0; i < s.expanded.size(); ++i) s.composite_ends.push_back(i + 1);
        return s;
    }
};

/// A = HPT and B = HT as operator products, so A applies T, P, H in turn.
inline std::vector<GateKind> expand_composite(char symbol) {
    switch (symbol) {
        case 'A': return {GateKind::T, GateKind::P, GateKind::H};
        case 'B': return {GateKind::T, GateKind::H};
        default: break;
    }
    throw UsageError(std::string("unknown composite gate '") + symbol + "'");
}

inline GateSequence parse_sequence(std::string_view text, SequenceOrder order = SequenceOrder::RightToLeft) {
    if (text.empty()) throw ParseError("empty gate sequence", 0);
    for (std::size_t i = 0; i < text.size(); ++i)
        if (text[i] != 'A' && text[i] != 'B')
            throw ParseError(std::string("invalid composite gate '") + text[i] + "'", i);
    GateSequence s;
    s.composite_string = std::string(text);
    auto push = [&s](char symbol) {
        for (GateKind k : expand_composite(symbol)) s.expanded.push_back(k);
        s.composite_ends.push_back(s.expanded.size());
    };
    if (order == SequenceOrder::RightToLeft) {
        for (auto it = text.rbegin(); it != text.rend(); ++it) push(*it);
    } else {
        for (char c : text) push(c);
    }
    return s;
}

/// Parses a comma/space separated list of H, P, T (each its own composite).
inline GateSequence parse_gate_list(std::string_view text) {
    std::vector<GateKind> gates;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == ',' || c == ' ') continue;
        if (c == 'H') {
            gates.push_back(GateKind::H);
        } else if (c == 'P') {
            gates.push_back(GateKind::P);
        } else if (c == 'T') {
            gates.push_back(GateKind::T);
        } else {
            throw ParseError(std::string("invalid logical gate '") + c + "'", i);
        }
    }
    if (gates.empty()) throw ParseError("empty gate list", 0);
    return GateSequence::from_gates(std::move(gates));
}

enum class EveryOtherOffset { Even, Odd };

struct QecSchedule {
    int q = 0;
    std::set<std::size_t> insertion_points;  // 0-based gate indices; QEC runs after these gates
};

inline bool is_supported_scheme(int q) { return std::find(kSchemes.begin(), kSchemes.end(), q) != kSchemes.end(); }

/// Insertion points for cadence q. The rules are written for 20 composites
/// and scale with the composite count N: q=20 after every composite, q=10
/// after every other composite (plus the last one when N is odd under the
/// even offset), q=4 and q=2 after composites ceil(k*N/q), q=1 after the
/// last composite, q=50 after every logical gate.
inline QecSchedule build_schedule(int q, const GateSequence& seq, EveryOtherOffset offset = EveryOtherOffset::Even) {
    if (!is_supported_scheme(q))
        throw UsageError("unsupported QEC scheme q=" + std::to_string(q) + " (expected one of 50,20,10,4,2,1,0)");
    QecSchedule s{q, {}};
    const std::size_t n = seq.num_composites();
    auto after_composite = [&](std::size_t c) {  // 1-based composite number
        if (c >= 1 && c <= n) s.insertion_points.insert(seq.composite_ends[c - 1] - 1);
    };
    switch (q) {
        case 50:
            for (std::size_t i = 0; i < seq.expanded.size(); ++i) s.insertion_points.insert(i);
            break;
        case 20:
            for (std::size_t c = 1; c <= n; ++c) after_composite(c);
            break;
        case 10:
            if (offset == EveryOtherOffset::Even) {
                for (std::size_t c = 2; c <= n; c += 2) after_composite(c);
                if (n % 2 == 1) after_composite(n);
            } else {
                for (std::size_t c = 1; c <= n; c += 2) after_composite(c);
            }
            break;
        case 4:
        case 2:
        case 1:
            for (int k = 1; k <= q; ++k) after_composite((k * n + q - 1) / q);
            break;
        default: break;
    }
    return s;
}

/// 2x2 chain on the unencoded qubit, then ideal encoding.
inline PureState ideal_final_state(const GateSequence& seq, const steane::LogicalInput& input) {
    PureState psi = input.as_qubit();
    for (GateKind k : seq.expanded) psi.apply_matrix(0, gates::matrix(k));
    return steane::encode_state(psi);
}

/// Same target reached by encoding first and applying ideal logical gates
/// on the block (T via its ideal logical action).
inline PureState ideal_final_state_encoded(const GateSequence& seq, const steane::LogicalInput& input) {
    PureState block = steane::encode_ideal(input);
    auto [zero, one] = steane::logical_basis_states();
    for (GateKind k : seq.expanded) {
        if (k == GateKind::T) {
            // T|1_L> = e^{i pi/4}|1_L>: project onto the logical components.
            const cplx a = zero.inner(block);
            const cplx b = one.inner(block);
            const cplx w = std::polar(1.0, std::numbers::pi / 4.0);
            for (std::size_t i = 0; i < block.dim(); ++i) block[i] = a * zero[i] + w * b * one[i];
        } else {
            for (const auto& op : steane::transversal_circuit(k)) apply_gate(block, op);
        }
    }
    return block;
}

/// Unconditional noise locations of a whole run: every gadget counted once,
/// conditional recovery and T-correction ops excluded.
inline LocationTally schedule_locations(const GateSequence& seq, const QecSchedule& schedule, const NoiseModel& noise,
                                        RoundOrder round_order = RoundOrder::Interleaved) {
    LocationTally t;
    LocationTally qec;
    for (const auto& g : circuits::qec_measurement_order(round_order))
        qec += count_locations(circuits::stabilizer_measurement(g), noise);
    LocationTally t_gadget = count_locations(circuits::t_teleport_coupling(), noise);
    if (!noise.ideal_theta_ancilla) t_gadget += count_locations(circuits::theta_preparation(), noise);
    for (std::size_t i = 0; i < seq.expanded.size(); ++i) {
        const GateKind k = seq.expanded[i];
        t += k == GateKind::T ? t_gadget : count_locations(steane::transversal_circuit(k), noise);
        if (schedule.insertion_points.contains(i)) t += qec;
    }
    return t;
}

struct RunDiagnostics {
    LocationTally locations;
    std::size_t qec_cycles = 0;
    std::size_t t_gadgets = 0;
    std::size_t max_branches = 0;
    double wall_seconds = 0.0;
};

struct ScheduleRun {
    double fidelity = 0.0;
    double infidelity = 1.0;
    DensityMatrix final_state{steane::kBlockSize};
    RunDiagnostics diagnostics;
};

/// Dense simulation of one (sequence, cadence, noise) point from a perfectly
/// encoded input.
inline ScheduleRun run_schedule(const GateSequence& seq, const QecSchedule& schedule, const NoiseModel& noise,
                                const steane::LogicalInput& input, ProtocolOptions options = {}) {
    const auto start = std::chrono::steady_clock::now();
    DenseProtocol protocol(noise, options);
    ScheduleRun run;
    DensityMatrix rho = DensityMatrix::from_pure(steane::encode_ideal(input));
    for (std::size_t i = 0; i < seq.expanded.size(); ++i) {
        const GateKind k = seq.expanded[i];
        if (k == GateKind::T) {
            rho = protocol.t_gate_teleport(rho);
            ++run.diagnostics.t_gadgets;
        } else {
            protocol.logical_clifford(rho, k);
        }
        if (schedule.insertion_points.contains(i)) {
            rho = protocol.qec_cycle(rho);
            ++run.diagnostics.qec_cycles;
        }
    }
    run.fidelity = fidelity(ideal_final_state(seq, input), rho);
    run.infidelity = 1.0 - run.fidelity;
    run.final_state = std::move(rho);
    run.diagnostics.locations = protocol.tally();
    run.diagnostics.max_branches = protocol.max_branches();
    run.diagnostics.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run;
}

}  // namespace steanesim
