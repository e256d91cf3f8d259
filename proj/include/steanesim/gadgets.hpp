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

// Fault-tolerant gadgets on one Steane block: Shor-state syndrome extraction,
// the twice-repeated QEC cycle and the teleported T gate.
//
// The circuits live in namespace `circuits` and are shared by both engines.
// The dense engine (DenseProtocol) does not push an 11- or 14-qubit density
// matrix through them. Because the ancilla (stabilizers) or the data block
// (T gadget) is read out in the Z basis right after a layer of transversal
// CNOTs, the joint evolution contracts exactly onto the 7-qubit block:
//
//   Z-type stabilizer:  rho'[d, d'] = rho[d, d'] * K_b(d|S, d'|S)
//   T teleport:         rho_m[a, a'] = theta[a, a'] * rho[m^a, m^a']
//
// where K_b folds the noisy Shor state, ancilla-side CNOT noise, the readout
// channel and the parity-b outcome set into a 16x16 table. X-type
// stabilizers reduce to the Z-type form under Hadamard conjugation of the
// support. The reference path (measure_stabilizer_reference) runs the
// literal 11-qubit circuit and is what the tests check the contraction
// against.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <vector>

#include "steanesim/noise.hpp"
#include "steanesim/qstate.hpp"
#include "steanesim/steane.hpp"

namespace steanesim {

enum class RoundOrder {
    Interleaved,  // bf, pf, bf, pf
    Grouped,      // bf, bf, pf, pf
};

struct ProtocolOptions {
    RoundOrder round_order = RoundOrder::Interleaved;
    steane::DecoderTable decoder = steane::kHammingDecoder;
};

namespace circuits {

inline constexpr int kShorSize = 4;

/// GHZ on four qubits followed by H on each: the even-weight superposition.
inline Circuit shor_state(int offset = 0) {
    Circuit c;
    for (int i = 0; i < kShorSize; ++i) c.push_back(GateOp::single(GateKind::PrepZero, offset + i));
    c.push_back(GateOp::single(GateKind::H, offset));
    for (int i = 1; i < kShorSize; ++i) c.push_back(GateOp::cnot(offset, offset + i));
    for (int i = 0; i < kShorSize; ++i) c.push_back(GateOp::single(GateKind::H, offset + i));
    return c;
}

/// Couples a Shor ancilla at [ancilla_offset, +4) to the data block at 0..6
/// and reads it out; the syndrome bit is the parity of the four readouts.
/// Z-type: CNOT data -> ancilla, Z readout. X-type: H on each ancilla qubit
/// (Shor state -> cat state), CNOT ancilla -> data, X-basis readout.
inline Circuit stabilizer_coupling(const steane::StabilizerSpec& g, int ancilla_offset) {
    Circuit c;
    const bool x_type = g.pauli_type == steane::PauliType::X;
    if (x_type)
        for (int i = 0; i < kShorSize; ++i) c.push_back(GateOp::single(GateKind::H, ancilla_offset + i));
    for (int i = 0; i < kShorSize; ++i) {
        const int a = ancilla_offset + i;
        c.push_back(x_type ? GateOp::cnot(a, g.support[i]) : GateOp::cnot(g.support[i], a));
    }
    if (x_type)
        for (int i = 0; i < kShorSize; ++i) c.push_back(GateOp::single(GateKind::H, ancilla_offset + i));
    for (int i = 0; i < kShorSize; ++i) c.push_back(GateOp::single(GateKind::MeasureZ, ancilla_offset + i));
    return c;
}

inline Circuit stabilizer_measurement(const steane::StabilizerSpec& g, int ancilla_offset = steane::kBlockSize) {
    Circuit c = shor_state(ancilla_offset);
    const Circuit coupling = stabilizer_coupling(g, ancilla_offset);
    c.insert(c.end(), coupling.begin(), coupling.end());
    return c;
}

/// Noisy |Theta> = (|0_L> + e^{i pi/4}|1_L>)/sqrt2: fresh block, H and T on
/// the encoder input, then the encoder.
inline Circuit theta_preparation(int offset = 0) {
    Circuit c;
    for (int q = 0; q < steane::kBlockSize; ++q) c.push_back(GateOp::single(GateKind::PrepZero, offset + q));
    c.push_back(GateOp::single(GateKind::H, offset + steane::kEncoderInput));
    c.push_back(GateOp::single(GateKind::T, offset + steane::kEncoderInput));
    for (auto op : steane::encoder_circuit()) {
        op.qubits[0] += offset;
        if (op.arity() == 2) op.qubits[1] += offset;
        c.push_back(op);
    }
    return c;
}

/// Data block at 0..6, |Theta> block at 7..13: CNOT theta_i -> data_i, then
/// Z readout of the data block.
inline Circuit t_teleport_coupling() {
    Circuit c;
    for (int q = 0; q < steane::kBlockSize; ++q) c.push_back(GateOp::cnot(steane::kBlockSize + q, q));
    for (int q = 0; q < steane::kBlockSize; ++q) c.push_back(GateOp::single(GateKind::MeasureZ, q));
    return c;
}

/// Applied to the former |Theta> block when the logical readout is 1:
/// logical X, then logical S.
inline Circuit t_correction(int offset = 0) {
    Circuit c = steane::transversal_circuit(GateKind::X, offset);
    const Circuit s = steane::transversal_circuit(GateKind::S, offset);
    c.insert(c.end(), s.begin(), s.end());
    return c;
}

/// Twelve stabilizer measurements of one QEC cycle. Z-type generators give
/// the bit-flip syndrome, X-type the phase-flip syndrome.
inline std::vector<steane::StabilizerSpec> qec_measurement_order(RoundOrder order) {
    const auto bf = steane::generators(steane::PauliType::Z);
    const auto pf = steane::generators(steane::PauliType::X);
    std::vector<steane::StabilizerSpec> out;
    auto append = [&out](const auto& set) { out.insert(out.end(), set.begin(), set.end()); };
    if (order == RoundOrder::Interleaved) {
        append(bf), append(pf), append(bf), append(pf);
    } else {
        append(bf), append(bf), append(pf), append(pf);
    }
    return out;
}

}  // namespace circuits

/// Two rounds of a 3-bit syndrome for one error type.
struct SyndromeTrack {
    std::uint8_t round1 = 0;
    std::uint8_t round2 = 0;
    std::uint8_t bits1 = 0;
    std::uint8_t bits2 = 0;
    bool disagree = false;

    void push(int bit) {
        if (bits1 < 3) {
            round1 = static_cast<std::uint8_t>(round1 << 1 | bit);
            ++bits1;
            return;
        }
        if (bits2 >= 3) throw UsageError("syndrome track already holds two rounds");
        const int expected = round1 >> (2 - bits2) & 1;
        disagree = disagree || bit != expected;
        round2 = static_cast<std::uint8_t>(round2 << 1 | bit);
        ++bits2;
    }

    bool complete() const { return bits2 == 3; }

    /// Code position to correct (1..7) once both rounds are in; rounds that
    /// disagree trigger no recovery.
    std::optional<int> decision(const steane::DecoderTable& table = steane::kHammingDecoder) const {
        if (!complete() || disagree) return std::nullopt;
        return steane::decode_syndrome(round1, table);
    }

    /// Drops bits that can no longer change the decision.
    SyndromeTrack canonical() const {
        SyndromeTrack t = *this;
        if (t.disagree) t.round1 = t.round2 = 0;
        return t;
    }

    auto operator<=>(const SyndromeTrack&) const = default;
};

/// Bit-flip (Z-type generators) and phase-flip (X-type generators) records.
struct SyndromeRecord {
    SyndromeTrack bit_flip;
    SyndromeTrack phase_flip;

    void push(steane::PauliType generator_type, int bit) {
        (generator_type == steane::PauliType::Z ? bit_flip : phase_flip).push(bit);
    }

    SyndromeRecord canonical() const { return {bit_flip.canonical(), phase_flip.canonical()}; }

    auto operator<=>(const SyndromeRecord&) const = default;
};

/// Classically conditioned mixture: unnormalized 7-qubit states keyed by
/// their (canonical) syndrome record. Records equal after canonicalization
/// lead to the same recovery and are summed on insertion.
class BranchEnsemble {
public:
    BranchEnsemble() = default;
    explicit BranchEnsemble(DensityMatrix initial) { add({}, std::move(initial)); }

    void add(const SyndromeRecord& record, DensityMatrix state) {
        const auto key = record.canonical();
        auto it = branches_.find(key);
        if (it == branches_.end()) {
            branches_.emplace(key, std::move(state));
        } else {
            it->second += state;
        }
    }

    std::size_t size() const { return branches_.size(); }

    double total_weight() const {
        double w = 0.0;
        for (const auto& [rec, st] : branches_) w += st.trace();
        return w;
    }

    /// Branches in record order, so every sum over them is deterministic.
    const std::map<SyndromeRecord, DensityMatrix>& branches() const { return branches_; }

private:
    std::map<SyndromeRecord, DensityMatrix> branches_;
};

namespace detail {

/// Heisenberg image of |o><o| under the single-qubit ancilla history that
/// follows its coupling CNOT: CNOT channel, [H + channel], readout channel.
inline DensityMatrix ancilla_effect(int outcome, bool hadamard, const NoiseModel& noise) {
    DensityMatrix e = DensityMatrix::zero(1);
    e(outcome, outcome) = 1.0;
    if (noise.noisy_measure) pauli_channel(e, 0, noise);
    if (hadamard) {
        pauli_channel(e, 0, noise);
        e.conjugate(0, gates::matrix(GateKind::H));
    }
    pauli_channel(e, 0, noise);
    return e;
}

inline void hadamard_all(DensityMatrix& m) {
    for (int q = 0; q < m.num_qubits(); ++q) m.conjugate(q, gates::matrix(GateKind::H));
}

/// 16x16 table K_b(u, u') = sum_{a,a'} sigma[a,a'] E_b[a' ^ u', a ^ u] for
/// both parities b, in the Z-type frame. sigma is the ancilla as it enters
/// the coupling CNOTs.
inline std::array<std::vector<cplx>, 2> stabilizer_kernel(const DensityMatrix& shor, bool x_type,
                                                          const NoiseModel& noise) {
    constexpr std::size_t kDim = 16;
    const std::array<DensityMatrix, 2> e{ancilla_effect(0, x_type, noise), ancilla_effect(1, x_type, noise)};
    std::array<DensityMatrix, 2> effect{DensityMatrix::zero(4), DensityMatrix::zero(4)};
    for (std::size_t x = 0; x < kDim; ++x)
        for (std::size_t xp = 0; xp < kDim; ++xp)
            for (std::uint32_t o = 0; o < kDim; ++o) {
                cplx v = 1.0;
                for (int i = 0; i < 4; ++i) v *= e[o >> i & 1](x >> i & 1, xp >> i & 1);
                effect[steane::parity(o)](x, xp) += v;
            }
    DensityMatrix sigma = shor;
    if (x_type) {
        hadamard_all(sigma);
        hadamard_all(effect[0]);
        hadamard_all(effect[1]);
    }
    std::array<std::vector<cplx>, 2> k{std::vector<cplx>(kDim * kDim), std::vector<cplx>(kDim * kDim)};
    for (int b = 0; b < 2; ++b)
        for (std::size_t u = 0; u < kDim; ++u)
            for (std::size_t up = 0; up < kDim; ++up) {
                cplx s{};
                for (std::size_t a = 0; a < kDim; ++a)
                    for (std::size_t ap = 0; ap < kDim; ++ap) s += sigma(a, ap) * effect[b](ap ^ up, a ^ u);
                k[b][u * kDim + up] = s;
            }
    return k;
}

/// Per observed readout pattern m of the target block: the unnormalized
/// control block after transversal CNOT control_i -> target_i and a Z
/// readout of every target qubit. Target-side CNOT noise and readout noise
/// enter as independent bit flips; control-side CNOT noise is NOT applied
/// (it commutes with the readout, so callers apply it once after grouping).
inline std::vector<DensityMatrix> transversal_cnot_readout(const DensityMatrix& target, const DensityMatrix& control,
                                                           const NoiseModel& noise) {
    if (target.num_qubits() != control.num_qubits())
        throw UsageError("transversal CNOT needs blocks of equal size");
    const int n = target.num_qubits();
    const std::size_t d = target.dim();
    std::vector<DensityMatrix> out(d, DensityMatrix::zero(n));
    for (std::size_t m = 0; m < d; ++m) {
        auto& o = out[m];
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t ap = 0; ap < d; ++ap) o(a, ap) = control(a, ap) * target(m ^ a, m ^ ap);
    }
    const double f_gate = noise.p_x + noise.p_y;
    const double f_read = noise.noisy_measure ? f_gate : 0.0;
    const double f = f_gate + f_read - 2.0 * f_gate * f_read;
    if (f == 0.0) return out;
    for (int i = 0; i < n; ++i) {
        const std::size_t bit = std::size_t{1} << i;
        for (std::size_t m = 0; m < d; ++m) {
            if (m & bit) continue;
            auto e0 = out[m].entries();
            auto e1 = out[m | bit].entries();
            for (std::size_t k = 0; k < e0.size(); ++k) {
                const cplx x0 = e0[k];
                const cplx x1 = e1[k];
                e0[k] = (1.0 - f) * x0 + f * x1;
                e1[k] = f * x0 + (1.0 - f) * x1;
            }
        }
    }
    return out;
}

}  // namespace detail

/// Noisy Shor state from the literal circuit.
inline DensityMatrix prepare_shor_state(const NoiseModel& noise, LocationTally* tally = nullptr) {
    DensityMatrix rho(circuits::kShorSize);
    run_noisy_circuit(rho, circuits::shor_state(), noise, tally);
    return rho;
}

/// |Theta> block: ideal encoding or the noisy preparation circuit.
inline DensityMatrix prepare_theta_state(const NoiseModel& noise, LocationTally* tally = nullptr) {
    if (noise.ideal_theta_ancilla) {
        const double a = std::numbers::pi / 4.0;
        return DensityMatrix::from_pure(steane::encode_ideal({a, a}));
    }
    DensityMatrix rho(steane::kBlockSize);
    run_noisy_circuit(rho, circuits::theta_preparation(), noise, tally);
    return rho;
}

/// Literal-circuit stabilizer measurement on a 7-qubit block: tensor with a
/// noisy Shor state, couple, read out, trace the ancilla. Returns the
/// unnormalized block for syndrome bit 0 and 1.
inline std::array<DensityMatrix, 2> measure_stabilizer_reference(const DensityMatrix& rho,
                                                                 const steane::StabilizerSpec& g,
                                                                 const NoiseModel& noise) {
    if (rho.num_qubits() != steane::kBlockSize) throw UsageError("stabilizer measurement needs a 7-qubit block");
    const int off = steane::kBlockSize;
    DensityMatrix joint = tensor(rho, prepare_shor_state(noise));
    std::vector<int> readout;
    for (const auto& op : circuits::stabilizer_coupling(g, off)) {
        if (op.kind == GateKind::MeasureZ) {
            readout.push_back(op.qubits[0]);
        } else {
            apply_noisy_gate(joint, op, noise);
        }
    }
    std::array<std::optional<DensityMatrix>, 2> by_parity;
    by_parity[0] = std::move(joint);
    for (int q : readout) {
        std::array<std::optional<DensityMatrix>, 2> next;
        for (int par = 0; par < 2; ++par) {
            if (!by_parity[par]) continue;
            for (auto& br : noisy_measure_z(*by_parity[par], q, noise)) {
                auto& slot = next[par ^ br.outcome];
                if (slot) {
                    *slot += br.post_state;
                } else {
                    slot = std::move(br.post_state);
                }
            }
        }
        by_parity = std::move(next);
    }
    std::vector<int> keep(steane::kBlockSize);
    for (int q = 0; q < steane::kBlockSize; ++q) keep[q] = q;
    return {partial_trace(*by_parity[0], keep), partial_trace(*by_parity[1], keep)};
}

/// Dense (exact) execution of the gadgets for one noise model. Caches the
/// noisy Shor and |Theta> states and the stabilizer kernels, and tallies
/// unconditional noise locations once per gadget invocation.
class DenseProtocol {
public:
    explicit DenseProtocol(const NoiseModel& noise, ProtocolOptions options = {})
        : noise_(noise), options_(options) {
        noise_.validate();
        shor_ = prepare_shor_state(noise_);
        theta_ = prepare_theta_state(noise_, &theta_locations_);
        kernel_z_ = detail::stabilizer_kernel(shor_, false, noise_);
        DensityMatrix cat = shor_;
        for (int i = 0; i < circuits::kShorSize; ++i) apply_noisy_gate(cat, GateOp::single(GateKind::H, i), noise_);
        kernel_x_ = detail::stabilizer_kernel(cat, true, noise_);
        for (int i = 0; i < 3; ++i) {
            const auto& sup = steane::kSupports[i];
            for (std::uint32_t d = 0; d < 128; ++d) {
                std::uint8_t u = 0;
                for (int j = 0; j < 4; ++j) u |= static_cast<std::uint8_t>((d >> sup[j] & 1) << j);
                support_bits_[i][d] = u;
            }
        }
    }

    const NoiseModel& noise() const { return noise_; }
    const ProtocolOptions& options() const { return options_; }
    const DensityMatrix& shor_state() const { return shor_; }
    const DensityMatrix& theta_state() const { return theta_; }
    const LocationTally& tally() const { return tally_; }
    std::size_t max_branches() const { return max_branches_; }

    /// Unnormalized block for syndrome bit 0 and 1 of one generator.
    std::array<DensityMatrix, 2> stabilizer_outcomes(const DensityMatrix& rho, const steane::StabilizerSpec& g) const {
        if (rho.num_qubits() != steane::kBlockSize) throw UsageError("stabilizer measurement needs a 7-qubit block");
        const bool x_type = g.pauli_type == steane::PauliType::X;
        const auto& kernel = x_type ? kernel_x_ : kernel_z_;
        const auto& ubits = support_bits_[support_index(g)];
        DensityMatrix rotated = rho;
        if (x_type)
            for (int q : g.support) rotated.conjugate(q, gates::matrix(GateKind::H));
        std::array<DensityMatrix, 2> out{DensityMatrix::zero(steane::kBlockSize), DensityMatrix::zero(steane::kBlockSize)};
        for (std::size_t r = 0; r < 128; ++r)
            for (std::size_t c = 0; c < 128; ++c) {
                const cplx v = rotated(r, c);
                const std::size_t kk = std::size_t{ubits[r]} * 16 + ubits[c];
                out[0](r, c) = v * kernel[0][kk];
                out[1](r, c) = v * kernel[1][kk];
            }
        for (auto& o : out) {
            if (x_type)
                for (int q : g.support) o.conjugate(q, gates::matrix(GateKind::H));
            for (int q : g.support) pauli_channel(o, q, noise_);
        }
        return out;
    }

    BranchEnsemble measure_stabilizer(const BranchEnsemble& ens, const steane::StabilizerSpec& g) {
        BranchEnsemble next;
        for (const auto& [record, state] : ens.branches()) {
            auto outcomes = stabilizer_outcomes(state, g);
            for (int bit = 0; bit < 2; ++bit) {
                SyndromeRecord r = record;
                r.push(g.pauli_type, bit);
                next.add(r, std::move(outcomes[bit]));
            }
        }
        tally_ += stabilizer_locations(g);
        max_branches_ = std::max(max_branches_, next.size());
        return next;
    }

    /// Bit-flip and phase-flip syndromes, each measured twice, then recovery.
    DensityMatrix qec_cycle(const DensityMatrix& rho) {
        BranchEnsemble ens(rho);
        for (const auto& g : circuits::qec_measurement_order(options_.round_order)) ens = measure_stabilizer(ens, g);
        DensityMatrix out = DensityMatrix::zero(steane::kBlockSize);
        for (const auto& [record, state] : ens.branches()) {
            DensityMatrix s = state;
            if (auto pos = record.bit_flip.decision(options_.decoder)) apply_recovery(s, GateKind::X, *pos - 1);
            if (auto pos = record.phase_flip.decision(options_.decoder)) apply_recovery(s, GateKind::Z, *pos - 1);
            out += s;
        }
        return out;
    }

    /// Teleports logical T from the |Theta> block onto the data.
    DensityMatrix t_gate_teleport(const DensityMatrix& rho) {
        if (rho.num_qubits() != steane::kBlockSize) throw UsageError("T gadget needs a 7-qubit block");
        auto per_outcome = detail::transversal_cnot_readout(rho, theta_, noise_);
        std::array<DensityMatrix, 2> by_logical{DensityMatrix::zero(steane::kBlockSize),
                                                DensityMatrix::zero(steane::kBlockSize)};
        for (std::uint32_t m = 0; m < per_outcome.size(); ++m)
            by_logical[steane::classical_correct_and_parity(m)] += per_outcome[m];
        for (auto& b : by_logical)
            for (int q = 0; q < steane::kBlockSize; ++q) pauli_channel(b, q, noise_);
        for (const auto& op : circuits::t_correction()) apply_noisy_gate(by_logical[1], op, noise_);
        tally_ += theta_locations_;
        tally_ += count_locations(circuits::t_teleport_coupling(), noise_);
        by_logical[0] += by_logical[1];
        return std::move(by_logical[0]);
    }

    void logical_clifford(DensityMatrix& rho, GateKind kind) {
        steane::transversal_logical_gate(rho, kind, noise_, &tally_);
    }

    /// Static location count of one stabilizer measurement.
    LocationTally stabilizer_locations(const steane::StabilizerSpec& g) const {
        return count_locations(circuits::stabilizer_measurement(g), noise_);
    }

private:
    static int support_index(const steane::StabilizerSpec& g) {
        for (int i = 0; i < 3; ++i)
            if (steane::kSupports[i] == g.support) return i;
        throw UsageError("not a Steane generator support");
    }

    void apply_recovery(DensityMatrix& s, GateKind kind, int qubit) const {
        if (noise_.noisy_recovery) {
            apply_noisy_gate(s, GateOp::single(kind, qubit), noise_);
        } else {
            apply_gate(s, GateOp::single(kind, qubit));
        }
    }

    NoiseModel noise_;
    ProtocolOptions options_;
    DensityMatrix shor_{circuits::kShorSize};
    DensityMatrix theta_{steane::kBlockSize};
    LocationTally theta_locations_;
    std::array<std::vector<cplx>, 2> kernel_z_;
    std::array<std::vector<cplx>, 2> kernel_x_;
    std::array<std::array<std::uint8_t, 128>, 3> support_bits_{};
    LocationTally tally_;
    std::size_t max_branches_ = 0;
};

inline DensityMatrix qec_cycle(const DensityMatrix& rho, const NoiseModel& noise, ProtocolOptions options = {}) {
    DenseProtocol protocol(noise, options);
    return protocol.qec_cycle(rho);
}

inline DensityMatrix t_gate_teleport(const DensityMatrix& rho, const NoiseModel& noise) {
    DenseProtocol protocol(noise);
    return protocol.t_gate_teleport(rho);
}

}  // namespace steanesim
