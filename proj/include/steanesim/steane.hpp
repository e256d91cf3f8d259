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

// The [[7,1,3]] Steane code.
//
// Code qubits are numbered 1..7 in the Hamming convention and live at
// register index (position - 1). Both stabilizer types share the supports
// {4,5,6,7}, {2,3,6,7}, {1,3,5,7}, so a syndrome (s1, s2, s3) read in that
// order is the binary position 4*s1 + 2*s2 + s3 of a single flipped qubit.

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "steanesim/noise.hpp"
#include "steanesim/qstate.hpp"

namespace steanesim::steane {

inline constexpr int kBlockSize = 7;

enum class PauliType { X, Z };

struct StabilizerSpec {
    PauliType pauli_type;
    std::array<int, 4> support;  // register indices, ascending

    /// Bitmask of the support over the 7 block qubits.
    std::uint32_t mask() const {
        std::uint32_t m = 0;
        for (int q : support) m |= 1u << q;
        return m;
    }
};

/// Supports in syndrome-bit order (g1, g2, g3), as register indices.
inline constexpr std::array<std::array<int, 4>, 3> kSupports{{{3, 4, 5, 6}, {1, 2, 5, 6}, {0, 2, 4, 6}}};

inline std::array<StabilizerSpec, 3> generators(PauliType type) {
    return {StabilizerSpec{type, kSupports[0]}, StabilizerSpec{type, kSupports[1]},
            StabilizerSpec{type, kSupports[2]}};
}

/// X-type g1..g3 followed by Z-type g1..g3.
inline std::array<StabilizerSpec, 6> all_generators() {
    std::array<StabilizerSpec, 6> out{};
    for (int i = 0; i < 3; ++i) {
        out[i] = StabilizerSpec{PauliType::X, kSupports[i]};
        out[3 + i] = StabilizerSpec{PauliType::Z, kSupports[i]};
    }
    return out;
}

inline int parity(std::uint32_t v) { return std::popcount(v) & 1; }

/// Syndrome value 4*s1 + 2*s2 + s3 of a 7-bit pattern (bit j = register j).
inline int syndrome_of(std::uint32_t bits) {
    int s = 0;
    for (const auto& sup : kSupports) {
        std::uint32_t m = 0;
        for (int q : sup) m |= 1u << q;
        s = 2 * s + parity(bits & m);
    }
    return s;
}

/// The 8 codewords spanned by the generator supports (all of even weight).
inline std::array<std::uint32_t, 8> even_codewords() {
    std::array<std::uint32_t, 3> rows{};
    for (int i = 0; i < 3; ++i)
        for (int q : kSupports[i]) rows[i] |= 1u << q;
    std::array<std::uint32_t, 8> words{};
    for (int s = 0; s < 8; ++s) {
        std::uint32_t w = 0;
        for (int i = 0; i < 3; ++i)
            if (s >> i & 1) w ^= rows[i];
        words[s] = w;
    }
    return words;
}

inline constexpr std::uint32_t kAllOnes = 0x7F;

/// |0_L> and |1_L> = X^7 |0_L>.
inline std::pair<PureState, PureState> logical_basis_states() {
    PureState zero(kBlockSize, std::vector<cplx>(1u << kBlockSize));
    PureState one(kBlockSize, std::vector<cplx>(1u << kBlockSize));
    const double amp = 1.0 / std::sqrt(8.0);
    for (auto w : even_codewords()) {
        zero[w] = amp;
        one[w ^ kAllOnes] = amp;
    }
    return {std::move(zero), std::move(one)};
}

/// cos(alpha)|0> + e^{i beta} sin(alpha)|1> on one qubit.
struct LogicalInput {
    double alpha = 0.0;
    double beta = 0.0;

    PureState as_qubit() const { return PureState::single_qubit(alpha, beta); }
};

/// Encodes a normalized one-qubit state a|0> + b|1> as a|0_L> + b|1_L>.
inline PureState encode_state(const PureState& qubit) {
    if (qubit.num_qubits() != 1) throw UsageError("encode_state expects a single-qubit state");
    auto [zero, one] = logical_basis_states();
    PureState out(kBlockSize, std::vector<cplx>(1u << kBlockSize));
    for (std::size_t k = 0; k < out.dim(); ++k) out[k] = qubit[0] * zero[k] + qubit[1] * one[k];
    out.normalize();
    return out;
}

inline PureState encode_ideal(const LogicalInput& input) { return encode_state(input.as_qubit()); }

/// Register index that carries the unencoded qubit into encoder_circuit().
inline constexpr int kEncoderInput = 2;

/// Maps (a|0> + b|1>) on register 2, with the other six qubits in |0>, to
/// a|0_L> + b|1_L>. Fan-out of the input onto {3,5,6} (a weight-3 logical X),
/// then |+> on the pivots 1, 2, 4 (each in exactly one support) and CNOTs from
/// each pivot across the rest of its support.
inline Circuit encoder_circuit() {
    Circuit c;
    c.push_back(GateOp::cnot(kEncoderInput, 4));
    c.push_back(GateOp::cnot(kEncoderInput, 5));
    for (int pivot : {0, 1, 3}) c.push_back(GateOp::single(GateKind::H, pivot));
    // pivot 4 -> {5,6,7}, pivot 2 -> {3,6,7}, pivot 1 -> {3,5,7} (code positions)
    for (int t : {4, 5, 6}) c.push_back(GateOp::cnot(3, t));
    for (int t : {2, 5, 6}) c.push_back(GateOp::cnot(1, t));
    for (int t : {2, 4, 6}) c.push_back(GateOp::cnot(0, t));
    return c;
}

/// Physical gate applied bitwise for a logical Clifford: C-dagger, so logical
/// P is bitwise P-dagger. Logical Y is handled separately as Z then X.
inline GateKind bitwise_kind(GateKind logical) {
    switch (logical) {
        case GateKind::H:
        case GateKind::X:
        case GateKind::Z: return logical;
        case GateKind::P:
        case GateKind::S: return GateKind::Pdag;
        case GateKind::Pdag:
        case GateKind::Sdag: return GateKind::P;
        default: break;
    }
    throw UsageError("transversal logical gate does not support kind " + std::string(to_string(logical)));
}

/// Bitwise physical layers realizing a logical Clifford on block [offset, offset+7).
inline Circuit transversal_circuit(GateKind logical, int offset = 0) {
    Circuit c;
    if (logical == GateKind::Y) {
        for (GateKind k : {GateKind::Z, GateKind::X})
            for (int q = 0; q < kBlockSize; ++q) c.push_back(GateOp::single(k, offset + q));
        return c;
    }
    const GateKind k = bitwise_kind(logical);
    for (int q = 0; q < kBlockSize; ++q) c.push_back(GateOp::single(k, offset + q));
    return c;
}

inline void transversal_logical_gate(DensityMatrix& rho, GateKind kind, const NoiseModel& noise,
                                     LocationTally* tally = nullptr) {
    if (rho.num_qubits() != kBlockSize) throw UsageError("transversal gates act on a 7-qubit block");
    for (const auto& op : transversal_circuit(kind)) apply_noisy_gate(rho, op, noise, tally);
}

/// Syndrome lookup table: entry s is the code position (1..7) to correct, or
/// 0 for none. Tests swap entries to emulate a broken decoder.
using DecoderTable = std::array<int, 8>;

inline constexpr DecoderTable kHammingDecoder{0, 1, 2, 3, 4, 5, 6, 7};

/// Syndrome bits (g1, g2, g3) -> code position 1..7, or nullopt for (0,0,0).
inline std::optional<int> decode_syndrome(std::array<int, 3> bits, const DecoderTable& table = kHammingDecoder) {
    const int s = 4 * bits[0] + 2 * bits[1] + bits[2];
    if (table[s] == 0) return std::nullopt;
    return table[s];
}

inline std::optional<int> decode_syndrome(int value, const DecoderTable& table = kHammingDecoder) {
    return decode_syndrome(std::array<int, 3>{value >> 2 & 1, value >> 1 & 1, value & 1}, table);
}

/// Hamming-corrects a 7-bit readout and returns its parity (logical Z value).
inline int classical_correct_and_parity(std::uint32_t bits) {
    bits &= kAllOnes;
    if (auto pos = decode_syndrome(syndrome_of(bits))) bits ^= 1u << (*pos - 1);
    return parity(bits);
}

}  // namespace steanesim::steane
