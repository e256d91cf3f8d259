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

#include "steanesim/gadgets.hpp"

#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "oracle.h"
#include "test_util.h"

using namespace steanesim;
using steanesim::testing::random_mixed;
using steanesim::testing::to_oracle;

namespace {

const NoiseModel kUneven{.p_x = 0.013, .p_y = 0.004, .p_z = 0.021};

PureState random_logical(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, std::numbers::pi);
    return steane::encode_ideal({u(rng), 2.0 * u(rng)});
}

/// Ideal logical T on an encoded state, via its 2x2 action.
PureState ideal_logical_t(const steane::LogicalInput& in) {
    PureState q = in.as_qubit();
    q.apply_matrix(0, gates::matrix(GateKind::T));
    return steane::encode_state(q);
}

}  // namespace

TEST(shor_state, noiseless_is_even_weight_superposition) {
    const DensityMatrix shor = prepare_shor_state(NoiseModel::noiseless());
    std::vector<oracle::cplx> v(16);
    for (std::uint32_t k = 0; k < 16; ++k)
        if (steane::parity(k) == 0) v[k] = 1.0 / std::sqrt(8.0);
    EXPECT_LT(oracle::max_abs_diff(to_oracle(shor), oracle::outer(v)), 1e-15);
}

TEST(location_audit, stabilizer_measurements) {
    const NoiseModel m = NoiseModel::depolarizing(1e-3);
    EXPECT_EQ(count_locations(circuits::shor_state(), m).channel_applications(), 15u);
    for (const auto& g : steane::all_generators()) {
        const auto t = count_locations(circuits::stabilizer_measurement(g), m);
        EXPECT_EQ(t.channel_applications(), g.pauli_type == steane::PauliType::Z ? 27u : 35u);
        EXPECT_EQ(t.cnots, 7u);
        EXPECT_EQ(t.measurements, 4u);
    }
}

TEST(location_audit, t_gadget) {
    const NoiseModel m = NoiseModel::depolarizing(1e-3);
    const auto prep = count_locations(circuits::theta_preparation(), m);
    const auto coupling = count_locations(circuits::t_teleport_coupling(), m);
    EXPECT_EQ(prep.channel_applications(), 34u);
    EXPECT_EQ(coupling.channel_applications(), 21u);
    DenseProtocol dense(m);
    DensityMatrix rho = DensityMatrix::from_pure(steane::encode_ideal({}));
    (void)dense.t_gate_teleport(rho);
    EXPECT_EQ(dense.tally().channel_applications(), 55u);
}

TEST(location_audit, qec_cycle_counts_every_measurement_once) {
    DenseProtocol dense(NoiseModel::depolarizing(1e-3));
    (void)dense.qec_cycle(DensityMatrix::from_pure(steane::encode_ideal({})));
    EXPECT_EQ(dense.tally().channel_applications(), 6u * 27u + 6u * 35u);
}

TEST(stabilizer_measurement, fast_path_matches_literal_circuit) {
    std::mt19937_64 rng(41);
    DenseProtocol dense(kUneven);
    for (const auto& g : steane::all_generators()) {
        const DensityMatrix rho = random_mixed(7, rng);
        const auto fast = dense.stabilizer_outcomes(rho, g);
        const auto ref = measure_stabilizer_reference(rho, g, kUneven);
        for (int b = 0; b < 2; ++b) EXPECT_LT(fast[b].max_abs_diff(ref[b]), 1e-13);
        EXPECT_NEAR(fast[0].trace() + fast[1].trace(), 1.0, 1e-12);
    }
}

TEST(stabilizer_measurement, fast_path_matches_literal_circuit_without_prep_and_measure_noise) {
    std::mt19937_64 rng(42);
    NoiseModel m = kUneven;
    m.noisy_prep = false;
    m.noisy_measure = false;
    DenseProtocol dense(m);
    const auto g = steane::generators(steane::PauliType::X)[1];
    const DensityMatrix rho = random_mixed(7, rng);
    const auto fast = dense.stabilizer_outcomes(rho, g);
    const auto ref = measure_stabilizer_reference(rho, g, m);
    for (int b = 0; b < 2; ++b) EXPECT_LT(fast[b].max_abs_diff(ref[b]), 1e-13);
}

TEST(stabilizer_measurement, noiseless_syndrome_bits) {
    DenseProtocol dense(NoiseModel::noiseless());
    const PureState code = steane::encode_ideal({0.7, 0.2});
    for (int q = 0; q < 7; ++q)
        for (GateKind err : {GateKind::X, GateKind::Z}) {
            DensityMatrix rho = DensityMatrix::from_pure(code);
            apply_gate(rho, GateOp::single(err, q));
            for (const auto& g : steane::all_generators()) {
                // X errors anticommute with Z-type generators and vice versa.
                const bool detects = (err == GateKind::X) == (g.pauli_type == steane::PauliType::Z);
                const int expected = detects && (g.mask() >> q & 1) ? 1 : 0;
                const auto out = dense.stabilizer_outcomes(rho, g);
                EXPECT_NEAR(out[expected].trace(), 1.0, 1e-12);
            }
        }
}

TEST(transversal_cnot_readout, matches_generic_engine_on_small_blocks) {
    std::mt19937_64 rng(43);
    constexpr int n = 3;
    const DensityMatrix target = random_mixed(n, rng);
    const DensityMatrix control = random_mixed(n, rng);
    const auto fast = detail::transversal_cnot_readout(target, control, kUneven);

    DensityMatrix joint = tensor(target, control);
    for (int i = 0; i < n; ++i) {
        apply_gate(joint, GateOp::cnot(n + i, i));
        pauli_channel(joint, i, kUneven);
    }
    std::vector<int> keep{3, 4, 5};
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
        DensityMatrix branch = joint;
        for (int i = 0; i < n; ++i) branch = std::move(noisy_measure_z(branch, i, kUneven)[m >> i & 1].post_state);
        EXPECT_LT(fast[m].max_abs_diff(partial_trace(branch, keep)), 1e-15) << "pattern " << m;
    }
}

TEST(qec_cycle, corrects_every_single_qubit_pauli) {
    DenseProtocol dense(NoiseModel::noiseless());
    int cases = 0;
    for (const steane::LogicalInput in :
         {steane::LogicalInput{0.0, 0.0}, {std::numbers::pi / 2, 0.0}, {std::numbers::pi / 4, 0.0}}) {
        const PureState code = steane::encode_ideal(in);
        for (int q = 0; q < 7; ++q)
            for (GateKind err : {GateKind::X, GateKind::Y, GateKind::Z}) {
                DensityMatrix rho = DensityMatrix::from_pure(code);
                apply_gate(rho, GateOp::single(err, q));
                EXPECT_NEAR(fidelity(code, dense.qec_cycle(rho)), 1.0, 1e-9) << to_string(err) << " on " << q;
                ++cases;
            }
    }
    EXPECT_EQ(cases, 63);
}

TEST(qec_cycle, mutated_decoder_fails_to_correct) {
    ProtocolOptions opts;
    std::swap(opts.decoder[3], opts.decoder[5]);
    DenseProtocol dense(NoiseModel::noiseless(), opts);
    const PureState code = steane::encode_ideal({});
    DensityMatrix rho = DensityMatrix::from_pure(code);
    apply_gate(rho, GateOp::single(GateKind::X, 2));  // position 3
    EXPECT_LT(fidelity(code, dense.qec_cycle(rho)), 0.5);
}

TEST(qec_cycle, noiseless_cycle_is_identity_on_code_space) {
    std::mt19937_64 rng(44);
    for (RoundOrder order : {RoundOrder::Interleaved, RoundOrder::Grouped}) {
        DenseProtocol dense(NoiseModel::noiseless(), {order, steane::kHammingDecoder});
        const PureState code = random_logical(rng);
        EXPECT_NEAR(fidelity(code, dense.qec_cycle(DensityMatrix::from_pure(code))), 1.0, 1e-12);
    }
}

TEST(qec_cycle, noisy_cycle_is_trace_preserving_with_bounded_branches) {
    std::mt19937_64 rng(45);
    DenseProtocol dense(kUneven);
    const DensityMatrix out = dense.qec_cycle(DensityMatrix::from_pure(random_logical(rng)));
    EXPECT_NEAR(out.trace(), 1.0, 1e-12);
    EXPECT_LT(out.hermiticity_error(), 1e-14);
    EXPECT_LE(dense.max_branches(), 100u);
    EXPECT_GT(dense.max_branches(), 1u);
}

TEST(qec_cycle, grouped_order_differs_under_noise) {
    const DensityMatrix rho = DensityMatrix::from_pure(steane::encode_ideal({0.4, 0.3}));
    const auto a = qec_cycle(rho, kUneven, {RoundOrder::Interleaved, steane::kHammingDecoder});
    const auto b = qec_cycle(rho, kUneven, {RoundOrder::Grouped, steane::kHammingDecoder});
    EXPECT_GT(a.max_abs_diff(b), 1e-6);
}

TEST(syndrome_track, disagreement_blocks_recovery) {
    SyndromeTrack t;
    for (int b : {1, 0, 1}) t.push(b);
    EXPECT_FALSE(t.decision().has_value());
    for (int b : {1, 0, 1}) t.push(b);
    EXPECT_EQ(t.decision(), 5);
    EXPECT_THROW(t.push(0), UsageError);

    SyndromeTrack d;
    for (int b : {1, 0, 1, 1, 1, 1}) d.push(b);
    EXPECT_TRUE(d.complete());
    EXPECT_FALSE(d.decision().has_value());
}

TEST(t_gadget, noiseless_teleport_equals_logical_t) {
    std::mt19937_64 rng(46);
    std::uniform_real_distribution<double> u(0.0, std::numbers::pi);
    DenseProtocol dense(NoiseModel::noiseless());
    for (int trial = 0; trial < 10; ++trial) {
        const steane::LogicalInput in{u(rng), 2.0 * u(rng)};
        const DensityMatrix out = dense.t_gate_teleport(DensityMatrix::from_pure(steane::encode_ideal(in)));
        EXPECT_NEAR(fidelity(ideal_logical_t(in), out), 1.0, 1e-9) << "trial " << trial;
    }
}

TEST(t_gadget, one_qubit_model_outcome_one_needs_x_then_s) {
    // |psi> on qubit 0, (|0> + e^{i pi/4}|1>)/sqrt2 on qubit 1, CNOT 1 -> 0,
    // read qubit 0. Outcome 1 leaves b|0> + a w|1> on qubit 1; S X restores T|psi>.
    const oracle::cplx a{0.6, 0.0};
    const oracle::cplx b = std::polar(0.8, 0.9);
    const oracle::cplx w = std::polar(1.0, std::numbers::pi / 4);
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<oracle::cplx> v(4);
    v[0] = a * s, v[1] = b * s, v[2] = a * w * s, v[3] = b * w * s;  // index = q1*2 + q0
    v = oracle::apply(oracle::cnot(2, 1, 0), v);
    std::vector<oracle::cplx> rest{v[1], v[3]};  // qubit 0 read as 1
    const auto sx = oracle::mul(oracle::phase(std::numbers::pi / 2), oracle::pauli('X'));
    rest = oracle::apply(sx, rest);
    const oracle::cplx expected0 = a, expected1 = w * b;
    const oracle::cplx overlap = std::conj(expected0) * rest[0] + std::conj(expected1) * rest[1];
    const double norm = std::norm(rest[0]) + std::norm(rest[1]);
    EXPECT_NEAR(std::norm(overlap) / norm, 1.0, 1e-14);

    // Outcome 0 needs nothing.
    const oracle::cplx o0 = std::conj(expected0) * v[0] + std::conj(expected1) * v[2];
    EXPECT_NEAR(std::norm(o0) / (std::norm(v[0]) + std::norm(v[2])), 1.0, 1e-14);
}

TEST(t_gadget, encoded_correction_is_logical_x_then_s) {
    const steane::LogicalInput in{0.5, 0.8};
    PureState block = steane::encode_ideal(in);
    for (const auto& op : circuits::t_correction()) apply_gate(block, op);
    PureState q = in.as_qubit();
    q.apply_matrix(0, gates::matrix(GateKind::X));
    q.apply_matrix(0, gates::matrix(GateKind::S));
    EXPECT_NEAR(std::norm(steane::encode_state(q).inner(block)), 1.0, 1e-12);
}

TEST(t_gadget, noisy_teleport_is_trace_preserving) {
    DenseProtocol dense(kUneven);
    const DensityMatrix out = dense.t_gate_teleport(DensityMatrix::from_pure(steane::encode_ideal({0.3, 0.1})));
    EXPECT_NEAR(out.trace(), 1.0, 1e-12);
    EXPECT_LT(out.hermiticity_error(), 1e-14);
}

TEST(t_gadget, ideal_ancilla_flag_removes_prep_noise) {
    NoiseModel m = kUneven;
    m.ideal_theta_ancilla = true;
    DenseProtocol ideal(m);
    DenseProtocol noisy(kUneven);
    const auto rho = DensityMatrix::from_pure(steane::encode_ideal({0.3, 0.1}));
    const auto target = ideal_logical_t({0.3, 0.1});
    EXPECT_GT(fidelity(target, ideal.t_gate_teleport(rho)), fidelity(target, noisy.t_gate_teleport(rho)));
    EXPECT_EQ(ideal.tally().channel_applications(), 21u);
}

TEST(gadgets, wrong_block_size_is_rejected) {
    DenseProtocol dense(NoiseModel::noiseless());
    const DensityMatrix small(3);
    EXPECT_THROW(dense.t_gate_teleport(small), UsageError);
    EXPECT_THROW(dense.stabilizer_outcomes(small, steane::all_generators()[0]), UsageError);
}
