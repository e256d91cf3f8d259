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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "steanesim/gadgets.hpp"
#include "steanesim/harness.hpp"
#include "steanesim/schedule.hpp"
#include "steanesim/steane.hpp"

namespace steanesim {

struct ValidationCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return !checks.empty();
    }
};

struct ValidateOptions {
    steane::DecoderTable decoder = steane::kHammingDecoder;  // replaceable to exercise the suite itself
    std::string sequence{kDefaultSequence};
    std::uint64_t n_traj = 10000;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    double tolerance = 1e-9;
};

/// |0_L>, |1_L> and |+_L>.
inline std::vector<steane::LogicalInput> correctability_inputs() {
    return {{0.0, 0.0}, {std::numbers::pi / 2.0, 0.0}, {std::numbers::pi / 4.0, 0.0}};
}

/// Every single-qubit X, Y, Z on every block qubit, removed by one noiseless cycle.
inline ValidationCheck check_single_error_correctability(const ValidateOptions& opt) {
    ValidationCheck c{"single-error correctability", true, ""};
    ProtocolOptions protocol;
    protocol.decoder = opt.decoder;
    DenseProtocol dense(NoiseModel::noiseless(), protocol);
    int failures = 0, cases = 0;
    double worst = 1.0;
    for (const auto& input : correctability_inputs()) {
        const PureState ideal = steane::encode_ideal(input);
        for (int q = 0; q < steane::kBlockSize; ++q)
            for (GateKind k : {GateKind::X, GateKind::Y, GateKind::Z}) {
                DensityMatrix rho = DensityMatrix::from_pure(ideal);
                apply_gate(rho, GateOp::single(k, q));
                const double f = fidelity(ideal, dense.qec_cycle(rho));
                worst = std::min(worst, f);
                ++cases;
                if (std::abs(1.0 - f) > opt.tolerance) ++failures;
            }
    }
    c.pass = failures == 0;
    std::ostringstream os;
    os << cases - failures << "/" << cases << " corrected, worst fidelity " << format_number(worst);
    c.detail = os.str();
    return c;
}

inline ValidationCheck check_noiseless_transparency(const ValidateOptions& opt) {
    ValidationCheck c{"noiseless transparency", true, ""};
    const GateSequence seq = parse_sequence(opt.sequence);
    ProtocolOptions protocol;
    protocol.decoder = opt.decoder;
    std::ostringstream os;
    for (int q : kSchemes) {
        const double f = run_schedule(seq, build_schedule(q, seq), NoiseModel::noiseless(), {}, protocol).fidelity;
        if (std::abs(1.0 - f) > opt.tolerance) c.pass = false;
        os << "q=" << q << ":" << format_number(f) << " ";
    }
    c.detail = os.str();
    return c;
}

/// Dense vs Monte-Carlo on "AB", QEC after each composite, depolarizing 1e-2.
inline ValidationCheck check_engine_agreement(const ValidateOptions& opt) {
    ValidationCheck c{"dense vs mc on AB", false, ""};
    const GateSequence seq = parse_sequence("AB");
    ProtocolOptions protocol;
    protocol.decoder = opt.decoder;
    const auto cmp = compare_engines(seq, build_schedule(20, seq), NoiseModel::depolarizing(1e-2), {}, opt.n_traj,
                                     opt.seed, opt.jobs, protocol);
    c.pass = cmp.pass;
    std::ostringstream os;
    os << "dense " << format_number(cmp.dense_fidelity) << ", mc " << format_number(cmp.mc_fidelity) << " +- "
       << format_number(cmp.std_error) << ", z " << format_number(cmp.z_score);
    c.detail = os.str();
    return c;
}

inline ValidationReport run_validation(const ValidateOptions& opt) {
    ValidationReport r;
    r.checks.push_back(check_single_error_correctability(opt));
    r.checks.push_back(check_noiseless_transparency(opt));
    r.checks.push_back(check_engine_agreement(opt));
    return r;
}

}  // namespace steanesim
