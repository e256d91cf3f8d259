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

// Dense run of the default sequence at one depolarizing strength, q=20.

#include <iostream>

#include "steanesim/steanesim.hpp"

int main() {
    using namespace steanesim;
    const GateSequence seq = parse_sequence(kDefaultSequence);
    const QecSchedule schedule = build_schedule(20, seq);
    const NoiseModel noise = NoiseModel::depolarizing(1e-4);
    const auto result = run_schedule(seq, schedule, noise, {});
    std::cout << "fidelity " << format_number(result.fidelity) << "\n"
              << "infidelity " << format_number(result.infidelity) << "\n"
              << "qec cycles " << result.diagnostics.qec_cycles << ", T gadgets " << result.diagnostics.t_gadgets
              << "\n";
}
