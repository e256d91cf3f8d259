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

// Dense and Monte-Carlo estimates of the same short circuit.

#include <iostream>

#include "steanesim/steanesim.hpp"

int main() {
    using namespace steanesim;
    const GateSequence seq = parse_sequence("AB");
    const auto cmp = compare_engines(seq, build_schedule(20, seq), NoiseModel::depolarizing(1e-2), {}, 2000, 7);
    std::cout << "dense " << format_number(cmp.dense_fidelity) << "\n"
              << "mc    " << format_number(cmp.mc_fidelity) << " +- " << format_number(cmp.std_error) << "\n"
              << "z     " << format_number(cmp.z_score) << (cmp.pass ? " (within 3 sigma)" : " (outside 3 sigma)")
              << "\n";
}
