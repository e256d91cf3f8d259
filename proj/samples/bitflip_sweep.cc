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

// Bit-flip dominated sweep on a short sequence, written as CSV to stdout.

#include <iostream>

#include "steanesim/steanesim.hpp"

int main() {
    using namespace steanesim;
    SweepSpec spec;
    spec.preset = Preset::XDominant;
    spec.sequence = "ABBA";
    spec.p_grid = {1e-5, 1e-3};
    spec.schemes = {50, 20, 1, 0};
    spec.seed = 1;
    spec.validate();
    write_csv(std::cout, run_sweep(spec));
}
