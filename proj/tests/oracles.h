// Copyright 2026 The mfpsro Authors
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

#ifndef MFPSRO_TESTS_ORACLES_H_
#define MFPSRO_TESTS_ORACLES_H_

#include <vector>

#include "mfpsro/core.h"

// Brute-force reference implementations used only by the test suite. They
// certify the production solvers, so they deliberately reimplement flows,
// payoffs, enumeration and minimax values from the raw game definition
// instead of calling the production operations.

namespace mfpsro::oracle {

// Enumeration guard: games with |X| <= 4, |A| <= 4, S <= 3 and at most 10^4
// deterministic policies. Throws ParamError beyond the guard.
bool WithinEnumerationBounds(const MeanFieldGame& game);
std::vector<DeterministicPolicy> EnumeratePolicies(const MeanFieldGame& game);

// Independent forward simulation of a policy's state-action occupancy.
std::vector<FlowSlice> SimulateFlow(const MeanFieldGame& game,
                                    const DeterministicPolicy& policy);

// Expected payoff of `policy` when the environment occupancies are
// `env_slices` (per step; discounted mode reads the normalized discounted
// aggregate), computed by direct summation.
double SimulatePayoff(const MeanFieldGame& game,
                      const DeterministicPolicy& policy,
                      const std::vector<FlowSlice>& env_slices);

// Exploitability of the mixture (weights over `support`) against the full
// enumerated deterministic policy space.
double BruteExploitability(const MeanFieldGame& game,
                           const std::vector<DeterministicPolicy>& support,
                           const std::vector<double>& weights);

// Value of min_rho max_col rho^T M for matrices up to 6x6, by equalizing
// square-support enumeration with optimality checks (falls back to a
// fictitious-play bracket on pathological ties). Accurate to ~1e-7.
double BruteMinimaxValue(const std::vector<std::vector<double>>& matrix);

}  // namespace mfpsro::oracle

#endif  // MFPSRO_TESTS_ORACLES_H_
