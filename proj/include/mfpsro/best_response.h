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

#ifndef MFPSRO_BEST_RESPONSE_H_
#define MFPSRO_BEST_RESPONSE_H_

#include <vector>

#include "mfpsro/core.h"

namespace mfpsro {

struct BestResponseResult {
  DeterministicPolicy policy;
  // Payoff of `policy` against the target flow (or the device-averaged
  // payoff for device best responses).
  double value = 0.0;
  // Initial-step state values, for diagnostics.
  std::vector<double> state_values;
};

// Exact best response against a fixed population flow, by backward induction
// (finite horizon) or value iteration to span 1e-10 (discounted). Ties are
// broken by the lowest action index, which keeps the PSRO set-membership
// termination test deterministic.
BestResponseResult BestResponse(const MeanFieldGame& game,
                                const PopulationFlow& mu);

// Best response to a unilateral deviation from the device: maximizes
// sum_t rho_t J(pi, mu(nu_t)). A single dynamic program over the
// device-averaged reward suffices because J is linear in the deviator's own
// flow.
BestResponseResult BestResponseCce(const MeanFieldGame& game,
                                   const PolicySet& set,
                                   const CorrelationDevice& rho);

// Best response after receiving recommendation `recommended` (an index into
// the set): maximizes sum_t rho(nu_t | pi_rec) J(pi, mu(nu_t)) where
// rho(nu | pi) = nu(pi) rho(nu) / sum_nu' nu'(pi) rho(nu').
// Throws ParamError when the recommendation has zero marginal under rho.
BestResponseResult BestResponseCe(const MeanFieldGame& game,
                                  const PolicySet& set,
                                  const CorrelationDevice& rho,
                                  int recommended);

// Stopping parameters for the discounted-mode value iteration.
inline constexpr double kValueIterationSpan = 1e-10;
inline constexpr int kValueIterationMaxSweeps = 100000;

}  // namespace mfpsro

#endif  // MFPSRO_BEST_RESPONSE_H_
