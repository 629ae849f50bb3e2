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

#ifndef MFPSRO_RESTRICTED_NASH_H_
#define MFPSRO_RESTRICTED_NASH_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mfpsro/core.h"

namespace mfpsro {

// Gradient-free restricted-game Nash solver: minimizes restricted
// exploitability over the simplex with a cross-entropy search (Dirichlet
// proposals refit to elites) followed by a deterministic pairwise
// mass-transfer polish.

struct SimplexSearchConfig {
  int population_size = 64;
  double elite_fraction = 0.125;
  int iterations = 200;
  double tolerance = 1e-6;
  std::optional<std::vector<double>> warm_start;
  uint64_t seed = 0;

  void Validate() const;
};

// max_i J(pi_i, mu(nu)) - J(pi(nu), mu(nu)), deviations restricted to the set.
double RestrictedExploitability(const MeanFieldGame& game, const PolicySet& set,
                                const MixedPolicy& nu);

struct RestrictedNashResult {
  MixedPolicy nu;
  double exploitability = 0.0;
  bool converged = false;  // reached the configured tolerance
  int evaluations = 0;
};

// Best nu found; never worse than the uniform mixture, which is always
// seeded into generation zero.
RestrictedNashResult SolveRestrictedNash(const MeanFieldGame& game,
                                         const PolicySet& set,
                                         const SimplexSearchConfig& config);

bool IsRestrictedNash(const MeanFieldGame& game, const PolicySet& set,
                      const MixedPolicy& nu, double tol);

// Generic form of the same search over an arbitrary objective on the
// n-simplex; used for meta-game equilibrium refinement.
RestrictedNashResult MinimizeOverSimplex(
    int dims, const std::function<double(const std::vector<double>&)>& loss,
    const SimplexSearchConfig& config);

}  // namespace mfpsro

#endif  // MFPSRO_RESTRICTED_NASH_H_
