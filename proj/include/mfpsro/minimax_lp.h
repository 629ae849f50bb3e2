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

#ifndef MFPSRO_MINIMAX_LP_H_
#define MFPSRO_MINIMAX_LP_H_

#include <cstdint>
#include <vector>

#include "mfpsro/core.h"

namespace mfpsro {

// Solution of min_{rho in simplex} max_k (rho^T M)_k.
struct MinimaxSolution {
  std::vector<double> rho;          // over the T rows
  double value = 0.0;               // max_k rho^T M_k, recomputed from M
  std::vector<int> active_columns;  // columns attaining the max within 1e-9
};

inline constexpr double kLpDualityTolerance = 1e-9;

// Exact LP solve of min_rho v s.t. rho^T M <= v 1, rho >= 0, sum rho = 1.
// Dense primal simplex with Bland's anti-cycling rule on the standard
// game-LP reduction; optimality is certified against the extracted dual
// within kLpDualityTolerance, else NumericError. Matrix is row-major:
// matrix[t][k]. Throws NumericError on non-finite entries.
MinimaxSolution SolveMinimax(const std::vector<std::vector<double>>& matrix);

// One perturbation draw of the minimax problem.
struct NoisyGapSample {
  // Extra regret incurred by using the noisy-optimal weights on the clean
  // matrix: max_k (rho_eps^T M)_k - value(M).
  double optimality_gap = 0.0;
  // Realized bound 4 ||eps||_inf for this draw.
  double bound = 0.0;
};

// For each seed, perturbs every matrix entry with i.i.d. Gaussian(sigma)
// noise, solves the clean and noisy LPs, and reports the optimality gap
// together with the 4 ||eps||_inf bound it must satisfy.
std::vector<NoisyGapSample> NoisyCompressionGap(
    const std::vector<std::vector<double>>& matrix, double sigma,
    const std::vector<uint64_t>& seeds);

}  // namespace mfpsro

#endif  // MFPSRO_MINIMAX_LP_H_
