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

#ifndef MFPSRO_METRICS_H_
#define MFPSRO_METRICS_H_

#include <cstdint>
#include <vector>

#include "mfpsro/core.h"

namespace mfpsro {

// True-game certification metrics. Deviations range over the full
// deterministic policy space (via exact best responses), not just the
// restricted set, so these are independent of the solvers' bookkeeping.

struct GapReport {
  enum class Kind { kNash, kCce, kCe };
  Kind kind = Kind::kNash;
  double value = 0.0;
  // Best deviating policy found.
  DeterministicPolicy witness;
  // For CE gaps, the recommendation (index into the set) the witness
  // deviates from; -1 otherwise.
  int witness_recommendation = -1;
};

// max_pi J(pi, mu(nu)) - J(pi(nu), mu(nu)) over all deterministic policies.
GapReport Exploitability(const MeanFieldGame& game, const PolicySet& set,
                         const MixedPolicy& nu);

// max_pi sum_t rho_t (J(pi, mu(nu_t)) - J(pi(nu_t), mu(nu_t))).
GapReport CceGap(const MeanFieldGame& game, const PolicySet& set,
                 const CorrelationDevice& rho);

// max_pi' max over recommended pi (positive marginal) of
// sum_t rho(nu_t | pi) (J(pi', mu(nu_t)) - J(pi(nu_t), mu(nu_t))).
GapReport CeGap(const MeanFieldGame& game, const PolicySet& set,
                const CorrelationDevice& rho);

struct DiffAffineReport {
  bool is_diff_affine = true;
  // Witness of a midpoint violation when not diff-affine.
  State x1 = -1, x2 = -1;
  Action a1 = -1, a2 = -1;
  double violation = 0.0;
};

// Randomized midpoint test of the reward-difference affinity in mu: for
// random (x, a, x', a') and random occupancy slices, checks that
// Delta r((m1+m2)/2) = (Delta r(m1) + Delta r(m2)) / 2 within tol, where
// Delta r = r(x, a, .) - r(x', a', .). Refutation-complete only.
DiffAffineReport CheckDiffAffine(const MeanFieldGame& game, int trials = 1000,
                                 double tol = 1e-8, uint64_t seed = 0);

// M[i][j] = J(pi_i, mu^{pi_j}).
std::vector<std::vector<double>> MetaGameMatrix(const MeanFieldGame& game,
                                                const PolicySet& set);

// Symmetric equilibrium weights of the two-player game (M, M^T). For a
// zero-sum-like M (M + M^T = 0) this is one exact LP solve; otherwise the
// antisymmetrized LP solution seeds a simplex search on the meta-game
// exploitability max_i (M nu)_i - nu^T M nu. Under diff-affinity the result
// is a restricted Nash equilibrium of the source game.
std::vector<double> SymmetricNashOfMetaGame(
    const std::vector<std::vector<double>>& meta_game, uint64_t seed = 0);

struct MonotonicityReport {
  bool monotone = true;
  // Witness pair violating the two-policy condition.
  DeterministicPolicy first, second;
  double violation = 0.0;
};

// Sampled check of J(p1,m1) + J(p2,m2) - J(p2,m1) - J(p1,m2) <= tol over
// random deterministic policy pairs (refutation-complete only).
MonotonicityReport CheckMonotonicity(const MeanFieldGame& game, int pairs = 500,
                                     double tol = 1e-9, uint64_t seed = 0);

// Same condition inside the restricted game spanned by the set, over random
// mixed-policy pairs.
MonotonicityReport CheckRestrictedMonotonicity(const MeanFieldGame& game,
                                               const PolicySet& set,
                                               int pairs = 100,
                                               double tol = 1e-9,
                                               uint64_t seed = 0);

}  // namespace mfpsro

#endif  // MFPSRO_METRICS_H_
