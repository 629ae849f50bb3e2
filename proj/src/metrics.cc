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

#include "mfpsro/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mfpsro/best_response.h"
#include "mfpsro/minimax_lp.h"
#include "mfpsro/restricted_nash.h"

namespace mfpsro {

GapReport Exploitability(const MeanFieldGame& game, const PolicySet& set,
                         const MixedPolicy& nu) {
  PopulationFlow flow = MixtureFlow(set, nu);
  BestResponseResult br = BestResponse(game, flow);
  double on_policy = MixedPayoff(game, set, nu, flow);
  GapReport report;
  report.kind = GapReport::Kind::kNash;
  report.value = br.value - on_policy;
  report.witness = std::move(br.policy);
  return report;
}

namespace {

// rho-weighted on-device payoff sum_t w_t J(pi(nu_t), mu(nu_t)).
double OnDevicePayoff(const MeanFieldGame& game, const PolicySet& set,
                      const CorrelationDevice& rho,
                      const std::vector<double>& atom_weights) {
  double total = 0.0;
  for (int t = 0; t < rho.num_atoms(); ++t) {
    if (atom_weights[t] == 0.0) continue;
    PopulationFlow flow = MixtureFlow(set, rho.atoms[t].nu);
    total += atom_weights[t] * MixedPayoff(game, set, rho.atoms[t].nu, flow);
  }
  return total;
}

}  // namespace

GapReport CceGap(const MeanFieldGame& game, const PolicySet& set,
                 const CorrelationDevice& rho) {
  rho.Validate();
  BestResponseResult br = BestResponseCce(game, set, rho);
  std::vector<double> weights(rho.num_atoms());
  for (int t = 0; t < rho.num_atoms(); ++t) weights[t] = rho.atoms[t].weight;
  GapReport report;
  report.kind = GapReport::Kind::kCce;
  report.value = br.value - OnDevicePayoff(game, set, rho, weights);
  report.witness = std::move(br.policy);
  return report;
}

GapReport CeGap(const MeanFieldGame& game, const PolicySet& set,
                const CorrelationDevice& rho) {
  rho.Validate();
  GapReport report;
  report.kind = GapReport::Kind::kCe;
  report.value = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (int i = 0; i < set.size(); ++i) {
    double marginal = rho.PolicyMarginal(i);
    if (marginal <= 0.0) continue;
    any = true;
    BestResponseResult br = BestResponseCe(game, set, rho, i);
    std::vector<double> conditional(rho.num_atoms());
    for (int t = 0; t < rho.num_atoms(); ++t) {
      conditional[t] =
          rho.atoms[t].weight * rho.atoms[t].nu.weights[i] / marginal;
    }
    double gap = br.value - OnDevicePayoff(game, set, rho, conditional);
    if (gap > report.value) {
      report.value = gap;
      report.witness = std::move(br.policy);
      report.witness_recommendation = i;
    }
  }
  if (!any) throw ParamError("device recommends no policy");
  return report;
}

namespace {

FlowSlice RandomSlice(int num_states, int num_actions, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  FlowSlice slice(num_states, num_actions);
  double total = 0.0;
  for (State x = 0; x < num_states; ++x) {
    for (Action a = 0; a < num_actions; ++a) {
      double v = e(rng);
      slice.At(x, a) = v;
      total += v;
    }
  }
  for (State x = 0; x < num_states; ++x) {
    for (Action a = 0; a < num_actions; ++a) slice.At(x, a) /= total;
  }
  return slice;
}

FlowSlice Midpoint(const FlowSlice& a, const FlowSlice& b) {
  FlowSlice mid(a.num_states(), a.num_actions());
  mid.AddScaled(a, 0.5);
  mid.AddScaled(b, 0.5);
  return mid;
}

DeterministicPolicy RandomPolicy(const MeanFieldGame& game,
                                 std::mt19937_64& rng) {
  DeterministicPolicy pi;
  pi.num_states = game.num_states;
  pi.time_steps = game.horizon.finite() ? game.horizon.length : 1;
  pi.actions.resize(static_cast<size_t>(pi.time_steps) * game.num_states);
  std::uniform_int_distribution<int> d(0, game.num_actions - 1);
  for (Action& a : pi.actions) a = d(rng);
  return pi;
}

}  // namespace

DiffAffineReport CheckDiffAffine(const MeanFieldGame& game, int trials,
                                 double tol, uint64_t seed) {
  if (trials < 1) throw ParamError("diff-affinity test needs trials >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> sx(0, game.num_states - 1);
  std::uniform_int_distribution<int> sa(0, game.num_actions - 1);
  DiffAffineReport report;
  for (int k = 0; k < trials; ++k) {
    State x1 = sx(rng), x2 = sx(rng);
    Action a1 = sa(rng), a2 = sa(rng);
    FlowSlice m1 = RandomSlice(game.num_states, game.num_actions, rng);
    FlowSlice m2 = RandomSlice(game.num_states, game.num_actions, rng);
    FlowSlice mid = Midpoint(m1, m2);
    auto delta = [&](const FlowSlice& m) {
      return game.reward(x1, a1, m) - game.reward(x2, a2, m);
    };
    double gap = std::abs(delta(mid) - 0.5 * (delta(m1) + delta(m2)));
    if (gap > tol) {
      report.is_diff_affine = false;
      report.x1 = x1;
      report.x2 = x2;
      report.a1 = a1;
      report.a2 = a2;
      report.violation = gap;
      return report;
    }
  }
  return report;
}

std::vector<std::vector<double>> MetaGameMatrix(const MeanFieldGame& game,
                                                const PolicySet& set) {
  if (set.size() < 1) throw ParamError("meta-game of an empty set");
  int n = set.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n));
  for (int j = 0; j < n; ++j) {
    std::vector<double> payoffs = SetPayoffs(game, set, set.flow(j));
    for (int i = 0; i < n; ++i) m[i][j] = payoffs[i];
  }
  return m;
}

std::vector<double> SymmetricNashOfMetaGame(
    const std::vector<std::vector<double>>& meta_game, uint64_t seed) {
  int n = static_cast<int>(meta_game.size());
  if (n == 1) return {1.0};

  double skew = 0.0;
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(meta_game[i].size()) != n) {
      throw ParamError("meta-game matrix must be square");
    }
    for (int j = 0; j < n; ++j) {
      skew = std::max(skew, std::abs(meta_game[i][j] + meta_game[j][i]));
    }
  }

  // Equilibrium of the antisymmetric part A = (M - M^T)/2: minimizing
  // max_k (nu^T A^T)_k = max_k (A nu)_k reaches value 0, so the solution
  // has A nu <= 0, i.e. no pure deviation gains against nu.
  std::vector<std::vector<double>> transposed_skew(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      transposed_skew[i][j] = 0.5 * (meta_game[j][i] - meta_game[i][j]);
    }
  }
  MinimaxSolution lp = SolveMinimax(transposed_skew);
  if (skew <= 1e-9) return lp.rho;

  // Not zero-sum-like: refine the LP seed against the meta-game
  // exploitability, which under diff-affinity equals the restricted one.
  auto loss = [&meta_game, n](const std::vector<double>& nu) {
    double played = 0.0;
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      double row = 0.0;
      for (int j = 0; j < n; ++j) row += meta_game[i][j] * nu[j];
      best = std::max(best, row);
      played += nu[i] * row;
    }
    return best - played;
  };
  SimplexSearchConfig config;
  config.iterations = 300;
  config.tolerance = 1e-9;
  config.warm_start = lp.rho;
  config.seed = seed;
  return MinimizeOverSimplex(n, loss, config).nu.weights;
}

MonotonicityReport CheckMonotonicity(const MeanFieldGame& game, int pairs,
                                     double tol, uint64_t seed) {
  if (pairs < 1) throw ParamError("monotonicity check needs pairs >= 1");
  std::mt19937_64 rng(seed);
  MonotonicityReport report;
  for (int k = 0; k < pairs; ++k) {
    DeterministicPolicy p1 = RandomPolicy(game, rng);
    DeterministicPolicy p2 = RandomPolicy(game, rng);
    PopulationFlow f1 = OccupancyFlow(game, p1);
    PopulationFlow f2 = OccupancyFlow(game, p2);
    double lhs = Payoff(game, p1, f1, f1) + Payoff(game, p2, f2, f2) -
                 Payoff(game, p2, f2, f1) - Payoff(game, p1, f1, f2);
    if (lhs > tol) {
      report.monotone = false;
      report.first = std::move(p1);
      report.second = std::move(p2);
      report.violation = lhs;
      return report;
    }
  }
  return report;
}

MonotonicityReport CheckRestrictedMonotonicity(const MeanFieldGame& game,
                                               const PolicySet& set,
                                               int pairs, double tol,
                                               uint64_t seed) {
  if (pairs < 1) throw ParamError("monotonicity check needs pairs >= 1");
  std::mt19937_64 rng(seed);
  std::gamma_distribution<double> g(1.0, 1.0);
  auto random_mixture = [&]() {
    MixedPolicy nu;
    nu.weights.resize(set.size());
    double total = 0.0;
    for (double& w : nu.weights) {
      w = g(rng) + 1e-12;
      total += w;
    }
    for (double& w : nu.weights) w /= total;
    return nu;
  };
  MonotonicityReport report;
  for (int k = 0; k < pairs; ++k) {
    MixedPolicy nu1 = random_mixture();
    MixedPolicy nu2 = random_mixture();
    PopulationFlow f1 = MixtureFlow(set, nu1);
    PopulationFlow f2 = MixtureFlow(set, nu2);
    double lhs = MixedPayoff(game, set, nu1, f1) +
                 MixedPayoff(game, set, nu2, f2) -
                 MixedPayoff(game, set, nu2, f1) -
                 MixedPayoff(game, set, nu1, f2);
    if (lhs > tol) {
      report.monotone = false;
      report.violation = lhs;
      return report;
    }
  }
  return report;
}

}  // namespace mfpsro
