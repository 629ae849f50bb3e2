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

#include "mfpsro/best_response.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mfpsro {

namespace {

// Payoff ties this close are broken toward the lower action index; exact
// zero would make the tie-break depend on 1e-16-level float noise.
constexpr double kTieTolerance = 1e-12;

// Maximizes the horizon-weighted reward-table objective. Tables hold one
// entry per step for finite horizon; a single stationary table for
// discounted mode.
BestResponseResult SolveTables(const MeanFieldGame& game,
                               const std::vector<std::vector<double>>& tables) {
  BestResponseResult result;
  result.policy.num_states = game.num_states;

  if (game.horizon.finite()) {
    int steps = game.horizon.length;
    result.policy.time_steps = steps;
    result.policy.actions.assign(static_cast<size_t>(steps) * game.num_states,
                                 0);
    std::vector<double> value(game.num_states, 0.0);
    for (int s = steps - 1; s >= 0; --s) {
      std::vector<double> next = value;
      const std::vector<double>& table = tables[s];
      for (State x = 0; x < game.num_states; ++x) {
        double best = -std::numeric_limits<double>::infinity();
        Action best_a = 0;
        for (Action a = 0; a < game.num_actions; ++a) {
          double q = table[x * game.num_actions + a] +
                     next[game.transition(x, a)];
          if (q > best + kTieTolerance) {
            best = q;
            best_a = a;
          }
        }
        value[x] = best;
        result.policy.actions[s * game.num_states + x] = best_a;
      }
      if (s == 0) result.state_values = value;
    }
    double total = 0.0;
    for (State x = 0; x < game.num_states; ++x) {
      total += game.initial_distribution[x] * value[x];
    }
    result.value = total;
    return result;
  }

  // Discounted: value iteration on the stationary table, then a greedy
  // policy. The returned value re-weights the greedy rollout with the
  // truncated, normalized discount factors so that it matches Payoff().
  const std::vector<double>& table = tables[0];
  double gamma = game.horizon.gamma;
  result.policy.time_steps = 1;
  result.policy.actions.assign(game.num_states, 0);
  std::vector<double> value(game.num_states, 0.0);
  for (int sweep = 0; sweep < kValueIterationMaxSweeps; ++sweep) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    std::vector<double> next(game.num_states);
    for (State x = 0; x < game.num_states; ++x) {
      double best = -std::numeric_limits<double>::infinity();
      for (Action a = 0; a < game.num_actions; ++a) {
        double q = table[x * game.num_actions + a] +
                   gamma * value[game.transition(x, a)];
        best = std::max(best, q);
      }
      next[x] = best;
      double d = next[x] - value[x];
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    value = std::move(next);
    if (hi - lo < kValueIterationSpan) break;
  }
  for (State x = 0; x < game.num_states; ++x) {
    double best = -std::numeric_limits<double>::infinity();
    Action best_a = 0;
    for (Action a = 0; a < game.num_actions; ++a) {
      double q = table[x * game.num_actions + a] +
                 gamma * value[game.transition(x, a)];
      if (q > best + kTieTolerance) {
        best = q;
        best_a = a;
      }
    }
    result.policy.actions[x] = best_a;
  }
  result.state_values = value;

  // Truncated rollout of the greedy policy.
  std::vector<double> weights = StepWeights(game.horizon);
  std::vector<double> mu = game.initial_distribution;
  double total = 0.0;
  for (int s = 0; s < game.horizon.length; ++s) {
    std::vector<double> next_mu(game.num_states, 0.0);
    double step = 0.0;
    for (State x = 0; x < game.num_states; ++x) {
      if (mu[x] == 0.0) continue;
      Action a = result.policy.actions[x];
      step += mu[x] * table[x * game.num_actions + a];
      next_mu[game.transition(x, a)] += mu[x];
    }
    total += weights[s] * step;
    mu = std::move(next_mu);
  }
  result.value = total;
  return result;
}

std::vector<std::vector<double>> DeviceAveragedTables(
    const MeanFieldGame& game, const PolicySet& set,
    const CorrelationDevice& rho, const std::vector<double>& atom_weights) {
  std::vector<std::vector<double>> averaged;
  for (int t = 0; t < rho.num_atoms(); ++t) {
    if (atom_weights[t] == 0.0) continue;
    PopulationFlow flow = MixtureFlow(set, rho.atoms[t].nu);
    std::vector<std::vector<double>> tables = RewardTables(game, flow);
    if (averaged.empty()) {
      averaged.assign(tables.size(),
                      std::vector<double>(tables[0].size(), 0.0));
    }
    for (size_t s = 0; s < tables.size(); ++s) {
      for (size_t i = 0; i < tables[s].size(); ++i) {
        averaged[s][i] += atom_weights[t] * tables[s][i];
      }
    }
  }
  return averaged;
}

}  // namespace

BestResponseResult BestResponse(const MeanFieldGame& game,
                                const PopulationFlow& mu) {
  return SolveTables(game, RewardTables(game, mu));
}

BestResponseResult BestResponseCce(const MeanFieldGame& game,
                                   const PolicySet& set,
                                   const CorrelationDevice& rho) {
  rho.Validate();
  std::vector<double> weights(rho.num_atoms());
  for (int t = 0; t < rho.num_atoms(); ++t) weights[t] = rho.atoms[t].weight;
  return SolveTables(game, DeviceAveragedTables(game, set, rho, weights));
}

BestResponseResult BestResponseCe(const MeanFieldGame& game,
                                  const PolicySet& set,
                                  const CorrelationDevice& rho,
                                  int recommended) {
  rho.Validate();
  if (recommended < 0 || recommended >= set.size()) {
    throw LookupError("recommended policy index outside the set");
  }
  double marginal = rho.PolicyMarginal(recommended);
  if (marginal <= 0.0) {
    throw ParamError("conditional undefined: recommendation has zero marginal");
  }
  std::vector<double> weights(rho.num_atoms());
  for (int t = 0; t < rho.num_atoms(); ++t) {
    weights[t] =
        rho.atoms[t].weight * rho.atoms[t].nu.weights[recommended] / marginal;
  }
  return SolveTables(game, DeviceAveragedTables(game, set, rho, weights));
}

}  // namespace mfpsro
