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

#include "mfpsro/baselines.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "mfpsro/best_response.h"
#include "mfpsro/metrics.h"

namespace mfpsro {

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point from) {
  return std::chrono::duration<double>(Clock::now() - from).count();
}

int PolicySteps(const MeanFieldGame& game) {
  return game.horizon.finite() ? game.horizon.length : 1;
}

}  // namespace

PopulationFlow StochasticPolicyFlow(const MeanFieldGame& game,
                                    const std::vector<double>& action_probs,
                                    int time_steps) {
  PopulationFlow flow;
  flow.horizon = game.horizon;
  flow.slices.reserve(game.horizon.length);
  std::vector<double> mu = game.initial_distribution;
  int na = game.num_actions;
  for (int s = 0; s < game.horizon.length; ++s) {
    int step = (time_steps == 1) ? 0 : s;
    FlowSlice slice(game.num_states, na);
    std::vector<double> next(game.num_states, 0.0);
    for (State x = 0; x < game.num_states; ++x) {
      if (mu[x] == 0.0) continue;
      for (Action a = 0; a < na; ++a) {
        double p = mu[x] * action_probs[(step * game.num_states + x) * na + a];
        if (p == 0.0) continue;
        slice.At(x, a) += p;
        next[game.transition(x, a)] += p;
      }
    }
    flow.slices.push_back(std::move(slice));
    mu = std::move(next);
  }
  return flow;
}

BaselineRun FictitiousPlay(const MeanFieldGame& game, int iterations) {
  if (iterations < 1) throw ParamError("fictitious play needs iterations >= 1");
  game.Validate();

  BaselineRun run;
  run.algorithm = "fp";

  PolicySet set(game);
  set.Add(ConstantPolicy(game, 0));
  std::vector<double> counts = {1.0};
  PopulationFlow average = set.flow(0);

  Clock::time_point t0 = Clock::now();
  for (int k = 1; k <= iterations; ++k) {
    BestResponseResult br = BestResponse(game, average);
    int idx = set.IndexOf(br.policy);
    if (idx < 0) {
      idx = set.Add(br.policy);
      counts.push_back(0.0);
    }
    counts[idx] += 1.0;
    double keep = static_cast<double>(k) / (k + 1);
    for (int s = 0; s < average.num_steps(); ++s) {
      FlowSlice blended(game.num_states, game.num_actions);
      blended.AddScaled(average.slices[s], keep);
      blended.AddScaled(set.flow(idx).slices[s], 1.0 - keep);
      average.slices[s] = std::move(blended);
    }

    MixedPolicy nu;
    nu.weights = counts;
    for (double& w : nu.weights) w /= (k + 1);
    double gap = Exploitability(game, set, nu).value;
    run.curve.push_back({k, Seconds(t0), gap});
    if (k == iterations) {
      run.support = set.policies();
      run.final_weights = nu.weights;
    }
  }
  return run;
}

namespace {

// Backward state-action values of a stochastic policy against an environment
// flow; finite horizon only.
std::vector<double> FiniteQValues(const MeanFieldGame& game,
                                  const std::vector<double>& probs,
                                  const std::vector<std::vector<double>>& tables) {
  int steps = game.horizon.length;
  int na = game.num_actions;
  std::vector<double> q(static_cast<size_t>(steps) * game.num_states * na);
  std::vector<double> value(game.num_states, 0.0);
  for (int s = steps - 1; s >= 0; --s) {
    std::vector<double> next = value;
    for (State x = 0; x < game.num_states; ++x) {
      double v = 0.0;
      for (Action a = 0; a < na; ++a) {
        double qa = tables[s][x * na + a] + next[game.transition(x, a)];
        q[(static_cast<size_t>(s) * game.num_states + x) * na + a] = qa;
        v += probs[(static_cast<size_t>(s) * game.num_states + x) * na + a] * qa;
      }
      value[x] = v;
    }
  }
  return q;
}

// Discounted analogue: policy evaluation to the span tolerance, then one
// backup to state-action values.
std::vector<double> DiscountedQValues(const MeanFieldGame& game,
                                      const std::vector<double>& probs,
                                      const std::vector<double>& table) {
  int na = game.num_actions;
  double gamma = game.horizon.gamma;
  std::vector<double> value(game.num_states, 0.0);
  for (int sweep = 0; sweep < kValueIterationMaxSweeps; ++sweep) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    std::vector<double> next(game.num_states);
    for (State x = 0; x < game.num_states; ++x) {
      double v = 0.0;
      for (Action a = 0; a < na; ++a) {
        v += probs[x * na + a] *
             (table[x * na + a] + gamma * value[game.transition(x, a)]);
      }
      next[x] = v;
      lo = std::min(lo, next[x] - value[x]);
      hi = std::max(hi, next[x] - value[x]);
    }
    value = std::move(next);
    if (hi - lo < kValueIterationSpan) break;
  }
  std::vector<double> q(static_cast<size_t>(game.num_states) * na);
  for (State x = 0; x < game.num_states; ++x) {
    for (Action a = 0; a < na; ++a) {
      q[x * na + a] = table[x * na + a] + gamma * value[game.transition(x, a)];
    }
  }
  return q;
}

double StochasticPayoff(const MeanFieldGame& game,
                        const std::vector<double>& probs, int time_steps,
                        const PopulationFlow& own_flow,
                        const std::vector<std::vector<double>>& tables) {
  std::vector<double> weights = StepWeights(game.horizon);
  int na = game.num_actions;
  double total = 0.0;
  for (int s = 0; s < game.horizon.length; ++s) {
    const std::vector<double>& table = tables[game.horizon.finite() ? s : 0];
    int step = (time_steps == 1) ? 0 : s;
    double acc = 0.0;
    for (State x = 0; x < game.num_states; ++x) {
      double px = own_flow.slices[s].StateProb(x);
      if (px == 0.0) continue;
      for (Action a = 0; a < na; ++a) {
        acc += px * probs[(step * game.num_states + x) * na + a] *
               table[x * na + a];
      }
    }
    total += weights[s] * acc;
  }
  return total;
}

}  // namespace

BaselineRun OnlineMirrorDescent(const MeanFieldGame& game, int iterations,
                                double learning_rate) {
  if (iterations < 1) throw ParamError("mirror descent needs iterations >= 1");
  if (!(learning_rate > 0.0)) {
    throw ParamError("mirror descent needs a positive learning rate");
  }
  game.Validate();

  BaselineRun run;
  run.algorithm = "omd";
  run.learning_rate = learning_rate;

  int steps = PolicySteps(game);
  int na = game.num_actions;
  size_t cells = static_cast<size_t>(steps) * game.num_states * na;
  std::vector<double> accumulator(cells, 0.0);
  std::vector<double> probs(cells, 1.0 / na);

  Clock::time_point t0 = Clock::now();
  for (int k = 1; k <= iterations; ++k) {
    // Per-cell softmax of the scaled accumulator, max-subtracted.
    for (int c = 0; c < steps * game.num_states; ++c) {
      double top = -std::numeric_limits<double>::infinity();
      for (Action a = 0; a < na; ++a) {
        top = std::max(top, learning_rate * accumulator[c * na + a]);
      }
      double total = 0.0;
      for (Action a = 0; a < na; ++a) {
        probs[c * na + a] =
            std::exp(learning_rate * accumulator[c * na + a] - top);
        total += probs[c * na + a];
      }
      for (Action a = 0; a < na; ++a) probs[c * na + a] /= total;
    }

    PopulationFlow flow = StochasticPolicyFlow(game, probs, steps);
    std::vector<std::vector<double>> tables = RewardTables(game, flow);
    std::vector<double> q =
        game.horizon.finite() ? FiniteQValues(game, probs, tables)
                              : DiscountedQValues(game, probs, tables[0]);
    for (size_t c = 0; c < cells; ++c) accumulator[c] += q[c];

    double on_policy = StochasticPayoff(game, probs, steps, flow, tables);
    double gap = BestResponse(game, flow).value - on_policy;
    run.curve.push_back({k, Seconds(t0), gap});
  }
  run.final_policy_probs = probs;
  return run;
}

}  // namespace mfpsro
