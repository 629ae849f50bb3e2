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

#include "mfpsro/core.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mfpsro {

namespace {

bool IsDistribution(const std::vector<double>& v, double tol) {
  double sum = 0.0;
  for (double p : v) {
    if (!(p >= -tol) || !std::isfinite(p)) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) <= tol;
}

}  // namespace

std::vector<double> FlowSlice::StateDistribution() const {
  std::vector<double> mu(num_states_);
  for (State x = 0; x < num_states_; ++x) mu[x] = StateProb(x);
  return mu;
}

std::vector<double> FlowSlice::ActionDistribution() const {
  std::vector<double> m(num_actions_);
  for (Action a = 0; a < num_actions_; ++a) m[a] = ActionMarginal(a);
  return m;
}

double FlowSlice::TotalMass() const {
  return std::accumulate(joint_.begin(), joint_.end(), 0.0);
}

void FlowSlice::AddScaled(const FlowSlice& other, double w) {
  for (size_t i = 0; i < joint_.size(); ++i) joint_[i] += w * other.joint_[i];
}

Horizon Horizon::Finite(int steps) {
  if (steps < 1) throw ConfigError("finite horizon requires at least 1 step");
  Horizon h;
  h.kind = Kind::kFinite;
  h.length = steps;
  return h;
}

Horizon Horizon::Discounted(double gamma, int effective_length) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw ConfigError("discount factor must lie in (0, 1)");
  }
  Horizon h;
  h.kind = Kind::kDiscounted;
  h.gamma = gamma;
  if (effective_length > 0) {
    h.length = effective_length;
  } else {
    h.length = static_cast<int>(std::ceil(std::log(1e-8) / std::log(gamma)));
    h.length = std::max(h.length, 1);
  }
  return h;
}

void MeanFieldGame::Validate() const {
  if (num_states < 1 || num_actions < 1) {
    throw ConfigError("game needs at least one state and one action");
  }
  if (!reward || !transition) {
    throw ConfigError("game is missing its reward or transition function");
  }
  if (static_cast<int>(initial_distribution.size()) != num_states ||
      !IsDistribution(initial_distribution, kProbTolerance)) {
    throw ConfigError("mu0 is not a probability distribution over the states");
  }
  for (State x = 0; x < num_states; ++x) {
    for (Action a = 0; a < num_actions; ++a) {
      State y = transition(x, a);
      if (y < 0 || y >= num_states) {
        throw ConfigError("transition leaves the state space");
      }
    }
  }
  if (horizon.length < 1) throw ConfigError("empty horizon");
}

DeterministicPolicy ConstantPolicy(const MeanFieldGame& game, Action action) {
  DeterministicPolicy pi;
  pi.num_states = game.num_states;
  pi.time_steps = game.horizon.finite() ? game.horizon.length : 1;
  pi.actions.assign(static_cast<size_t>(pi.time_steps) * game.num_states,
                    action);
  return pi;
}

int PolicyTableSize(const MeanFieldGame& game) {
  int steps = game.horizon.finite() ? game.horizon.length : 1;
  return steps * game.num_states;
}

void MixedPolicy::Validate() const {
  if (weights.empty()) throw ParamError("mixed policy over an empty set");
  if (!IsDistribution(weights, kProbTolerance)) {
    throw ParamError("mixed policy weights are not a distribution");
  }
}

MixedPolicy MixedPolicy::Delta(int index, int size) {
  MixedPolicy nu;
  nu.weights.assign(size, 0.0);
  nu.weights.at(index) = 1.0;
  return nu;
}

MixedPolicy MixedPolicy::Uniform(int size) {
  MixedPolicy nu;
  nu.weights.assign(size, 1.0 / size);
  return nu;
}

FlowSlice PopulationFlow::DiscountedAggregate() const {
  if (horizon.finite()) {
    throw ParamError("discounted aggregate of a finite-horizon flow");
  }
  FlowSlice agg(slices[0].num_states(), slices[0].num_actions());
  double w = 1.0;
  double total = 0.0;
  for (const FlowSlice& s : slices) {
    agg.AddScaled(s, w);
    total += w;
    w *= horizon.gamma;
  }
  // total == (1 - gamma^L) / (1 - gamma); dividing renormalizes.
  FlowSlice out(agg.num_states(), agg.num_actions());
  out.AddScaled(agg, 1.0 / total);
  return out;
}

void PopulationFlow::Validate(double tol) const {
  if (static_cast<int>(slices.size()) != horizon.length) {
    throw ParamError("flow length disagrees with the horizon");
  }
  for (const FlowSlice& s : slices) {
    if (std::abs(s.TotalMass() - 1.0) > tol) {
      throw ParamError("flow slice mass drifted from 1");
    }
    for (double p : s.joint()) {
      if (!(p >= -tol) || !std::isfinite(p)) {
        throw ParamError("flow slice has a negative or non-finite entry");
      }
    }
  }
}

PopulationFlow OccupancyFlow(const MeanFieldGame& game,
                             const DeterministicPolicy& policy) {
  bool stationary = (policy.time_steps == 1);
  bool finite = game.horizon.finite();
  if (finite && !stationary && policy.time_steps != game.horizon.length) {
    throw ConfigError("policy horizon disagrees with the game horizon");
  }
  if (!finite && !stationary) {
    throw ConfigError("discounted games use stationary policies");
  }
  if (policy.num_states != game.num_states) {
    throw ConfigError("policy state space disagrees with the game");
  }

  PopulationFlow flow;
  flow.horizon = game.horizon;
  flow.slices.reserve(game.horizon.length);

  std::vector<double> mu = game.initial_distribution;
  for (int s = 0; s < game.horizon.length; ++s) {
    FlowSlice slice(game.num_states, game.num_actions);
    std::vector<double> next(game.num_states, 0.0);
    for (State x = 0; x < game.num_states; ++x) {
      if (mu[x] == 0.0) continue;
      Action a = policy.ActionAt(s, x);
      slice.At(x, a) += mu[x];
      next[game.transition(x, a)] += mu[x];
    }
    flow.slices.push_back(std::move(slice));
    mu = std::move(next);
  }
  return flow;
}

PopulationFlow MixtureFlow(const PolicySet& set, const MixedPolicy& nu) {
  nu.Validate();
  if (nu.size() != set.size()) {
    throw LookupError("mixture support does not match the policy set");
  }
  const MeanFieldGame& game = set.game();
  PopulationFlow flow;
  flow.horizon = game.horizon;
  flow.slices.assign(game.horizon.length,
                     FlowSlice(game.num_states, game.num_actions));
  for (int i = 0; i < nu.size(); ++i) {
    if (nu.weights[i] == 0.0) continue;
    const PopulationFlow& fi = set.flow(i);
    for (int s = 0; s < game.horizon.length; ++s) {
      flow.slices[s].AddScaled(fi.slices[s], nu.weights[i]);
    }
  }
  return flow;
}

std::vector<std::vector<double>> RewardTables(const MeanFieldGame& game,
                                              const PopulationFlow& mu) {
  if (mu.horizon.kind != game.horizon.kind ||
      mu.num_steps() != game.horizon.length) {
    throw ConfigError("flow horizon disagrees with the game");
  }
  std::vector<std::vector<double>> tables;
  int table_count = game.horizon.finite() ? game.horizon.length : 1;
  tables.reserve(table_count);
  FlowSlice aggregate;
  for (int s = 0; s < table_count; ++s) {
    const FlowSlice* env;
    if (game.horizon.finite()) {
      env = &mu.slices[s];
    } else {
      aggregate = mu.DiscountedAggregate();
      env = &aggregate;
    }
    std::vector<double> table(
        static_cast<size_t>(game.num_states) * game.num_actions);
    for (State x = 0; x < game.num_states; ++x) {
      for (Action a = 0; a < game.num_actions; ++a) {
        table[x * game.num_actions + a] = game.reward(x, a, *env);
      }
    }
    tables.push_back(std::move(table));
  }
  return tables;
}

std::vector<double> StepWeights(const Horizon& horizon) {
  std::vector<double> w(horizon.length, 1.0);
  if (!horizon.finite()) {
    double total = 0.0;
    double g = 1.0;
    for (int s = 0; s < horizon.length; ++s, g *= horizon.gamma) {
      w[s] = g;
      total += g;
    }
    for (double& x : w) x /= total;
  }
  return w;
}

namespace {

double PayoffFromTables(const MeanFieldGame& game,
                        const DeterministicPolicy& policy,
                        const PopulationFlow& own_flow,
                        const std::vector<std::vector<double>>& tables,
                        const std::vector<double>& weights) {
  double total = 0.0;
  for (int s = 0; s < game.horizon.length; ++s) {
    const std::vector<double>& table =
        tables[game.horizon.finite() ? s : 0];
    const FlowSlice& own = own_flow.slices[s];
    double step = 0.0;
    for (State x = 0; x < game.num_states; ++x) {
      double px = own.StateProb(x);
      if (px == 0.0) continue;
      step += px * table[x * game.num_actions + policy.ActionAt(s, x)];
    }
    total += weights[s] * step;
  }
  return total;
}

}  // namespace

double Payoff(const MeanFieldGame& game, const DeterministicPolicy& policy,
              const PopulationFlow& own_flow, const PopulationFlow& mu) {
  return PayoffFromTables(game, policy, own_flow, RewardTables(game, mu),
                          StepWeights(game.horizon));
}

double Payoff(const MeanFieldGame& game, const DeterministicPolicy& policy,
              const PopulationFlow& mu) {
  return Payoff(game, policy, OccupancyFlow(game, policy), mu);
}

double MixedPayoff(const MeanFieldGame& game, const PolicySet& set,
                   const MixedPolicy& nu, const PopulationFlow& mu) {
  nu.Validate();
  if (nu.size() != set.size()) {
    throw LookupError("mixture support does not match the policy set");
  }
  std::vector<double> payoffs = SetPayoffs(game, set, mu);
  double total = 0.0;
  for (int i = 0; i < nu.size(); ++i) total += nu.weights[i] * payoffs[i];
  return total;
}

std::vector<double> SetPayoffs(const MeanFieldGame& game, const PolicySet& set,
                               const PopulationFlow& mu) {
  std::vector<std::vector<double>> tables = RewardTables(game, mu);
  std::vector<double> weights = StepWeights(game.horizon);
  std::vector<double> payoffs(set.size());
  for (int i = 0; i < set.size(); ++i) {
    payoffs[i] =
        PayoffFromTables(game, set.policy(i), set.flow(i), tables, weights);
  }
  return payoffs;
}

NoiseModel NoiseModel::Gaussian(double sigma) {
  if (sigma < 0.0) throw ParamError("negative noise scale");
  return {Kind::kGaussian, sigma};
}

NoiseModel NoiseModel::Uniform(double half_width) {
  if (half_width < 0.0) throw ParamError("negative noise scale");
  return {Kind::kUniform, half_width};
}

double NoisyPayoff(const MeanFieldGame& game, const DeterministicPolicy& policy,
                   const PopulationFlow& mu, const NoiseModel& noise,
                   int samples, std::mt19937_64& rng) {
  if (samples < 1) throw ParamError("noisy payoff needs at least one sample");
  double exact = Payoff(game, policy, mu);
  if (noise.kind == NoiseModel::Kind::kNone || noise.scale == 0.0) {
    return exact;
  }
  double total = 0.0;
  if (noise.kind == NoiseModel::Kind::kGaussian) {
    std::normal_distribution<double> d(0.0, noise.scale);
    for (int m = 0; m < samples; ++m) total += d(rng);
  } else {
    std::uniform_real_distribution<double> d(-noise.scale, noise.scale);
    for (int m = 0; m < samples; ++m) total += d(rng);
  }
  return exact + total / samples;
}

int PolicySet::Add(const DeterministicPolicy& policy) {
  if (Contains(policy)) throw ParamError("policy already in the set");
  policies_.push_back(policy);
  flows_.push_back(OccupancyFlow(*game_, policy));
  return size() - 1;
}

bool PolicySet::Contains(const DeterministicPolicy& policy) const {
  return IndexOf(policy) >= 0;
}

int PolicySet::IndexOf(const DeterministicPolicy& policy) const {
  for (int i = 0; i < size(); ++i) {
    if (policies_[i] == policy) return i;
  }
  return -1;
}

std::vector<DeterministicPolicy> AllDeterministicPolicies(
    const MeanFieldGame& game, long long max_count) {
  int cells = PolicyTableSize(game);
  long long count = 1;
  for (int c = 0; c < cells; ++c) {
    count *= game.num_actions;
    if (count > max_count) {
      throw ParamError("deterministic policy space too large to enumerate");
    }
  }
  std::vector<DeterministicPolicy> out;
  out.reserve(count);
  DeterministicPolicy pi;
  pi.num_states = game.num_states;
  pi.time_steps = game.horizon.finite() ? game.horizon.length : 1;
  pi.actions.assign(cells, 0);
  for (long long k = 0; k < count; ++k) {
    out.push_back(pi);
    // Lexicographic successor of the action table.
    for (int c = cells - 1; c >= 0; --c) {
      if (++pi.actions[c] < game.num_actions) break;
      pi.actions[c] = 0;
    }
  }
  return out;
}

void CorrelationDevice::Validate() const {
  if (atoms.empty()) throw ParamError("correlation device has no atoms");
  double sum = 0.0;
  int n = atoms[0].nu.size();
  for (const Atom& atom : atoms) {
    if (atom.weight < -kProbTolerance || !std::isfinite(atom.weight)) {
      throw ParamError("device atom weight is negative or non-finite");
    }
    if (atom.nu.size() != n) {
      throw ParamError("device atoms disagree on the policy set size");
    }
    atom.nu.Validate();
    sum += atom.weight;
  }
  if (std::abs(sum - 1.0) > kProbTolerance) {
    throw ParamError("device atom weights do not sum to 1");
  }
}

double CorrelationDevice::PolicyMarginal(int policy_index) const {
  double p = 0.0;
  for (const Atom& atom : atoms) {
    p += atom.weight * atom.nu.weights.at(policy_index);
  }
  return p;
}

CorrelationDevice CorrelationDevice::Singleton(const MixedPolicy& nu) {
  CorrelationDevice rho;
  rho.atoms.push_back({1.0, nu});
  return rho;
}

}  // namespace mfpsro
