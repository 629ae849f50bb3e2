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

#ifndef MFPSRO_CORE_H_
#define MFPSRO_CORE_H_

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

// Core model for finite mean-field games: a finite state/action game with a
// deterministic transition map, a reward that depends on the population
// occupancy, and the expected-payoff functional J over deterministic policies
// and population flows.

namespace mfpsro {

using State = int;
using Action = int;

// Tolerances: strict on construction, looser after floating-point
// accumulation.
inline constexpr double kProbTolerance = 1e-12;
inline constexpr double kAccumTolerance = 1e-10;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid game or experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Precondition violated by an operation argument.
class ParamError : public Error {
 public:
  using Error::Error;
};

// Reference to an entity that is not present (e.g. policy not in a set).
class LookupError : public Error {
 public:
  using Error::Error;
};

// Numerical failure: non-finite inputs, non-convergence of an iteration.
class NumericError : public Error {
 public:
  using Error::Error;
};

// One timestep of a population flow, stored as a state-action occupancy
// m(x, a) summing to one. Rewards may read the state marginal (congestion
// games) or the action marginal (one-shot normal-form games).
class FlowSlice {
 public:
  FlowSlice() : num_states_(0), num_actions_(0) {}
  FlowSlice(int num_states, int num_actions)
      : num_states_(num_states),
        num_actions_(num_actions),
        joint_(static_cast<size_t>(num_states) * num_actions, 0.0) {}

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }

  double& At(State x, Action a) { return joint_[x * num_actions_ + a]; }
  double At(State x, Action a) const { return joint_[x * num_actions_ + a]; }

  double StateProb(State x) const {
    double p = 0.0;
    for (Action a = 0; a < num_actions_; ++a) p += At(x, a);
    return p;
  }

  double ActionMarginal(Action a) const {
    double p = 0.0;
    for (State x = 0; x < num_states_; ++x) p += At(x, a);
    return p;
  }

  std::vector<double> StateDistribution() const;
  std::vector<double> ActionDistribution() const;

  double TotalMass() const;

  // d += w * other, entrywise.
  void AddScaled(const FlowSlice& other, double w);

  const std::vector<double>& joint() const { return joint_; }

 private:
  int num_states_;
  int num_actions_;
  std::vector<double> joint_;
};

struct Horizon {
  enum class Kind { kFinite, kDiscounted };

  Kind kind = Kind::kFinite;
  // Number of steps: S for finite horizon, the truncation length for
  // discounted mode.
  int length = 1;
  double gamma = 0.0;

  static Horizon Finite(int steps);
  // Discounted horizon truncated at `effective_length` steps; when the length
  // is not given it is chosen so that gamma^length < 1e-8, which bounds the
  // truncation error by gamma^length * r_max / (1 - gamma).
  static Horizon Discounted(double gamma, int effective_length = -1);

  bool finite() const { return kind == Kind::kFinite; }
};

// A mean-field game (X, A, r, P, mu0). Transitions are deterministic and do
// not depend on the population. The reward callable must be pure: repeated
// evaluation on identical inputs returns identical values.
struct MeanFieldGame {
  std::string name;
  int num_states = 0;
  int num_actions = 0;
  std::function<double(State, Action, const FlowSlice&)> reward;
  std::function<State(State, Action)> transition;
  std::vector<double> initial_distribution;
  Horizon horizon;
  // Upper bound on |r| over valid inputs, used to scale regret learners.
  double max_abs_reward = 1.0;

  // Throws ConfigError if fields are inconsistent (mu0 not a distribution,
  // transition out of range, non-positive sizes).
  void Validate() const;
};

// Deterministic policy: a total action map, time-indexed over the horizon for
// finite-horizon games and stationary (time_steps == 1) for discounted games.
struct DeterministicPolicy {
  int num_states = 0;
  int time_steps = 1;
  std::vector<Action> actions;  // indexed by s * num_states + x

  Action ActionAt(int step, State x) const {
    int s = (time_steps == 1) ? 0 : step;
    return actions[s * num_states + x];
  }

  friend bool operator==(const DeterministicPolicy& a,
                         const DeterministicPolicy& b) {
    return a.num_states == b.num_states && a.time_steps == b.time_steps &&
           a.actions == b.actions;
  }
};

// Policy that plays `action` in every state at every step.
DeterministicPolicy ConstantPolicy(const MeanFieldGame& game, Action action);

// Number of (step, state) cells a deterministic policy has in this game.
int PolicyTableSize(const MeanFieldGame& game);

// Distribution over the policies of a PolicySet, stored densely.
struct MixedPolicy {
  std::vector<double> weights;

  int size() const { return static_cast<int>(weights.size()); }
  // Throws ParamError unless weights are a distribution within tolerance.
  void Validate() const;

  static MixedPolicy Delta(int index, int size);
  static MixedPolicy Uniform(int size);
};

// Per-timestep population occupancy. In finite-horizon mode, slice s is the
// population state-action distribution at step s. In discounted mode the
// slices are the forward rollout over the truncation window and rewards read
// the normalized discounted aggregate, (1-gamma)/(1-gamma^L) * sum_s gamma^s
// slice_s, which is itself a distribution. Whether rewards should see the
// normalized or raw discounted measure is a modeling choice; we normalize so
// that reward arguments are always probability distributions.
struct PopulationFlow {
  Horizon horizon;
  std::vector<FlowSlice> slices;

  int num_steps() const { return static_cast<int>(slices.size()); }

  FlowSlice DiscountedAggregate() const;

  // Throws ParamError if any slice fails the conservation check or the
  // length disagrees with the horizon.
  void Validate(double tol = kAccumTolerance) const;
};

class PolicySet;

// Forward rollout of a single deterministic policy from mu0.
PopulationFlow OccupancyFlow(const MeanFieldGame& game,
                             const DeterministicPolicy& policy);

// Flow of the population when policies are distributed according to nu:
// the dynamics do not depend on mu, so mixture flows are convex combinations
// of the per-policy flows.
PopulationFlow MixtureFlow(const PolicySet& set, const MixedPolicy& nu);

// Expected payoff J(pi, mu) of a representative player running `policy` while
// the population follows `mu`. Finite horizon sums r over steps along the
// player's own flow; discounted mode weights steps by the normalized
// discount factors.
double Payoff(const MeanFieldGame& game, const DeterministicPolicy& policy,
              const PopulationFlow& mu);

// As above with the player's own flow precomputed (it does not depend on mu).
double Payoff(const MeanFieldGame& game, const DeterministicPolicy& policy,
              const PopulationFlow& own_flow, const PopulationFlow& mu);

// sum_i nu_i J(pi_i, mu); linear in nu.
double MixedPayoff(const MeanFieldGame& game, const PolicySet& set,
                   const MixedPolicy& nu, const PopulationFlow& mu);

// Payoffs of every policy in the set against mu, sharing one reward-table
// evaluation pass.
std::vector<double> SetPayoffs(const MeanFieldGame& game, const PolicySet& set,
                               const PopulationFlow& mu);

struct NoiseModel {
  enum class Kind { kNone, kGaussian, kUniform };
  Kind kind = Kind::kNone;
  // Standard deviation for Gaussian, half-width for Uniform.
  double scale = 0.0;

  static NoiseModel None() { return {}; }
  static NoiseModel Gaussian(double sigma);
  static NoiseModel Uniform(double half_width);
};

// Exact payoff plus the mean of `samples` i.i.d. additive noise draws.
double NoisyPayoff(const MeanFieldGame& game, const DeterministicPolicy& policy,
                   const PopulationFlow& mu, const NoiseModel& noise,
                   int samples, std::mt19937_64& rng);

// Ordered, duplicate-free policy set; each entry caches its occupancy flow.
class PolicySet {
 public:
  explicit PolicySet(const MeanFieldGame& game) : game_(&game) {}

  const MeanFieldGame& game() const { return *game_; }
  int size() const { return static_cast<int>(policies_.size()); }

  // Appends a policy and returns its index. Throws ParamError on duplicates.
  int Add(const DeterministicPolicy& policy);

  bool Contains(const DeterministicPolicy& policy) const;
  // Index of the policy, or -1.
  int IndexOf(const DeterministicPolicy& policy) const;

  const DeterministicPolicy& policy(int i) const { return policies_[i]; }
  const PopulationFlow& flow(int i) const { return flows_[i]; }
  const std::vector<DeterministicPolicy>& policies() const { return policies_; }

 private:
  const MeanFieldGame* game_;
  std::vector<DeterministicPolicy> policies_;
  std::vector<PopulationFlow> flows_;
};

// All deterministic policies of a small game, lexicographic in the action
// table. Throws ParamError when the count would exceed `max_count`.
std::vector<DeterministicPolicy> AllDeterministicPolicies(
    const MeanFieldGame& game, long long max_count = 4096);

// Correlation device: finitely many atoms (weight, nu) with weights summing
// to one. The mediator samples nu_t with probability rho_t, then every agent
// samples its policy from nu_t.
struct CorrelationDevice {
  struct Atom {
    double weight = 0.0;
    MixedPolicy nu;
  };
  std::vector<Atom> atoms;

  int num_atoms() const { return static_cast<int>(atoms.size()); }
  // Throws ParamError if weights are not a distribution or atom supports
  // disagree in size.
  void Validate() const;

  // rho(pi_i) = sum_t rho_t nu_t(i).
  double PolicyMarginal(int policy_index) const;

  static CorrelationDevice Singleton(const MixedPolicy& nu);
};

// Per-step reward table r(x, a, env_slice_s) for all (x, a); the environment
// slice is the per-step slice in finite-horizon mode and the discounted
// aggregate in discounted mode (same table at every step).
std::vector<std::vector<double>> RewardTables(const MeanFieldGame& game,
                                              const PopulationFlow& mu);

// Per-step weights applied inside J: all ones for finite horizon,
// gamma^s * (1-gamma)/(1-gamma^L) for discounted mode.
std::vector<double> StepWeights(const Horizon& horizon);

}  // namespace mfpsro

#endif  // MFPSRO_CORE_H_
