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

#ifndef MFPSRO_REGRET_H_
#define MFPSRO_REGRET_H_

#include <memory>
#include <vector>

#include "mfpsro/core.h"
#include "mfpsro/minimax_lp.h"

namespace mfpsro {

// Weights proportional to the positive part of the cumulative regrets;
// uniform when no entry is positive.
std::vector<double> RegretMatchingStep(const std::vector<double>& cumulative);

// Weights proportional to exp(eta * cumulative payoff), max-subtracted.
std::vector<double> HedgeStep(const std::vector<double>& cumulative_payoffs,
                              double eta);

// Stationary distribution of the row-stochastic matrix Q (nu = nu Q), by
// damped power iteration to L1 residual below `tol`. Throws NumericError
// (reporting the residual) if `max_iterations` is exhausted.
std::vector<double> StationaryDistribution(
    const std::vector<std::vector<double>>& q, double tol = 1e-10,
    int max_iterations = 100000);

// Full-information learner over a fixed arm set.
class RegretLearner {
 public:
  virtual ~RegretLearner() = default;
  // Current played distribution nu_t.
  virtual const std::vector<double>& Weights() = 0;
  // Feeds the observed per-arm payoff vector for the played step.
  virtual void Observe(const std::vector<double>& payoffs) = 0;
};

class RegretMatchingLearner : public RegretLearner {
 public:
  explicit RegretMatchingLearner(int num_arms);
  const std::vector<double>& Weights() override;
  void Observe(const std::vector<double>& payoffs) override;

 private:
  std::vector<double> cumulative_regret_;
  std::vector<double> weights_;
};

class HedgeLearner : public RegretLearner {
 public:
  HedgeLearner(int num_arms, double eta);
  const std::vector<double>& Weights() override;
  void Observe(const std::vector<double>& payoffs) override;

 private:
  double eta_;
  std::vector<double> cumulative_payoff_;
  std::vector<double> weights_;
};

// No-internal-regret learner: one external learner per arm, each fed the
// payoff vector scaled by the probability of its own arm; plays the
// stationary distribution of the matrix whose rows are the sub-learners'
// weights.
class BlumMansourLearner : public RegretLearner {
 public:
  explicit BlumMansourLearner(int num_arms);
  const std::vector<double>& Weights() override;
  void Observe(const std::vector<double>& payoffs) override;

  // L1 residual ||nu Q - nu||_1 of the last played distribution.
  double last_residual() const { return last_residual_; }

 private:
  std::vector<std::unique_ptr<RegretLearner>> experts_;
  std::vector<double> weights_;
  double last_residual_ = 0.0;
};

// Per-iterate deviation regrets of a regret-minimization run.
//   external[t][i] = J(pi_i, mu(nu_t)) - J(pi(nu_t), mu(nu_t))
//   internal[t][i*n + j] = nu_t(i) (J(pi_j, mu(nu_t)) - J(pi_i, mu(nu_t)))
struct RegretTrace {
  std::vector<MixedPolicy> iterates;
  std::vector<std::vector<double>> payoffs;  // observed J vector per step
  std::vector<std::vector<double>> external;
  std::vector<std::vector<double>> internal;  // populated in internal mode

  int num_steps() const { return static_cast<int>(iterates.size()); }
  int num_policies() const {
    return iterates.empty() ? 0 : iterates[0].size();
  }

  void Append(const MixedPolicy& nu, const std::vector<double>& payoff_vector,
              bool with_internal);
};

// Optimal temporal weights over the iterates: minimizes the worst
// unconditional deviation benefit max_i rho^T external_i.
MinimaxSolution CompressCce(const RegretTrace& trace);

// Optimal temporal weights against per-recommendation deviations:
// minimizes max_{i,j} rho^T internal_{i,j}.
MinimaxSolution CompressCe(const RegretTrace& trace);

// Correlation device (rho_t, nu_t) over the trace iterates; rows with zero
// weight are dropped.
CorrelationDevice DeviceFromTrace(const RegretTrace& trace,
                                  const std::vector<double>& rho);

// Restricted-set gap of the device (rho over the trace iterates):
// the worst unconditional deviation benefit. Equals the CCE compression
// objective at rho.
double TraceCceGap(const RegretTrace& trace, const std::vector<double>& rho);

// Restricted-set gap conditioned on recommendations: for every policy with
// positive marginal, the best deviation benefit under the conditional atom
// weights, maximized over recommendations.
double TraceCeGap(const RegretTrace& trace, const std::vector<double>& rho);

enum class LearnerKind { kExternal, kInternal };
enum class ExternalAlgo { kRegretMatching, kHedge };

struct PayoffSource {
  bool noisy = false;
  NoiseModel noise;
  int samples = 1;
};

struct RegretLoopConfig {
  LearnerKind learner = LearnerKind::kExternal;
  ExternalAlgo algo = ExternalAlgo::kRegretMatching;
  // 0 selects sqrt(8 log(n) / t_max) on payoffs scaled to [-1, 1].
  double hedge_eta = 0.0;
  int t_max = 10000;
  double target_regret = 1e-3;
  int tau_compress = 1;
  PayoffSource payoff_source;
  uint64_t seed = 0;
  // Record the uniform-vs-compressed comparison at every compression step.
  bool record_compression_curve = false;
};

struct CompressionLogEntry {
  int step = 0;
  double uniform_gap = 0.0;
  double compressed_gap = 0.0;
  int atoms = 0;  // nonzero weights in the compressed device
};

struct RegretLoopResult {
  CorrelationDevice device;
  RegretTrace trace;
  double achieved_gap = 0.0;
  int steps = 0;
  bool reached_target = false;
  std::vector<CompressionLogEntry> compression_log;
};

// Iterates a regret learner over the restricted game defined by the set,
// compressing every tau_compress steps and stopping early when the
// compressed device's restricted gap reaches the target. When t_max is
// exhausted first, the best compressed device found is returned with
// reached_target = false.
RegretLoopResult RunRegretLoop(const MeanFieldGame& game, const PolicySet& set,
                               const RegretLoopConfig& config);

}  // namespace mfpsro

#endif  // MFPSRO_REGRET_H_
