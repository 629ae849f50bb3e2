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

#include "mfpsro/regret.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace mfpsro {

std::vector<double> RegretMatchingStep(const std::vector<double>& cumulative) {
  if (cumulative.empty()) throw ParamError("regret matching over no arms");
  int n = static_cast<int>(cumulative.size());
  std::vector<double> weights(n);
  double positive_sum = 0.0;
  for (double r : cumulative) positive_sum += std::max(r, 0.0);
  if (positive_sum > 0.0) {
    for (int i = 0; i < n; ++i) {
      weights[i] = std::max(cumulative[i], 0.0) / positive_sum;
    }
  } else {
    std::fill(weights.begin(), weights.end(), 1.0 / n);
  }
  return weights;
}

std::vector<double> HedgeStep(const std::vector<double>& cumulative_payoffs,
                              double eta) {
  if (cumulative_payoffs.empty()) throw ParamError("hedge over no arms");
  if (!(eta > 0.0)) throw ParamError("hedge requires a positive rate");
  double top = -std::numeric_limits<double>::infinity();
  for (double v : cumulative_payoffs) {
    if (!std::isfinite(v)) throw NumericError("non-finite hedge input");
    top = std::max(top, eta * v);
  }
  std::vector<double> weights(cumulative_payoffs.size());
  double total = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    weights[i] = std::exp(eta * cumulative_payoffs[i] - top);
    total += weights[i];
  }
  for (double& w : weights) w /= total;
  return weights;
}

std::vector<double> StationaryDistribution(
    const std::vector<std::vector<double>>& q, double tol,
    int max_iterations) {
  int n = static_cast<int>(q.size());
  std::vector<double> nu(n, 1.0 / n);
  std::vector<double> next(n);
  double residual = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) next[j] += nu[i] * q[i][j];
    }
    residual = 0.0;
    for (int j = 0; j < n; ++j) residual += std::abs(next[j] - nu[j]);
    if (residual < tol) {
      // Rounding across many sweeps can drift the mass off 1.
      double total = 0.0;
      for (double v : nu) total += v;
      for (double& v : nu) v /= total;
      return nu;
    }
    // Damped update: same fixed points, convergent for periodic chains.
    for (int j = 0; j < n; ++j) nu[j] = 0.5 * (nu[j] + next[j]);
  }
  throw NumericError("stationary distribution did not converge; residual " +
                     std::to_string(residual));
}

RegretMatchingLearner::RegretMatchingLearner(int num_arms)
    : cumulative_regret_(num_arms, 0.0),
      weights_(num_arms, 1.0 / num_arms) {}

const std::vector<double>& RegretMatchingLearner::Weights() {
  weights_ = RegretMatchingStep(cumulative_regret_);
  return weights_;
}

void RegretMatchingLearner::Observe(const std::vector<double>& payoffs) {
  double played = 0.0;
  for (size_t i = 0; i < payoffs.size(); ++i) played += weights_[i] * payoffs[i];
  for (size_t i = 0; i < payoffs.size(); ++i) {
    cumulative_regret_[i] += payoffs[i] - played;
  }
}

HedgeLearner::HedgeLearner(int num_arms, double eta)
    : eta_(eta), cumulative_payoff_(num_arms, 0.0),
      weights_(num_arms, 1.0 / num_arms) {
  if (!(eta > 0.0)) throw ParamError("hedge requires a positive rate");
}

const std::vector<double>& HedgeLearner::Weights() {
  weights_ = HedgeStep(cumulative_payoff_, eta_);
  return weights_;
}

void HedgeLearner::Observe(const std::vector<double>& payoffs) {
  for (size_t i = 0; i < payoffs.size(); ++i) cumulative_payoff_[i] += payoffs[i];
}

BlumMansourLearner::BlumMansourLearner(int num_arms)
    : weights_(num_arms, 1.0 / num_arms) {
  for (int i = 0; i < num_arms; ++i) {
    experts_.push_back(std::make_unique<RegretMatchingLearner>(num_arms));
  }
}

const std::vector<double>& BlumMansourLearner::Weights() {
  int n = static_cast<int>(experts_.size());
  std::vector<std::vector<double>> q(n);
  for (int i = 0; i < n; ++i) q[i] = experts_[i]->Weights();
  weights_ = StationaryDistribution(q);
  double residual = 0.0;
  for (int j = 0; j < n; ++j) {
    double row = 0.0;
    for (int i = 0; i < n; ++i) row += weights_[i] * q[i][j];
    residual += std::abs(row - weights_[j]);
  }
  last_residual_ = residual;
  return weights_;
}

void BlumMansourLearner::Observe(const std::vector<double>& payoffs) {
  int n = static_cast<int>(experts_.size());
  std::vector<double> scaled(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) scaled[j] = weights_[i] * payoffs[j];
    experts_[i]->Observe(scaled);
  }
}

void RegretTrace::Append(const MixedPolicy& nu,
                         const std::vector<double>& payoff_vector,
                         bool with_internal) {
  int n = nu.size();
  double played = 0.0;
  for (int i = 0; i < n; ++i) played += nu.weights[i] * payoff_vector[i];

  std::vector<double> ext(n);
  for (int i = 0; i < n; ++i) ext[i] = payoff_vector[i] - played;

  iterates.push_back(nu);
  payoffs.push_back(payoff_vector);
  external.push_back(std::move(ext));
  if (with_internal) {
    std::vector<double> in(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        in[static_cast<size_t>(i) * n + j] =
            nu.weights[i] * (payoff_vector[j] - payoff_vector[i]);
      }
    }
    internal.push_back(std::move(in));
  }
}

MinimaxSolution CompressCce(const RegretTrace& trace) {
  if (trace.external.empty()) throw ParamError("compressing an empty trace");
  return SolveMinimax(trace.external);
}

MinimaxSolution CompressCe(const RegretTrace& trace) {
  if (trace.internal.empty()) {
    throw ParamError("trace has no internal regret rows");
  }
  return SolveMinimax(trace.internal);
}

CorrelationDevice DeviceFromTrace(const RegretTrace& trace,
                                  const std::vector<double>& rho) {
  CorrelationDevice device;
  for (size_t t = 0; t < rho.size(); ++t) {
    if (rho[t] > 0.0) device.atoms.push_back({rho[t], trace.iterates[t]});
  }
  // Atom weights renormalize exactly after zero-row drops.
  double total = 0.0;
  for (const auto& atom : device.atoms) total += atom.weight;
  for (auto& atom : device.atoms) atom.weight /= total;
  return device;
}

double TraceCceGap(const RegretTrace& trace, const std::vector<double>& rho) {
  int n = trace.num_policies();
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double g = 0.0;
    for (int t = 0; t < trace.num_steps(); ++t) {
      g += rho[t] * trace.external[t][i];
    }
    worst = std::max(worst, g);
  }
  return worst;
}

double TraceCeGap(const RegretTrace& trace, const std::vector<double>& rho) {
  int n = trace.num_policies();
  int steps = trace.num_steps();
  std::vector<double> mixed(steps);
  for (int t = 0; t < steps; ++t) {
    double m = 0.0;
    for (int i = 0; i < n; ++i) {
      m += trace.iterates[t].weights[i] * trace.payoffs[t][i];
    }
    mixed[t] = m;
  }
  double worst = 0.0;
  bool any = false;
  for (int i = 0; i < n; ++i) {
    double marginal = 0.0;
    std::vector<double> benefit(n, 0.0);
    for (int t = 0; t < steps; ++t) {
      double w = rho[t] * trace.iterates[t].weights[i];
      if (w == 0.0) continue;
      marginal += w;
      for (int j = 0; j < n; ++j) {
        benefit[j] += w * (trace.payoffs[t][j] - mixed[t]);
      }
    }
    if (marginal <= 0.0) continue;
    any = true;
    for (int j = 0; j < n; ++j) {
      worst = std::max(worst, benefit[j] / marginal);
    }
  }
  if (!any) throw ParamError("device recommends no policy");
  return worst;
}

namespace {

std::unique_ptr<RegretLearner> MakeLearner(const RegretLoopConfig& config,
                                           int num_arms) {
  if (config.learner == LearnerKind::kInternal) {
    return std::make_unique<BlumMansourLearner>(num_arms);
  }
  if (config.algo == ExternalAlgo::kHedge) {
    double eta = config.hedge_eta;
    if (eta <= 0.0) {
      eta = std::sqrt(8.0 * std::log(std::max(num_arms, 2)) /
                      std::max(config.t_max, 1));
    }
    return std::make_unique<HedgeLearner>(num_arms, eta);
  }
  return std::make_unique<RegretMatchingLearner>(num_arms);
}

double AveragedNoise(const NoiseModel& noise, int samples,
                     std::mt19937_64& rng) {
  if (noise.kind == NoiseModel::Kind::kNone || noise.scale == 0.0) return 0.0;
  double total = 0.0;
  if (noise.kind == NoiseModel::Kind::kGaussian) {
    std::normal_distribution<double> d(0.0, noise.scale);
    for (int m = 0; m < samples; ++m) total += d(rng);
  } else {
    std::uniform_real_distribution<double> d(-noise.scale, noise.scale);
    for (int m = 0; m < samples; ++m) total += d(rng);
  }
  return total / samples;
}

}  // namespace

RegretLoopResult RunRegretLoop(const MeanFieldGame& game, const PolicySet& set,
                               const RegretLoopConfig& config) {
  int n = set.size();
  if (n < 1) throw ParamError("regret loop over an empty policy set");
  if (config.t_max < 1) throw ParamError("regret loop needs t_max >= 1");
  if (config.tau_compress < 1) throw ParamError("tau_compress must be >= 1");
  if (config.payoff_source.noisy && config.payoff_source.samples < 1) {
    throw ParamError("noisy payoffs need at least one sample");
  }

  bool internal = (config.learner == LearnerKind::kInternal);
  std::unique_ptr<RegretLearner> learner = MakeLearner(config, n);
  std::mt19937_64 rng(config.seed);
  double scale = std::max(game.max_abs_reward, 1e-12);

  RegretLoopResult result;
  double best_gap = std::numeric_limits<double>::infinity();

  for (int t = 1; t <= config.t_max; ++t) {
    MixedPolicy nu;
    nu.weights = learner->Weights();
    PopulationFlow flow = MixtureFlow(set, nu);
    std::vector<double> payoff_vector = SetPayoffs(game, set, flow);
    if (config.payoff_source.noisy) {
      for (double& v : payoff_vector) {
        v += AveragedNoise(config.payoff_source.noise,
                           config.payoff_source.samples, rng);
      }
    }
    result.trace.Append(nu, payoff_vector, internal);
    std::vector<double> scaled = payoff_vector;
    for (double& v : scaled) v /= scale;
    learner->Observe(scaled);
    result.steps = t;

    bool compress = (t % config.tau_compress == 0) || t == config.t_max ||
                    n == 1;
    if (!compress) continue;

    MinimaxSolution sol =
        internal ? CompressCe(result.trace) : CompressCce(result.trace);
    double gap = internal ? TraceCeGap(result.trace, sol.rho) : sol.value;
    if (config.record_compression_curve) {
      std::vector<double> uniform(t, 1.0 / t);
      double uniform_gap = internal ? TraceCeGap(result.trace, uniform)
                                    : TraceCceGap(result.trace, uniform);
      int atoms = 0;
      for (double w : sol.rho) atoms += (w > 0.0) ? 1 : 0;
      result.compression_log.push_back({t, uniform_gap, gap, atoms});
    }
    if (gap < best_gap) {
      best_gap = gap;
      result.device = DeviceFromTrace(result.trace, sol.rho);
      result.achieved_gap = gap;
    }
    if (best_gap <= config.target_regret) {
      result.reached_target = true;
      break;
    }
  }

  if (result.device.atoms.empty()) {
    // Compression never ran; fall back to the empirical average.
    std::vector<double> uniform(result.trace.num_steps(),
                                1.0 / result.trace.num_steps());
    result.device = DeviceFromTrace(result.trace, uniform);
    result.achieved_gap = internal ? TraceCeGap(result.trace, uniform)
                                   : TraceCceGap(result.trace, uniform);
  }
  return result;
}

}  // namespace mfpsro
