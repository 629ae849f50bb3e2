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

#include "mfpsro/psro.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "mfpsro/best_response.h"

namespace mfpsro {

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point from) {
  return std::chrono::duration<double>(Clock::now() - from).count();
}

uint64_t DeriveSeed(uint64_t base, uint64_t stream) {
  return base + 0x9e3779b97f4a7c15ULL * (stream + 1);
}

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

void PsroConfig::Validate() const {
  if (!(rho_lim > 0.0) || rho_lim > rho_tol) {
    throw ConfigError("needs 0 < rho_lim <= rho_tol");
  }
  if (tau_compress < 0) throw ConfigError("tau_compress must be >= 1 (0 = default)");
  if (max_iterations < 0) throw ConfigError("negative iteration budget");
  if (t_max < 1) throw ConfigError("t_max must be >= 1");
}

std::string ModeName(PsroMode mode) {
  switch (mode) {
    case PsroMode::kNash: return "nash";
    case PsroMode::kCce: return "cce";
    default: return "ce";
  }
}

PsroResult RunPsroNash(const MeanFieldGame& game, const PsroConfig& config) {
  config.Validate();
  game.Validate();
  PsroResult result;
  result.mode = PsroMode::kNash;
  result.final_rho_tol = config.rho_lim;
  result.set = std::make_shared<PolicySet>(game);
  result.set->Add(ConstantPolicy(game, 0));

  MixedPolicy nu = MixedPolicy::Delta(0, 1);
  Clock::time_point t0 = Clock::now();
  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    SimplexSearchConfig search = config.nash_search;
    search.seed = DeriveSeed(config.seed, iter);
    if (iter >= 2) {
      // Consecutive restricted games differ by one policy: warm start from
      // the previous solution with a little mass on the newcomer.
      std::vector<double> warm = nu.weights;
      warm.resize(result.set->size(), 1e-3);
      double total = 0.0;
      for (double w : warm) total += w;
      for (double& w : warm) w /= total;
      search.warm_start = warm;
    }
    RestrictedNashResult rn = SolveRestrictedNash(game, *result.set, search);
    nu = rn.nu;

    PopulationFlow flow = MixtureFlow(*result.set, nu);
    BestResponseResult br = BestResponse(game, flow);
    double exploitability = br.value - MixedPayoff(game, *result.set, nu, flow);
    bool member = result.set->Contains(br.policy);
    bool converged = member || exploitability <= config.rho_lim;

    result.log.push_back({iter, exploitability, rn.evaluations, Seconds(t0),
                          !converged});
    if (converged) {
      result.terminated = true;
      break;
    }
    result.set->Add(br.policy);
  }

  result.device = CorrelationDevice::Singleton(nu);
  return result;
}

namespace {

PsroResult RunPsroCorrelated(const MeanFieldGame& game, const PsroConfig& config,
                             PsroMode mode) {
  config.Validate();
  game.Validate();
  bool ce = (mode == PsroMode::kCe);

  PsroResult result;
  result.mode = mode;
  result.set = std::make_shared<PolicySet>(game);
  result.set->Add(ConstantPolicy(game, 0));
  result.device = CorrelationDevice::Singleton(MixedPolicy::Delta(0, 1));

  // Best device certified so far: the BR step prices every device entering
  // an iteration, and budget-exhausted runs return the cheapest one rather
  // than whatever the last inner solve produced.
  CorrelationDevice best_device = result.device;
  double best_gap = std::numeric_limits<double>::infinity();

  double rho_tol = config.rho_tol;
  Clock::time_point t0 = Clock::now();

  // Prices the device against exact best responses; the returned policies
  // witness the gap.
  auto certify = [&](const CorrelationDevice& device,
                     std::vector<DeterministicPolicy>* responses) {
    double gap;
    if (!ce) {
      BestResponseResult br = BestResponseCce(game, *result.set, device);
      std::vector<double> weights(device.num_atoms());
      for (int t = 0; t < device.num_atoms(); ++t) {
        weights[t] = device.atoms[t].weight;
      }
      gap = br.value - OnDevicePayoff(game, *result.set, device, weights);
      responses->push_back(std::move(br.policy));
    } else {
      gap = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < result.set->size(); ++i) {
        double marginal = device.PolicyMarginal(i);
        if (marginal <= 0.0) continue;
        BestResponseResult br = BestResponseCe(game, *result.set, device, i);
        std::vector<double> conditional(device.num_atoms());
        for (int t = 0; t < device.num_atoms(); ++t) {
          conditional[t] = device.atoms[t].weight *
                           device.atoms[t].nu.weights[i] / marginal;
        }
        gap = std::max(gap, br.value - OnDevicePayoff(game, *result.set,
                                                      device, conditional));
        responses->push_back(std::move(br.policy));
      }
    }
    return gap;
  };

  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    std::vector<DeterministicPolicy> responses;
    double gap = certify(result.device, &responses);
    if (gap < best_gap) {
      best_gap = gap;
      best_device = result.device;
    }

    // Deduplicated novel responses enter the set in one batch.
    std::vector<DeterministicPolicy> novel;
    for (DeterministicPolicy& pi : responses) {
      if (result.set->Contains(pi)) continue;
      bool seen = false;
      for (const DeterministicPolicy& other : novel) {
        if (other == pi) { seen = true; break; }
      }
      if (!seen) novel.push_back(std::move(pi));
    }

    bool added = !novel.empty();
    if (!added) {
      if (rho_tol <= config.rho_lim) {
        result.log.push_back({iter, gap, 0, Seconds(t0), false});
        result.terminated = true;
        break;
      }
      rho_tol = std::max(rho_tol / 2.0, config.rho_lim);
    } else {
      for (const DeterministicPolicy& pi : novel) result.set->Add(pi);
    }

    RegretLoopConfig loop;
    loop.learner = ce ? LearnerKind::kInternal : LearnerKind::kExternal;
    loop.algo = config.external_algo;
    loop.t_max = config.t_max;
    loop.target_regret = rho_tol;
    loop.tau_compress =
        config.tau_compress > 0 ? config.tau_compress : (ce ? 10 : 1);
    loop.payoff_source = config.payoff_source;
    loop.seed = DeriveSeed(config.seed, iter);
    RegretLoopResult rr = RunRegretLoop(game, *result.set, loop);
    // When t_max runs out above the target we keep the best compressed
    // device and continue; the next BR step works from what we have.
    result.device = rr.device;
    result.log.push_back({iter, gap, rr.steps, Seconds(t0), added});
  }

  if (!result.terminated) {
    // Budget exhausted: price the final device too and hand back the best
    // certified one, padding older atoms to the final set size.
    std::vector<DeterministicPolicy> ignored;
    double gap = certify(result.device, &ignored);
    if (gap >= best_gap) {
      for (CorrelationDevice::Atom& atom : best_device.atoms) {
        atom.nu.weights.resize(result.set->size(), 0.0);
      }
      result.device = best_device;
    }
  }
  result.final_rho_tol = rho_tol;
  return result;
}

}  // namespace

PsroResult RunPsroCce(const MeanFieldGame& game, const PsroConfig& config) {
  return RunPsroCorrelated(game, config, PsroMode::kCce);
}

PsroResult RunPsroCe(const MeanFieldGame& game, const PsroConfig& config) {
  return RunPsroCorrelated(game, config, PsroMode::kCe);
}

PsroResult RunPsro(const MeanFieldGame& game, const PsroConfig& config) {
  switch (config.mode) {
    case PsroMode::kNash: return RunPsroNash(game, config);
    case PsroMode::kCce: return RunPsroCce(game, config);
    default: return RunPsroCe(game, config);
  }
}

}  // namespace mfpsro
