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

#ifndef MFPSRO_PSRO_H_
#define MFPSRO_PSRO_H_

#include <memory>
#include <string>
#include <vector>

#include "mfpsro/core.h"
#include "mfpsro/regret.h"
#include "mfpsro/restricted_nash.h"

namespace mfpsro {

// Iterated best-response loops over growing restricted policy sets. The Nash
// mode alternates restricted-Nash solves with exact best responses and stops
// when the best response is already in the set. The (C)CE modes run a regret
// loop with bandit compression as the restricted solver and refine the regret
// tolerance by halving whenever no new policy appears, down to rho_lim.

enum class PsroMode { kNash, kCce, kCe };

struct PsroConfig {
  PsroMode mode = PsroMode::kNash;
  double rho_tol = 1e-2;
  double rho_lim = 1e-4;
  int tau_compress = 0;  // 0 selects the mode default: 1 for CCE, 10 for CE
  int max_iterations = 40;
  int t_max = 20000;  // inner regret-loop budget per iteration
  PayoffSource payoff_source;
  uint64_t seed = 0;
  SimplexSearchConfig nash_search;  // Nash mode restricted solver
  ExternalAlgo external_algo = ExternalAlgo::kRegretMatching;

  void Validate() const;
};

struct PsroIterationLog {
  int iteration = 0;
  // True-game gap of the device entering the iteration (exploitability for
  // Nash mode, CCE/CE gap otherwise), certified by the best responses.
  double gap = 0.0;
  int inner_steps = 0;
  double wall_time_s = 0.0;
  bool new_policy = false;
};

struct PsroResult {
  std::shared_ptr<PolicySet> set;
  // Nash mode returns a single-atom device carrying nu*.
  CorrelationDevice device;
  std::vector<PsroIterationLog> log;
  bool terminated = false;
  double final_rho_tol = 0.0;
  PsroMode mode = PsroMode::kNash;
};

PsroResult RunPsroNash(const MeanFieldGame& game, const PsroConfig& config);
PsroResult RunPsroCce(const MeanFieldGame& game, const PsroConfig& config);
PsroResult RunPsroCe(const MeanFieldGame& game, const PsroConfig& config);

// Dispatches on config.mode.
PsroResult RunPsro(const MeanFieldGame& game, const PsroConfig& config);

std::string ModeName(PsroMode mode);

}  // namespace mfpsro

#endif  // MFPSRO_PSRO_H_
