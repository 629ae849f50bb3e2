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

#ifndef MFPSRO_GAMES_H_
#define MFPSRO_GAMES_H_

#include <map>
#include <string>

#include "mfpsro/core.h"

namespace mfpsro {

// Declarative game description, deserialized from experiment configs.
struct GameSpec {
  std::string name;
  std::map<std::string, double> params;
  NoiseModel noise;      // evaluation noise used by noisy payoff sources
  int noise_samples = 1;  // samples averaged per noisy evaluation
};

// One-shot biased rock-paper-scissors over actions {A, B, C}. Rewards read
// the population action marginal:
//   r(A) = 0.5 mu(B) - 0.3 mu(C)
//   r(B) = 0.3 mu(C) - 0.7 mu(A)
//   r(C) = 0.7 mu(A) - 0.5 mu(B)
MeanFieldGame BiasedRps();

// One-shot cooperate/betray/punish game over actions {A, B, C}; rewards are
// quadratic in the population action marginal:
//   r(A) = mu(A) - (20/9)(mu(A) - mu(C)) mu(C) - 2 mu(B)
//   r(B) = 2 (mu(A) - mu(B)) - 238 mu(C)
//   r(C) = (200/9)(mu(A) - mu(C)) mu(C)
MeanFieldGame CoopBetrayPunish();

// Congestion game on a line of `length` states with actions
// {left, stay, right} (clamped at the ends), mu0 concentrated at state 0, and
//   r(x, a, mu) = -aversion * mu(x) - move_cost * 1[a != stay].
MeanFieldGame CrowdChain(int length, int steps, double aversion,
                         double move_cost = 0.1);

// Constructs the game registered under spec.name, validating parameters.
// Throws ConfigError for unknown names or invalid parameters.
MeanFieldGame LoadGame(const GameSpec& spec);

}  // namespace mfpsro

#endif  // MFPSRO_GAMES_H_
