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

#include "mfpsro/games.h"

#include <algorithm>
#include <cmath>

namespace mfpsro {

namespace {

double GetParam(const GameSpec& spec, const std::string& key,
                double fallback) {
  auto it = spec.params.find(key);
  return it == spec.params.end() ? fallback : it->second;
}

MeanFieldGame OneShotThreeAction(
    const std::string& name,
    std::function<double(Action, double, double, double)> reward,
    double max_abs_reward) {
  MeanFieldGame game;
  game.name = name;
  game.num_states = 1;
  game.num_actions = 3;
  game.initial_distribution = {1.0};
  game.horizon = Horizon::Finite(1);
  game.transition = [](State, Action) { return 0; };
  game.reward = [reward](State, Action a, const FlowSlice& mu) {
    return reward(a, mu.ActionMarginal(0), mu.ActionMarginal(1),
                  mu.ActionMarginal(2));
  };
  game.max_abs_reward = max_abs_reward;
  game.Validate();
  return game;
}

}  // namespace

MeanFieldGame BiasedRps() {
  return OneShotThreeAction(
      "biased_rps",
      [](Action action, double a, double b, double c) {
        switch (action) {
          case 0: return 0.5 * b - 0.3 * c;
          case 1: return 0.3 * c - 0.7 * a;
          default: return 0.7 * a - 0.5 * b;
        }
      },
      0.7);
}

MeanFieldGame CoopBetrayPunish() {
  return OneShotThreeAction(
      "coop_betray_punish",
      [](Action action, double a, double b, double c) {
        switch (action) {
          case 0: return a - 20.0 / 9.0 * (a - c) * c - 2.0 * b;
          case 1: return 2.0 * (a - b) - 238.0 * c;
          default: return 200.0 / 9.0 * (a - c) * c;
        }
      },
      240.0);
}

MeanFieldGame CrowdChain(int length, int steps, double aversion,
                         double move_cost) {
  if (length < 2) throw ParamError("crowd chain needs at least 2 states");
  if (steps < 1) throw ParamError("crowd chain needs at least 1 step");
  if (!(aversion > 0.0)) throw ParamError("crowd aversion must be positive");

  MeanFieldGame game;
  game.name = "crowd_chain";
  game.num_states = length;
  game.num_actions = 3;  // left, stay, right
  game.initial_distribution.assign(length, 0.0);
  game.initial_distribution[0] = 1.0;
  game.horizon = Horizon::Finite(steps);
  game.transition = [length](State x, Action a) {
    int dx = a - 1;
    return std::clamp(x + dx, 0, length - 1);
  };
  game.reward = [aversion, move_cost](State x, Action a, const FlowSlice& mu) {
    return -aversion * mu.StateProb(x) - (a == 1 ? 0.0 : move_cost);
  };
  game.max_abs_reward = aversion + move_cost;
  game.Validate();
  return game;
}

MeanFieldGame LoadGame(const GameSpec& spec) {
  if (spec.name == "biased_rps") {
    return BiasedRps();
  }
  if (spec.name == "coop_betray_punish") {
    return CoopBetrayPunish();
  }
  if (spec.name == "crowd_chain") {
    double length = GetParam(spec, "L", 5);
    double steps = GetParam(spec, "S", 10);
    double aversion = GetParam(spec, "aversion", 1.0);
    double move_cost = GetParam(spec, "move_cost", 0.1);
    if (length < 2 || length != std::floor(length)) {
      throw ConfigError("crowd_chain: L must be an integer >= 2");
    }
    if (steps < 1 || steps != std::floor(steps)) {
      throw ConfigError("crowd_chain: S must be an integer >= 1");
    }
    if (!(aversion > 0.0)) {
      throw ConfigError("crowd_chain: aversion must be positive");
    }
    return CrowdChain(static_cast<int>(length), static_cast<int>(steps),
                      aversion, move_cost);
  }
  throw ConfigError("unknown game: '" + spec.name + "'");
}

}  // namespace mfpsro
