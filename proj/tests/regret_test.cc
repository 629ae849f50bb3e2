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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mfpsro/games.h"
#include "mfpsro/regret.h"
#include "test_util.h"

namespace mfpsro {
namespace {

PolicySet RpsSet(const MeanFieldGame& game) {
  PolicySet set(game);
  for (Action a = 0; a < 3; ++a) set.Add(ConstantPolicy(game, a));
  return set;
}

TEST_CASE("regret matching step") {
  CHECK(RegretMatchingStep({-1, -2, -3}) ==
        std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3});
  CHECK(RegretMatchingStep({2, 0, 0}) == std::vector<double>{1, 0, 0});
  CHECK(RegretMatchingStep({1, 1, 0}) == std::vector<double>{0.5, 0.5, 0});
  CHECK_THROWS_AS(RegretMatchingStep({}), ParamError);
}

TEST_CASE("hedge step") {
  std::vector<double> uniform = HedgeStep({3.0, 3.0, 3.0}, 0.7);
  for (double w : uniform) CHECK(w == doctest::Approx(1.0 / 3).epsilon(1e-12));

  // Vanishing rate flattens the weights.
  std::vector<double> flat = HedgeStep({5.0, -1.0}, 1e-12);
  CHECK(std::abs(flat[0] - 0.5) < 1e-9);
  CHECK(std::abs(flat[1] - 0.5) < 1e-9);

  std::vector<double> skewed = HedgeStep({10.0, 0.0}, 1.0);
  double z = 1.0 + std::exp(-10.0);
  CHECK(skewed[0] == doctest::Approx(1.0 / z).epsilon(1e-12));
  CHECK(skewed[1] == doctest::Approx(std::exp(-10.0) / z).epsilon(1e-12));

  CHECK_THROWS_AS(HedgeStep({1.0}, 0.0), ParamError);
  CHECK_THROWS_AS(HedgeStep({std::nan("")}, 1.0), NumericError);
}

TEST_CASE("stationary distributions") {
  std::vector<double> uniform =
      StationaryDistribution({{0.5, 0.5}, {0.5, 0.5}});
  CHECK(uniform[0] == doctest::Approx(0.5).epsilon(1e-9));

  std::vector<double> absorbing = StationaryDistribution({{0, 1}, {0, 1}});
  CHECK(absorbing[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(absorbing[1] == doctest::Approx(1.0).epsilon(1e-9));

  std::vector<double> mixed =
      StationaryDistribution({{0.5, 0.5}, {0.25, 0.75}});
  CHECK(mixed[0] == doctest::Approx(1.0 / 3).epsilon(1e-8));
  CHECK(mixed[1] == doctest::Approx(2.0 / 3).epsilon(1e-8));

  // Periodic chains converge through damping.
  std::vector<double> swap = StationaryDistribution({{0, 1}, {1, 0}});
  CHECK(swap[0] == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("Blum-Mansour stationarity residual stays below 1e-9") {
  BlumMansourLearner learner(4);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> payoff(-1.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    learner.Weights();
    CHECK(learner.last_residual() < 1e-9);
    std::vector<double> u(4);
    for (double& v : u) v = payoff(rng);
    learner.Observe(u);
  }
}

TEST_CASE("trace rows recompute from their definitions") {
  RegretTrace trace;
  MixedPolicy nu;
  nu.weights = {0.25, 0.75};
  trace.Append(nu, {1.0, -1.0}, /*with_internal=*/true);
  // Played payoff: 0.25 * 1 - 0.75 = -0.5.
  CHECK(trace.external[0][0] == doctest::Approx(1.5));
  CHECK(trace.external[0][1] == doctest::Approx(-0.5));
  // internal[i][j] = nu(i) (J_j - J_i).
  CHECK(trace.internal[0][0 * 2 + 1] == doctest::Approx(0.25 * -2.0));
  CHECK(trace.internal[0][1 * 2 + 0] == doctest::Approx(0.75 * 2.0));
  CHECK(trace.internal[0][0] == 0.0);
}

TEST_CASE("compression examples") {
  SUBCASE("single iterate: weight one, value = worst deviation") {
    RegretTrace trace;
    MixedPolicy nu;
    nu.weights = {0.5, 0.5};
    trace.Append(nu, {0.2, -0.4}, true);
    MinimaxSolution cce = CompressCce(trace);
    CHECK(cce.rho == std::vector<double>{1.0});
    CHECK(cce.value == doctest::Approx(0.3).epsilon(1e-9));  // 0.2 - (-0.1)
    MinimaxSolution ce = CompressCe(trace);
    CHECK(ce.value == doctest::Approx(0.5 * 0.6).epsilon(1e-9));
  }
  SUBCASE("a nonpositive row caps the value at zero") {
    RegretTrace trace;
    MixedPolicy nu;
    nu.weights = {1.0, 0.0};
    trace.Append(nu, {1.0, 0.5}, false);   // deviations lose
    trace.Append(nu, {-1.0, 2.0}, false);  // deviations gain
    MinimaxSolution sol = CompressCce(trace);
    CHECK(sol.value <= 0.0 + 1e-9);
  }
  SUBCASE("empty traces are rejected") {
    RegretTrace trace;
    CHECK_THROWS_AS(CompressCce(trace), ParamError);
    CHECK_THROWS_AS(CompressCe(trace), ParamError);
  }
  SUBCASE("recommending a dominant policy leaves no profitable swap") {
    MeanFieldGame game = testing::DominantActionGame(3, 0);
    PolicySet set(game);
    for (Action a = 0; a < 3; ++a) set.Add(ConstantPolicy(game, a));
    RegretTrace trace;
    MixedPolicy delta = MixedPolicy::Delta(0, 3);
    for (int t = 0; t < 6; ++t) {
      PopulationFlow flow = MixtureFlow(set, delta);
      trace.Append(delta, SetPayoffs(game, set, flow), true);
    }
    CHECK(CompressCe(trace).value <= 0.0 + 1e-9);
  }
}

TEST_CASE("compression dominates the uniform average on random traces") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> payoff(-1.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    RegretTrace trace;
    int steps = 20, n = (k % 2 == 0) ? 5 : 3;
    bool internal = (k % 2 == 1);
    for (int t = 0; t < steps; ++t) {
      MixedPolicy nu = testing::RandomMixture(n, rng);
      std::vector<double> u(n);
      for (double& v : u) v = payoff(rng);
      trace.Append(nu, u, internal);
    }
    std::vector<double> uniform(steps, 1.0 / steps);
    if (internal) {
      MinimaxSolution sol = CompressCe(trace);
      double uniform_value = 0.0;
      for (int i = 0; i < n * n; ++i) {
        double s = 0.0;
        for (int t = 0; t < steps; ++t) s += uniform[t] * trace.internal[t][i];
        uniform_value = std::max(uniform_value, s);
      }
      CHECK(sol.value <= uniform_value + 1e-9);
    } else {
      MinimaxSolution sol = CompressCce(trace);
      CHECK(sol.value <= TraceCceGap(trace, uniform) + 1e-9);
    }
  }
}

TEST_CASE("regret loop on a single policy terminates immediately") {
  MeanFieldGame game = BiasedRps();
  PolicySet set(game);
  set.Add(ConstantPolicy(game, 0));
  RegretLoopConfig config;
  config.t_max = 50;
  config.tau_compress = 10;
  config.target_regret = 1e-6;
  RegretLoopResult result = RunRegretLoop(game, set, config);
  CHECK(result.steps == 1);
  CHECK(result.reached_target);
  CHECK(result.device.num_atoms() == 1);
  CHECK(result.achieved_gap <= 0.0 + 1e-12);
}

TEST_CASE("one-step loop returns the first iterate as the device") {
  MeanFieldGame game = BiasedRps();
  PolicySet set = RpsSet(game);
  RegretLoopConfig config;
  config.t_max = 1;
  config.tau_compress = 1;
  config.target_regret = -1.0;  // unreachable; forced to stop at t_max
  RegretLoopResult result = RunRegretLoop(game, set, config);
  CHECK(result.steps == 1);
  CHECK_FALSE(result.reached_target);
  REQUIRE(result.device.num_atoms() == 1);
  for (double w : result.device.atoms[0].nu.weights) {
    CHECK(w == doctest::Approx(1.0 / 3).epsilon(1e-12));
  }
}

TEST_CASE("external loop reaches 1e-3 on biased RPS within 5000 steps") {
  MeanFieldGame game = BiasedRps();
  PolicySet set = RpsSet(game);
  RegretLoopConfig config;
  config.t_max = 5000;
  config.tau_compress = 1;
  config.target_regret = 1e-3;
  RegretLoopResult result = RunRegretLoop(game, set, config);
  CHECK(result.reached_target);
  CHECK(result.steps <= 5000);
  CHECK(result.achieved_gap <= 1e-3);
  CHECK_NOTHROW(result.device.Validate());
  CHECK(result.device.num_atoms() <= result.steps);
}

TEST_CASE("internal loop drives the conditional gap down on biased RPS") {
  MeanFieldGame game = BiasedRps();
  PolicySet set = RpsSet(game);
  RegretLoopConfig config;
  config.learner = LearnerKind::kInternal;
  config.t_max = 4000;
  config.tau_compress = 10;
  config.target_regret = 5e-3;
  RegretLoopResult result = RunRegretLoop(game, set, config);
  CHECK(result.reached_target);
  CHECK(result.achieved_gap <= 5e-3);
  result.device.Validate();
}

TEST_CASE("noisy loop is seed-reproducible") {
  MeanFieldGame game = BiasedRps();
  PolicySet set = RpsSet(game);
  RegretLoopConfig config;
  config.t_max = 200;
  config.target_regret = 0.0;
  config.payoff_source.noisy = true;
  config.payoff_source.noise = NoiseModel::Gaussian(0.05);
  config.payoff_source.samples = 10;
  config.seed = 77;
  RegretLoopResult a = RunRegretLoop(game, set, config);
  RegretLoopResult b = RunRegretLoop(game, set, config);
  CHECK(a.steps == b.steps);
  REQUIRE(a.trace.payoffs.size() == b.trace.payoffs.size());
  for (size_t t = 0; t < a.trace.payoffs.size(); ++t) {
    CHECK(a.trace.payoffs[t] == b.trace.payoffs[t]);
  }
}

TEST_CASE("uniform-average external regret decays like 1/sqrt(T)") {
  MeanFieldGame game = BiasedRps();
  PolicySet set = RpsSet(game);
  double r100 = 0.0, r400 = 0.0, r1600 = 0.0;
  RegretLoopConfig config;
  config.t_max = 1600;
  config.tau_compress = 1600;  // no early compression stop
  config.target_regret = -1.0;
  RegretLoopResult result = RunRegretLoop(game, set, config);
  auto uniform_regret = [&](int t_cap) {
    RegretTrace prefix;
    for (int t = 0; t < t_cap; ++t) {
      prefix.Append(result.trace.iterates[t], result.trace.payoffs[t], false);
    }
    std::vector<double> uniform(t_cap, 1.0 / t_cap);
    return TraceCceGap(prefix, uniform);
  };
  r100 = uniform_regret(100);
  r400 = uniform_regret(400);
  r1600 = uniform_regret(1600);
  double n = 3;
  double c = r100 / std::sqrt(n * std::log(n) / 100);
  CHECK(r400 <= c * std::sqrt(n * std::log(n) / 400) * 1.2);
  CHECK(r1600 <= c * std::sqrt(n * std::log(n) / 1600) * 1.2);
  CHECK(r400 <= r100);
  CHECK(r1600 <= r400);
}

TEST_CASE("hedge learner also decays on biased RPS") {
  MeanFieldGame game = BiasedRps();
  PolicySet set = RpsSet(game);
  RegretLoopConfig config;
  config.algo = ExternalAlgo::kHedge;
  config.t_max = 2000;
  config.tau_compress = 1;
  config.target_regret = 5e-3;
  RegretLoopResult result = RunRegretLoop(game, set, config);
  CHECK(result.reached_target);
}

}  // namespace
}  // namespace mfpsro
