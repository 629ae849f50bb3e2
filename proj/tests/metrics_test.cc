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
#include "mfpsro/metrics.h"
#include "mfpsro/restricted_nash.h"
#include "oracles.h"
#include "test_util.h"

namespace mfpsro {
namespace {

using testing::AntiCongestionGame;
using testing::RandomMixture;
using testing::RandomPolicyFor;
using testing::RandomSmallGame;

PolicySet RpsSet(const MeanFieldGame& game) {
  PolicySet set(game);
  for (Action a = 0; a < 3; ++a) set.Add(ConstantPolicy(game, a));
  return set;
}

TEST_CASE("exploitability at hand-derived points") {
  MeanFieldGame game = BiasedRps();
  PolicySet set = RpsSet(game);
  MixedPolicy nash;
  nash.weights = testing::BiasedRpsEqualPayoffMixture();
  CHECK(Exploitability(game, set, nash).value ==
        doctest::Approx(0.0).epsilon(1e-10));
  GapReport pure = Exploitability(game, set, MixedPolicy::Delta(0, 3));
  CHECK(pure.value == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(pure.witness == ConstantPolicy(game, 2));

  MeanFieldGame zero = testing::ZeroRewardGame();
  PolicySet zset(zero);
  zset.Add(ConstantPolicy(zero, 0));
  CHECK(Exploitability(zero, zset, MixedPolicy::Delta(0, 1)).value == 0.0);
}

TEST_CASE("witnesses reproduce their reported gaps") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    MeanFieldGame game = RandomSmallGame(rng, /*quadratic=*/true);
    PolicySet set(game);
    for (int i = 0; i < 3; ++i) {
      DeterministicPolicy pi = RandomPolicyFor(game, rng);
      if (!set.Contains(pi)) set.Add(pi);
    }
    MixedPolicy nu = RandomMixture(set.size(), rng);
    GapReport report = Exploitability(game, set, nu);
    PopulationFlow mu = MixtureFlow(set, nu);
    double replay =
        Payoff(game, report.witness, mu) - MixedPayoff(game, set, nu, mu);
    CHECK(report.value == doctest::Approx(replay).epsilon(1e-9));
    CHECK(report.value >= -1e-9);
  }
}

TEST_CASE("exploitability matches the enumeration oracle") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 100; ++k) {
    MeanFieldGame game = RandomSmallGame(rng, /*quadratic=*/(k % 3 == 0));
    PolicySet set(game);
    for (int i = 0; i < 3; ++i) {
      DeterministicPolicy pi = RandomPolicyFor(game, rng);
      if (!set.Contains(pi)) set.Add(pi);
    }
    MixedPolicy nu = RandomMixture(set.size(), rng);
    double fast = Exploitability(game, set, nu).value;
    double brute =
        oracle::BruteExploitability(game, set.policies(), nu.weights);
    CHECK(fast == doctest::Approx(brute).epsilon(1e-9));
  }
}

TEST_CASE("singleton-device CCE gap equals the atom's exploitability") {
  MeanFieldGame game = BiasedRps();
  PolicySet set = RpsSet(game);
  MixedPolicy nash;
  nash.weights = testing::BiasedRpsEqualPayoffMixture();
  CHECK(CceGap(game, set, CorrelationDevice::Singleton(nash)).value ==
        doctest::Approx(0.0).epsilon(1e-10));
  CHECK(
      CceGap(game, set, CorrelationDevice::Singleton(MixedPolicy::Delta(0, 3)))
          .value == doctest::Approx(0.7).epsilon(1e-10));

  std::mt19937_64 rng(9);
  for (int k = 0; k < 10; ++k) {
    MixedPolicy nu = RandomMixture(3, rng);
    double direct = Exploitability(game, set, nu).value;
    double device = CceGap(game, set, CorrelationDevice::Singleton(nu)).value;
    CHECK(device == doctest::Approx(direct).epsilon(1e-9));
  }
}

TEST_CASE("mixing two zero-gap atoms cannot exceed either gap") {
  MeanFieldGame game = BiasedRps();
  PolicySet set = RpsSet(game);
  MixedPolicy nash;
  nash.weights = testing::BiasedRpsEqualPayoffMixture();
  CorrelationDevice mix;
  mix.atoms.push_back({0.5, nash});
  mix.atoms.push_back({0.5, nash});
  CHECK(CceGap(game, set, mix).value <= 0.0 + 1e-9);
}

TEST_CASE("CE gap conditions on the recommending atoms") {
  MeanFieldGame game = BiasedRps();
  PolicySet set = RpsSet(game);
  CorrelationDevice rho;
  rho.atoms.push_back({0.5, MixedPolicy::Delta(0, 3)});
  rho.atoms.push_back({0.5, MixedPolicy::Delta(1, 3)});
  GapReport report = CeGap(game, set, rho);
  // Conditioning isolates the pure atoms: vs all-A the best deviation earns
  // 0.7, vs all-B it earns 0.5; the gap is the larger one.
  CHECK(report.value == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(report.witness_recommendation == 0);
  CHECK(report.witness == ConstantPolicy(game, 2));
}

TEST_CASE("dominant singleton recommendation has nonpositive CE gap") {
  MeanFieldGame game = testing::DominantActionGame(3, 1);
  PolicySet set(game);
  for (Action a = 0; a < 3; ++a) set.Add(ConstantPolicy(game, a));
  CorrelationDevice rho =
      CorrelationDevice::Singleton(MixedPolicy::Delta(1, 3));
  CHECK(CeGap(game, set, rho).value <= 0.0 + 1e-9);
}

TEST_CASE("CE gap dominates CCE gap on random devices") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 30; ++k) {
    MeanFieldGame game =
        (k % 2 == 0) ? BiasedRps() : CoopBetrayPunish();
    PolicySet set = RpsSet(game);
    CorrelationDevice rho;
    int atoms = 1 + static_cast<int>(rng() % 4);
    std::vector<double> w = RandomMixture(atoms, rng).weights;
    for (int t = 0; t < atoms; ++t) {
      rho.atoms.push_back({w[t], RandomMixture(3, rng)});
    }
    double ce = CeGap(game, set, rho).value;
    double cce = CceGap(game, set, rho).value;
    CHECK(ce >= cce - 1e-9);
  }
}

TEST_CASE("device gap witnesses replay their values") {
  std::mt19937_64 rng(41);
  MeanFieldGame game = CoopBetrayPunish();
  PolicySet set = RpsSet(game);
  for (int k = 0; k < 10; ++k) {
    CorrelationDevice rho;
    int atoms = 2 + static_cast<int>(rng() % 3);
    std::vector<double> w = RandomMixture(atoms, rng).weights;
    for (int t = 0; t < atoms; ++t) {
      rho.atoms.push_back({w[t], RandomMixture(3, rng)});
    }

    GapReport cce = CceGap(game, set, rho);
    double replay = 0.0;
    for (const CorrelationDevice::Atom& atom : rho.atoms) {
      PopulationFlow flow = MixtureFlow(set, atom.nu);
      replay += atom.weight * (Payoff(game, cce.witness, flow) -
                               MixedPayoff(game, set, atom.nu, flow));
    }
    CHECK(cce.value == doctest::Approx(replay).epsilon(1e-9));

    GapReport ce = CeGap(game, set, rho);
    REQUIRE(ce.witness_recommendation >= 0);
    double marginal = rho.PolicyMarginal(ce.witness_recommendation);
    double ce_replay = 0.0;
    for (const CorrelationDevice::Atom& atom : rho.atoms) {
      double cw = atom.weight *
                  atom.nu.weights[ce.witness_recommendation] / marginal;
      if (cw == 0.0) continue;
      PopulationFlow flow = MixtureFlow(set, atom.nu);
      ce_replay += cw * (Payoff(game, ce.witness, flow) -
                         MixedPayoff(game, set, atom.nu, flow));
    }
    CHECK(ce.value == doctest::Approx(ce_replay).epsilon(1e-9));
  }
}

TEST_CASE("zero-marginal devices are rejected by CE gap") {
  MeanFieldGame game = BiasedRps();
  PolicySet set = RpsSet(game);
  CorrelationDevice rho;
  CHECK_THROWS_AS(CeGap(game, set, rho), ParamError);
}

TEST_CASE("meta-game matrix of biased RPS") {
  MeanFieldGame game = BiasedRps();
  PolicySet set = RpsSet(game);
  std::vector<std::vector<double>> m = MetaGameMatrix(game, set);
  std::vector<std::vector<double>> expected = {
      {0.0, 0.5, -0.3}, {-0.7, 0.0, 0.3}, {0.7, -0.5, 0.0}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(m[i][j] == doctest::Approx(expected[i][j]).epsilon(1e-12));
    }
  }
  // Diagonal entries coincide with the delta-mixture payoff route.
  for (int i = 0; i < 3; ++i) {
    PopulationFlow flow = MixtureFlow(set, MixedPolicy::Delta(i, 3));
    CHECK(m[i][i] ==
          doctest::Approx(MixedPayoff(game, set, MixedPolicy::Delta(i, 3),
                                      flow)).epsilon(1e-12));
  }

  PolicySet singleton(game);
  singleton.Add(ConstantPolicy(game, 1));
  std::vector<std::vector<double>> one = MetaGameMatrix(game, singleton);
  REQUIRE(one.size() == 1);
  CHECK(one[0][0] ==
        doctest::Approx(Payoff(game, singleton.policy(0),
                               singleton.flow(0))).epsilon(1e-12));
}

TEST_CASE("symmetric meta-game equilibrium recovers the RPS mixture") {
  MeanFieldGame game = BiasedRps();
  PolicySet set = RpsSet(game);
  std::vector<double> nu = SymmetricNashOfMetaGame(MetaGameMatrix(game, set));
  std::vector<double> expected = testing::BiasedRpsEqualPayoffMixture();
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(nu[i] - expected[i]) < 1e-6);
  }
  MixedPolicy mixed;
  mixed.weights = nu;
  CHECK(RestrictedExploitability(game, set, mixed) <= 1e-6);
  CHECK(IsRestrictedNash(game, set, mixed, 1e-6));

  CHECK(SymmetricNashOfMetaGame({{0.4}}) == std::vector<double>{1.0});
}

TEST_CASE("monotonicity checks") {
  CHECK(CheckMonotonicity(CrowdChain(5, 3, 1.0), 500).monotone);
  MonotonicityReport anti = CheckMonotonicity(AntiCongestionGame(), 500);
  CHECK_FALSE(anti.monotone);
  CHECK(anti.violation > 0.0);
  // The witness pair replays its violation.
  MeanFieldGame game = AntiCongestionGame();
  PopulationFlow f1 = OccupancyFlow(game, anti.first);
  PopulationFlow f2 = OccupancyFlow(game, anti.second);
  double lhs = Payoff(game, anti.first, f1) + Payoff(game, anti.second, f2) -
               Payoff(game, anti.second, f1) - Payoff(game, anti.first, f2);
  CHECK(lhs == doctest::Approx(anti.violation).epsilon(1e-9));

  // Single-action games only admit the identical pair; trivially monotone.
  MeanFieldGame single = CrowdChain(3, 2, 1.0);
  single.num_actions = 1;
  single.transition = [](State x, Action) { return x; };
  CHECK(CheckMonotonicity(single, 50).monotone);
}

TEST_CASE("full-game and restricted-subset monotonicity agree") {
  std::mt19937_64 rng(31);
  for (MeanFieldGame game :
       {CrowdChain(4, 3, 1.0), AntiCongestionGame(3, 2)}) {
    bool full = CheckMonotonicity(game, 400, 1e-9, 5).monotone;
    bool all_subsets = true;
    for (int s = 0; s < 10; ++s) {
      PolicySet set(game);
      while (set.size() < 3) {
        DeterministicPolicy pi = RandomPolicyFor(game, rng);
        if (!set.Contains(pi)) set.Add(pi);
      }
      all_subsets = all_subsets &&
                    CheckRestrictedMonotonicity(game, set, 100, 1e-9, s)
                        .monotone;
    }
    CHECK(full == all_subsets);
  }
}

TEST_CASE("diff-affinity certifies the meta-game equilibrium route") {
  // On a diff-affine game the symmetric meta-game equilibrium must be a
  // restricted Nash equilibrium of the source game.
  MeanFieldGame game = CrowdChain(3, 2, 0.7);
  CHECK(CheckDiffAffine(game).is_diff_affine);
  std::mt19937_64 rng(37);
  PolicySet set(game);
  while (set.size() < 4) {
    DeterministicPolicy pi = RandomPolicyFor(game, rng);
    if (!set.Contains(pi)) set.Add(pi);
  }
  MixedPolicy nu;
  nu.weights = SymmetricNashOfMetaGame(MetaGameMatrix(game, set));
  CHECK(RestrictedExploitability(game, set, nu) <= 1e-6);
}

}  // namespace
}  // namespace mfpsro
