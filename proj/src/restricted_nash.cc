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

#include "mfpsro/restricted_nash.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace mfpsro {

void SimplexSearchConfig::Validate() const {
  if (population_size < 4) throw ConfigError("population too small");
  if (!(elite_fraction > 0.0 && elite_fraction < 1.0)) {
    throw ConfigError("elite fraction must lie in (0, 1)");
  }
  if (iterations < 1) throw ConfigError("search needs at least one iteration");
  if (tolerance < 0.0) throw ConfigError("negative tolerance");
}

double RestrictedExploitability(const MeanFieldGame& game, const PolicySet& set,
                                const MixedPolicy& nu) {
  PopulationFlow flow = MixtureFlow(set, nu);
  std::vector<double> payoffs = SetPayoffs(game, set, flow);
  double played = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < set.size(); ++i) {
    played += nu.weights[i] * payoffs[i];
    best = std::max(best, payoffs[i]);
  }
  return best - played;
}

namespace {

void ProjectToSimplex(std::vector<double>* v) {
  double total = 0.0;
  for (double& x : *v) {
    if (!(x > 0.0)) x = 0.0;
    total += x;
  }
  if (total <= 0.0) {
    std::fill(v->begin(), v->end(), 1.0 / v->size());
    return;
  }
  for (double& x : *v) x /= total;
}

std::vector<double> SampleDirichlet(const std::vector<double>& alpha,
                                    std::mt19937_64& rng) {
  std::vector<double> out(alpha.size());
  for (size_t i = 0; i < alpha.size(); ++i) {
    std::gamma_distribution<double> g(std::max(alpha[i], 1e-3), 1.0);
    out[i] = g(rng);
  }
  ProjectToSimplex(&out);
  return out;
}

// Pairwise mass-transfer descent with a halving step schedule. Monotone, so
// the search result can only improve.
void PolishOnSimplex(const std::function<double(const std::vector<double>&)>& loss,
                     std::vector<double>* point, double* value) {
  int n = static_cast<int>(point->size());
  for (double step = 0.05; step > 1e-10; step *= 0.5) {
    bool improved = true;
    int rounds = 0;
    while (improved && rounds++ < 50) {
      improved = false;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          double delta = std::min(step, (*point)[j]);
          if (delta <= 0.0) continue;
          std::vector<double> trial = *point;
          trial[j] -= delta;
          trial[i] += delta;
          double v = loss(trial);
          if (v < *value - 1e-15) {
            *point = std::move(trial);
            *value = v;
            improved = true;
          }
        }
      }
    }
  }
}

}  // namespace

RestrictedNashResult MinimizeOverSimplex(
    int dims, const std::function<double(const std::vector<double>&)>& loss,
    const SimplexSearchConfig& config) {
  config.Validate();
  RestrictedNashResult result;
  if (dims == 1) {
    result.nu.weights = {1.0};
    result.exploitability = loss(result.nu.weights);
    result.converged = true;
    result.evaluations = 1;
    return result;
  }

  std::mt19937_64 rng(config.seed);
  std::vector<double> center(dims, 1.0 / dims);
  double concentration = 10.0;
  int elites = std::max(1, static_cast<int>(std::ceil(
                               config.elite_fraction * config.population_size)));

  std::vector<double> best_point(dims, 1.0 / dims);
  double best_value = loss(best_point);
  result.evaluations = 1;
  if (config.warm_start.has_value()) {
    std::vector<double> warm = *config.warm_start;
    if (static_cast<int>(warm.size()) != dims) {
      throw ParamError("warm start has the wrong dimension");
    }
    ProjectToSimplex(&warm);
    double v = loss(warm);
    ++result.evaluations;
    if (v < best_value) {
      best_value = v;
      best_point = warm;
    }
    center = warm;
  }

  std::vector<std::pair<double, std::vector<double>>> scored;
  scored.reserve(config.population_size + 2);
  for (int gen = 0; gen < config.iterations && best_value > config.tolerance;
       ++gen) {
    scored.clear();
    scored.emplace_back(best_value, best_point);
    if (gen == 0) {
      std::vector<double> uniform(dims, 1.0 / dims);
      scored.emplace_back(loss(uniform), std::move(uniform));
      ++result.evaluations;
    }
    std::vector<double> alpha(dims);
    for (int d = 0; d < dims; ++d) alpha[d] = center[d] * concentration;
    while (static_cast<int>(scored.size()) < config.population_size) {
      std::vector<double> candidate = SampleDirichlet(alpha, rng);
      scored.emplace_back(loss(candidate), std::move(candidate));
      ++result.evaluations;
    }
    std::sort(scored.begin(), scored.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (scored[0].first < best_value) {
      best_value = scored[0].first;
      best_point = scored[0].second;
    }
    std::fill(center.begin(), center.end(), 0.0);
    for (int e = 0; e < elites; ++e) {
      for (int d = 0; d < dims; ++d) center[d] += scored[e].second[d] / elites;
    }
    ProjectToSimplex(&center);
    concentration = std::min(concentration * 1.35, 1e14);
  }

  if (best_value > config.tolerance) {
    PolishOnSimplex(loss, &best_point, &best_value);
  }

  result.nu.weights = best_point;
  result.exploitability = best_value;
  result.converged = best_value <= config.tolerance;
  return result;
}

RestrictedNashResult SolveRestrictedNash(const MeanFieldGame& game,
                                         const PolicySet& set,
                                         const SimplexSearchConfig& config) {
  if (set.size() < 1) throw ParamError("empty policy set");
  if (set.size() == 1) {
    RestrictedNashResult result;
    result.nu = MixedPolicy::Delta(0, 1);
    result.exploitability = 0.0;
    result.converged = true;
    return result;
  }
  auto loss = [&game, &set](const std::vector<double>& w) {
    MixedPolicy nu;
    nu.weights = w;
    return RestrictedExploitability(game, set, nu);
  };
  return MinimizeOverSimplex(set.size(), loss, config);
}

bool IsRestrictedNash(const MeanFieldGame& game, const PolicySet& set,
                      const MixedPolicy& nu, double tol) {
  if (tol < 0.0) throw ParamError("negative tolerance");
  return RestrictedExploitability(game, set, nu) <= tol;
}

}  // namespace mfpsro
