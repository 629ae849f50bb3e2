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

#ifndef MFPSRO_BASELINES_H_
#define MFPSRO_BASELINES_H_

#include <string>
#include <vector>

#include "mfpsro/core.h"

namespace mfpsro {

struct BaselineCurvePoint {
  int iteration = 0;
  double wall_time_s = 0.0;
  double exploitability = 0.0;
};

struct BaselineRun {
  std::string algorithm;  // "fp" or "omd"
  double learning_rate = 0.0;
  std::vector<BaselineCurvePoint> curve;
  // Final iterate, for inspection: the mixture over the best-response
  // history for FP, the per-(step, state) action probabilities for OMD.
  std::vector<DeterministicPolicy> support;
  std::vector<double> final_weights;
  std::vector<double> final_policy_probs;
};

// Flow-averaging fictitious play: keeps the time-averaged population flow,
// best-responds to it, and folds the response's flow into the average. The
// average equals the mixture flow of the uniform distribution over the
// best-response history; its exploitability is logged every step.
BaselineRun FictitiousPlay(const MeanFieldGame& game, int iterations);

// Tabular mirror descent with an entropy regularizer: accumulates the
// current policy's state-action values against its own induced flow and
// plays the per-state softmax of learning_rate times the accumulator.
BaselineRun OnlineMirrorDescent(const MeanFieldGame& game, int iterations,
                                double learning_rate);

// Occupancy flow of a stochastic policy given as per-(step, state) action
// probabilities (time_steps == 1 means stationary).
PopulationFlow StochasticPolicyFlow(const MeanFieldGame& game,
                                    const std::vector<double>& action_probs,
                                    int time_steps);

}  // namespace mfpsro

#endif  // MFPSRO_BASELINES_H_
