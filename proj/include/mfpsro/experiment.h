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

#ifndef MFPSRO_EXPERIMENT_H_
#define MFPSRO_EXPERIMENT_H_

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mfpsro/games.h"
#include "mfpsro/psro.h"
#include "mfpsro/regret.h"

namespace mfpsro {

// Config-driven experiment harness behind the command-line tool. Configs are
// a dotted key=value text format or plain JSON (detected by a leading '{');
// both map onto the same schema, documented in the README.

struct SolverSpec {
  enum class Kind { kPsro, kFictitiousPlay, kOmd };
  Kind kind = Kind::kPsro;
  std::string label;  // CSV algorithm column; defaulted from the kind
  PsroConfig psro;
  int iterations = 500;         // baseline iteration budget
  double learning_rate = 0.1;   // OMD
};

struct SetSpec {
  enum class Kind { kAll, kWarmup };
  Kind kind = Kind::kAll;
  int warmup_iterations = 3;
};

struct ExperimentConfig {
  GameSpec game;
  std::vector<SolverSpec> solvers;
  RegretLoopConfig loop;  // compress-demo inner loop
  SetSpec set_spec;       // compress-demo restricted set construction
  std::string output_dir = "out";
  uint64_t seed = 1;
  int repeats = 1;
  int jobs = 1;
  nlohmann::json raw;  // canonical config echo for the manifest

  void Validate() const;
};

// Parses either format; throws ConfigError with a line (text format) or
// parser position (JSON) on failure.
ExperimentConfig ParseConfigText(const std::string& text);
ExperimentConfig ParseConfigFile(const std::string& path);

struct CurveRow {
  int iteration = 0;
  double wall_time_s = 0.0;
  double gap = 0.0;
  std::string algorithm;
  uint64_t seed = 0;
};

// RFC 4180 with header "iteration,wall_time_s,gap,algorithm,seed".
std::string CurveCsv(const std::vector<CurveRow>& rows);

void WriteFileAtomic(const std::string& path, const std::string& content);

// 64-bit FNV-1a of the canonical config dump, hex-encoded.
std::string ConfigHash(const nlohmann::json& config);

// Executes the configured solver runs (repeats with offset seeds, up to
// `jobs` in parallel) and writes run JSON, curve.csv and manifest.json under
// output_dir.
void CmdRun(const ExperimentConfig& config);

// Runs every configured solver once and writes a merged curve.csv plus a
// summary table (also printed to stdout). Requires at least two solvers.
void CmdCompare(const ExperimentConfig& config);

// One regret loop logging the uniform-average and compressed device gaps and
// the compressed-device sparsity at every compression step.
void CmdCompressDemo(const ExperimentConfig& config);

}  // namespace mfpsro

#endif  // MFPSRO_EXPERIMENT_H_
