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

#ifndef MFPSRO_SERIALIZATION_H_
#define MFPSRO_SERIALIZATION_H_

#include <json.hpp>

#include "mfpsro/baselines.h"
#include "mfpsro/core.h"
#include "mfpsro/psro.h"
#include "mfpsro/regret.h"

// JSON forms of the run artifacts. Serialized results carry only
// deterministic fields (wall-clock timings go to the CSV curves instead), so
// identical configs and seeds reproduce byte-identical files.

namespace mfpsro {

nlohmann::json ToJson(const DeterministicPolicy& policy);
DeterministicPolicy PolicyFromJson(const nlohmann::json& j);

nlohmann::json ToJson(const MixedPolicy& nu);
MixedPolicy MixedPolicyFromJson(const nlohmann::json& j);

nlohmann::json ToJson(const CorrelationDevice& device);
CorrelationDevice DeviceFromJson(const nlohmann::json& j);

nlohmann::json ToJson(const RegretTrace& trace);
RegretTrace TraceFromJson(const nlohmann::json& j);

// Plain mirror of a PSRO run: policy action tables, device, per-iteration
// log (without wall times), termination flags.
struct PsroRunData {
  std::string mode;
  bool terminated = false;
  double final_rho_tol = 0.0;
  std::vector<DeterministicPolicy> policies;
  CorrelationDevice device;
  std::vector<PsroIterationLog> log;  // wall_time_s omitted from JSON

  friend bool operator==(const PsroRunData&, const PsroRunData&);
};

PsroRunData ToData(const PsroResult& result);
nlohmann::json ToJson(const PsroRunData& data);
PsroRunData PsroRunDataFromJson(const nlohmann::json& j);

nlohmann::json ToJson(const BaselineRun& run);
BaselineRun BaselineFromJson(const nlohmann::json& j);

}  // namespace mfpsro

#endif  // MFPSRO_SERIALIZATION_H_
