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

#include "mfpsro/serialization.h"

namespace mfpsro {

using nlohmann::json;

json ToJson(const DeterministicPolicy& policy) {
  return json{{"num_states", policy.num_states},
              {"time_steps", policy.time_steps},
              {"actions", policy.actions}};
}

DeterministicPolicy PolicyFromJson(const json& j) {
  DeterministicPolicy policy;
  policy.num_states = j.at("num_states").get<int>();
  policy.time_steps = j.at("time_steps").get<int>();
  policy.actions = j.at("actions").get<std::vector<Action>>();
  return policy;
}

json ToJson(const MixedPolicy& nu) { return json{{"weights", nu.weights}}; }

MixedPolicy MixedPolicyFromJson(const json& j) {
  MixedPolicy nu;
  nu.weights = j.at("weights").get<std::vector<double>>();
  return nu;
}

json ToJson(const CorrelationDevice& device) {
  json atoms = json::array();
  for (const CorrelationDevice::Atom& atom : device.atoms) {
    atoms.push_back(json{{"weight", atom.weight}, {"nu", atom.nu.weights}});
  }
  return json{{"atoms", atoms}};
}

CorrelationDevice DeviceFromJson(const json& j) {
  CorrelationDevice device;
  for (const json& atom : j.at("atoms")) {
    MixedPolicy nu;
    nu.weights = atom.at("nu").get<std::vector<double>>();
    device.atoms.push_back({atom.at("weight").get<double>(), std::move(nu)});
  }
  return device;
}

json ToJson(const RegretTrace& trace) {
  json iterates = json::array();
  for (const MixedPolicy& nu : trace.iterates) iterates.push_back(nu.weights);
  return json{{"iterates", iterates},
              {"payoffs", trace.payoffs},
              {"external", trace.external},
              {"internal", trace.internal}};
}

RegretTrace TraceFromJson(const json& j) {
  RegretTrace trace;
  for (const json& w : j.at("iterates")) {
    MixedPolicy nu;
    nu.weights = w.get<std::vector<double>>();
    trace.iterates.push_back(std::move(nu));
  }
  trace.payoffs = j.at("payoffs").get<std::vector<std::vector<double>>>();
  trace.external = j.at("external").get<std::vector<std::vector<double>>>();
  trace.internal = j.at("internal").get<std::vector<std::vector<double>>>();
  return trace;
}

bool operator==(const PsroRunData& a, const PsroRunData& b) {
  return ToJson(a) == ToJson(b);
}

PsroRunData ToData(const PsroResult& result) {
  PsroRunData data;
  data.mode = ModeName(result.mode);
  data.terminated = result.terminated;
  data.final_rho_tol = result.final_rho_tol;
  data.policies = result.set->policies();
  data.device = result.device;
  data.log = result.log;
  return data;
}

json ToJson(const PsroRunData& data) {
  json policies = json::array();
  for (const DeterministicPolicy& pi : data.policies) {
    policies.push_back(ToJson(pi));
  }
  json log = json::array();
  for (const PsroIterationLog& entry : data.log) {
    log.push_back(json{{"iteration", entry.iteration},
                       {"gap", entry.gap},
                       {"inner_steps", entry.inner_steps},
                       {"new_policy", entry.new_policy}});
  }
  return json{{"kind", "psro"},
              {"mode", data.mode},
              {"terminated", data.terminated},
              {"final_rho_tol", data.final_rho_tol},
              {"policies", policies},
              {"device", ToJson(data.device)},
              {"log", log}};
}

PsroRunData PsroRunDataFromJson(const json& j) {
  PsroRunData data;
  data.mode = j.at("mode").get<std::string>();
  data.terminated = j.at("terminated").get<bool>();
  data.final_rho_tol = j.at("final_rho_tol").get<double>();
  for (const json& pj : j.at("policies")) {
    data.policies.push_back(PolicyFromJson(pj));
  }
  data.device = DeviceFromJson(j.at("device"));
  for (const json& entry : j.at("log")) {
    PsroIterationLog e;
    e.iteration = entry.at("iteration").get<int>();
    e.gap = entry.at("gap").get<double>();
    e.inner_steps = entry.at("inner_steps").get<int>();
    e.new_policy = entry.at("new_policy").get<bool>();
    data.log.push_back(e);
  }
  return data;
}

json ToJson(const BaselineRun& run) {
  json curve = json::array();
  for (const BaselineCurvePoint& p : run.curve) {
    curve.push_back(json{{"iteration", p.iteration},
                         {"exploitability", p.exploitability}});
  }
  json support = json::array();
  for (const DeterministicPolicy& pi : run.support) support.push_back(ToJson(pi));
  return json{{"kind", "baseline"},
              {"algorithm", run.algorithm},
              {"learning_rate", run.learning_rate},
              {"curve", curve},
              {"support", support},
              {"final_weights", run.final_weights},
              {"final_policy_probs", run.final_policy_probs}};
}

BaselineRun BaselineFromJson(const json& j) {
  BaselineRun run;
  run.algorithm = j.at("algorithm").get<std::string>();
  run.learning_rate = j.at("learning_rate").get<double>();
  for (const json& p : j.at("curve")) {
    BaselineCurvePoint point;
    point.iteration = p.at("iteration").get<int>();
    point.exploitability = p.at("exploitability").get<double>();
    run.curve.push_back(point);
  }
  for (const json& pj : j.at("support")) {
    run.support.push_back(PolicyFromJson(pj));
  }
  run.final_weights = j.at("final_weights").get<std::vector<double>>();
  run.final_policy_probs =
      j.at("final_policy_probs").get<std::vector<double>>();
  return run;
}

}  // namespace mfpsro
