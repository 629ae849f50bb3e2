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

#include "mfpsro/experiment.h"

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "mfpsro/baselines.h"
#include "mfpsro/serialization.h"

namespace mfpsro {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string Trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> SplitPath(const std::string& key) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : key) {
    if (c == '.') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

bool IsIndex(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

void InsertPath(json* root, const std::vector<std::string>& path,
                json value, int line) {
  json* node = root;
  for (size_t d = 0; d < path.size(); ++d) {
    const std::string& part = path[d];
    if (part.empty()) {
      throw ConfigError("config line " + std::to_string(line) +
                        ": empty key component");
    }
    bool last = (d + 1 == path.size());
    if (IsIndex(part)) {
      size_t idx = std::stoul(part);
      if (node->is_null()) *node = json::array();
      if (!node->is_array()) {
        throw ConfigError("config line " + std::to_string(line) +
                          ": key mixes array and object use");
      }
      while (node->size() <= idx) node->push_back(json());
      node = &(*node)[idx];
    } else {
      if (node->is_null()) *node = json::object();
      if (!node->is_object()) {
        throw ConfigError("config line " + std::to_string(line) +
                          ": key mixes array and object use");
      }
      node = &(*node)[part];
    }
    if (last) {
      *node = std::move(value);
    }
  }
}

json KeyValueToJson(const std::string& text) {
  json root = json::object();
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    // Comments start the line or follow whitespace.
    size_t hash = s.find('#');
    while (hash != std::string::npos) {
      if (hash == 0 || isspace(static_cast<unsigned char>(s[hash - 1]))) {
        s = s.substr(0, hash);
        break;
      }
      hash = s.find('#', hash + 1);
    }
    s = Trim(s);
    if (s.empty()) continue;
    size_t eq = s.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line) +
                        ", column 1: expected key = value");
    }
    std::string key = Trim(s.substr(0, eq));
    std::string value = Trim(s.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line) +
                        ", column 1: empty key");
    }
    json parsed;
    try {
      parsed = json::parse(value);
    } catch (const json::parse_error&) {
      parsed = value;  // bare string
    }
    InsertPath(&root, SplitPath(key), std::move(parsed), line);
  }
  return root;
}

double NumberAt(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) {
    throw ConfigError("config: '" + key + "' must be a number");
  }
  return j.at(key).get<double>();
}

std::string StringAt(const json& j, const std::string& key,
                     const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) {
    throw ConfigError("config: '" + key + "' must be a string");
  }
  return j.at(key).get<std::string>();
}

GameSpec ParseGameSpec(const json& j) {
  GameSpec spec;
  spec.name = StringAt(j, "name", "");
  if (spec.name.empty()) throw ConfigError("config: game.name is required");
  if (j.contains("params")) {
    for (auto it = j.at("params").begin(); it != j.at("params").end(); ++it) {
      if (!it.value().is_number()) {
        throw ConfigError("config: game parameter '" + it.key() +
                          "' must be a number");
      }
      spec.params[it.key()] = it.value().get<double>();
    }
  }
  if (j.contains("noise")) {
    const json& n = j.at("noise");
    std::string kind = StringAt(n, "kind", "none");
    double scale = NumberAt(n, "scale", 0.0);
    if (kind == "gaussian") {
      spec.noise = NoiseModel::Gaussian(scale);
    } else if (kind == "uniform") {
      spec.noise = NoiseModel::Uniform(scale);
    } else if (kind != "none") {
      throw ConfigError("config: unknown noise kind '" + kind + "'");
    }
    spec.noise_samples = static_cast<int>(NumberAt(n, "samples", 1));
    if (spec.noise_samples < 1) {
      throw ConfigError("config: noise samples must be >= 1");
    }
  }
  return spec;
}

PayoffSource PayoffSourceFor(const GameSpec& game) {
  PayoffSource source;
  if (game.noise.kind != NoiseModel::Kind::kNone && game.noise.scale > 0.0) {
    source.noisy = true;
    source.noise = game.noise;
    source.samples = game.noise_samples;
  }
  return source;
}

SolverSpec ParseSolver(const json& j, const GameSpec& game) {
  SolverSpec spec;
  std::string type = StringAt(j, "type", "psro");
  if (type == "psro") {
    spec.kind = SolverSpec::Kind::kPsro;
  } else if (type == "fp") {
    spec.kind = SolverSpec::Kind::kFictitiousPlay;
  } else if (type == "omd") {
    spec.kind = SolverSpec::Kind::kOmd;
  } else {
    throw ConfigError("config: unknown solver type '" + type + "'");
  }

  std::string mode = StringAt(j, "mode", "nash");
  if (mode == "nash") {
    spec.psro.mode = PsroMode::kNash;
  } else if (mode == "cce") {
    spec.psro.mode = PsroMode::kCce;
  } else if (mode == "ce") {
    spec.psro.mode = PsroMode::kCe;
  } else {
    throw ConfigError("config: unknown psro mode '" + mode + "'");
  }
  spec.psro.rho_tol = NumberAt(j, "rho_tol", spec.psro.rho_tol);
  spec.psro.rho_lim = NumberAt(j, "rho_lim", spec.psro.rho_lim);
  spec.psro.t_max = static_cast<int>(NumberAt(j, "t_max", spec.psro.t_max));
  spec.psro.tau_compress =
      static_cast<int>(NumberAt(j, "tau_compress", spec.psro.tau_compress));
  spec.psro.max_iterations = static_cast<int>(
      NumberAt(j, "max_iterations", spec.psro.max_iterations));
  std::string algo = StringAt(j, "algo", "regret_matching");
  if (algo == "hedge") {
    spec.psro.external_algo = ExternalAlgo::kHedge;
  } else if (algo != "regret_matching") {
    throw ConfigError("config: unknown learner '" + algo + "'");
  }
  if (j.contains("nash")) {
    const json& n = j.at("nash");
    spec.psro.nash_search.population_size = static_cast<int>(
        NumberAt(n, "population", spec.psro.nash_search.population_size));
    spec.psro.nash_search.elite_fraction =
        NumberAt(n, "elite_fraction", spec.psro.nash_search.elite_fraction);
    spec.psro.nash_search.iterations = static_cast<int>(
        NumberAt(n, "iterations", spec.psro.nash_search.iterations));
    spec.psro.nash_search.tolerance =
        NumberAt(n, "tolerance", spec.psro.nash_search.tolerance);
  }
  spec.psro.payoff_source = PayoffSourceFor(game);

  spec.iterations = static_cast<int>(NumberAt(j, "iterations", 500));
  spec.learning_rate = NumberAt(j, "learning_rate", 0.1);

  std::string fallback_label;
  switch (spec.kind) {
    case SolverSpec::Kind::kPsro:
      fallback_label = "psro_" + mode;
      break;
    case SolverSpec::Kind::kFictitiousPlay:
      fallback_label = "fp";
      break;
    case SolverSpec::Kind::kOmd: {
      std::ostringstream s;
      s << "omd_" << spec.learning_rate;
      fallback_label = s.str();
      break;
    }
  }
  spec.label = StringAt(j, "label", fallback_label);
  return spec;
}

RegretLoopConfig ParseLoop(const json& j, const GameSpec& game) {
  RegretLoopConfig loop;
  std::string learner = StringAt(j, "learner", "external");
  if (learner == "internal") {
    loop.learner = LearnerKind::kInternal;
  } else if (learner != "external") {
    throw ConfigError("config: unknown loop learner '" + learner + "'");
  }
  std::string algo = StringAt(j, "algo", "regret_matching");
  if (algo == "hedge") {
    loop.algo = ExternalAlgo::kHedge;
  } else if (algo != "regret_matching") {
    throw ConfigError("config: unknown learner '" + algo + "'");
  }
  loop.t_max = static_cast<int>(NumberAt(j, "t_max", loop.t_max));
  loop.target_regret = NumberAt(j, "target", loop.target_regret);
  loop.tau_compress =
      static_cast<int>(NumberAt(j, "tau_compress", loop.tau_compress));
  loop.hedge_eta = NumberAt(j, "hedge_eta", 0.0);
  loop.payoff_source = PayoffSourceFor(game);
  return loop;
}

}  // namespace

void ExperimentConfig::Validate() const {
  if (repeats < 1) throw ConfigError("config: repeats must be >= 1");
  if (jobs < 1) throw ConfigError("config: jobs must be >= 1");
  if (output_dir.empty()) throw ConfigError("config: output_dir is empty");
}

ExperimentConfig ParseConfigText(const std::string& text) {
  json root;
  std::string body = Trim(text);
  if (!body.empty() && body[0] == '{') {
    try {
      root = json::parse(body);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config JSON parse error: ") + e.what());
    }
  } else {
    root = KeyValueToJson(text);
  }

  ExperimentConfig config;
  config.raw = root;
  if (!root.contains("game")) throw ConfigError("config: missing game section");
  config.game = ParseGameSpec(root.at("game"));

  if (root.contains("solver")) {
    config.solvers.push_back(ParseSolver(root.at("solver"), config.game));
  }
  if (root.contains("solvers")) {
    for (const json& s : root.at("solvers")) {
      config.solvers.push_back(ParseSolver(s, config.game));
    }
  }
  if (root.contains("loop")) {
    config.loop = ParseLoop(root.at("loop"), config.game);
  } else {
    config.loop.payoff_source = PayoffSourceFor(config.game);
  }
  if (root.contains("set")) {
    std::string kind = StringAt(root.at("set"), "kind", "all");
    if (kind == "warmup") {
      config.set_spec.kind = SetSpec::Kind::kWarmup;
    } else if (kind != "all") {
      throw ConfigError("config: unknown set kind '" + kind + "'");
    }
    config.set_spec.warmup_iterations = static_cast<int>(
        NumberAt(root.at("set"), "warmup_iterations", 3));
  }
  config.output_dir = StringAt(root, "output_dir", config.output_dir);
  config.seed = static_cast<uint64_t>(NumberAt(root, "seed", 1));
  config.repeats = static_cast<int>(NumberAt(root, "repeats", 1));
  config.jobs = static_cast<int>(NumberAt(root, "jobs", 1));
  config.Validate();
  return config;
}

ExperimentConfig ParseConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseConfigText(buf.str());
}

std::string CurveCsv(const std::vector<CurveRow>& rows) {
  std::ostringstream out;
  out << "iteration,wall_time_s,gap,algorithm,seed\r\n";
  char buf[64];
  for (const CurveRow& row : rows) {
    std::snprintf(buf, sizeof(buf), "%.3f", row.wall_time_s);
    out << row.iteration << ',' << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.12g", row.gap);
    out << buf << ',' << row.algorithm << ',' << row.seed << "\r\n";
  }
  return out.str();
}

void WriteFileAtomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + tmp);
    out << content;
  }
  fs::rename(tmp, path);
}

std::string ConfigHash(const json& config) {
  std::string dump = config.dump();
  uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : dump) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

namespace {

struct SolverArtifact {
  json run_json;
  std::vector<CurveRow> rows;
  double final_gap = 0.0;
  int iterations = 0;
  double wall_time_s = 0.0;
};

SolverArtifact ExecuteSolver(const MeanFieldGame& game, const SolverSpec& spec,
                             uint64_t seed) {
  SolverArtifact artifact;
  switch (spec.kind) {
    case SolverSpec::Kind::kPsro: {
      PsroConfig config = spec.psro;
      config.seed = seed;
      PsroResult result = RunPsro(game, config);
      artifact.run_json = ToJson(ToData(result));
      for (const PsroIterationLog& entry : result.log) {
        artifact.rows.push_back({entry.iteration, entry.wall_time_s, entry.gap,
                                 spec.label, seed});
      }
      break;
    }
    case SolverSpec::Kind::kFictitiousPlay:
    case SolverSpec::Kind::kOmd: {
      BaselineRun run =
          spec.kind == SolverSpec::Kind::kFictitiousPlay
              ? FictitiousPlay(game, spec.iterations)
              : OnlineMirrorDescent(game, spec.iterations, spec.learning_rate);
      artifact.run_json = ToJson(run);
      for (const BaselineCurvePoint& p : run.curve) {
        artifact.rows.push_back(
            {p.iteration, p.wall_time_s, p.exploitability, spec.label, seed});
      }
      break;
    }
  }
  if (!artifact.rows.empty()) {
    artifact.final_gap = artifact.rows.back().gap;
    artifact.iterations = artifact.rows.back().iteration;
    artifact.wall_time_s = artifact.rows.back().wall_time_s;
  }
  return artifact;
}

void WriteManifest(const ExperimentConfig& config, const std::string& command,
                   const std::vector<std::string>& artifacts) {
  json manifest{{"schema_version", 1},
                {"command", command},
                {"config_hash", ConfigHash(config.raw)},
                {"config", config.raw},
                {"artifacts", artifacts}};
  WriteFileAtomic((fs::path(config.output_dir) / "manifest.json").string(),
                  manifest.dump(2) + "\n");
}

}  // namespace

void CmdRun(const ExperimentConfig& config) {
  if (config.solvers.empty()) {
    throw ConfigError("run: config defines no solver");
  }
  MeanFieldGame game = LoadGame(config.game);
  fs::create_directories(config.output_dir);

  std::vector<SolverArtifact> artifacts(config.repeats);
  auto worker = [&](int r) {
    artifacts[r] = ExecuteSolver(game, config.solvers[0], config.seed + r);
  };
  if (config.jobs <= 1 || config.repeats == 1) {
    for (int r = 0; r < config.repeats; ++r) worker(r);
  } else {
    for (int base = 0; base < config.repeats; base += config.jobs) {
      std::vector<std::thread> pool;
      for (int r = base; r < std::min(config.repeats, base + config.jobs);
           ++r) {
        pool.emplace_back(worker, r);
      }
      for (std::thread& t : pool) t.join();
    }
  }

  std::vector<std::string> written;
  std::vector<CurveRow> rows;
  for (int r = 0; r < config.repeats; ++r) {
    std::string name =
        config.repeats == 1
            ? "run.json"
            : "run_" + std::to_string(config.seed + r) + ".json";
    WriteFileAtomic((fs::path(config.output_dir) / name).string(),
                    artifacts[r].run_json.dump(2) + "\n");
    written.push_back(name);
    rows.insert(rows.end(), artifacts[r].rows.begin(), artifacts[r].rows.end());
  }
  WriteFileAtomic((fs::path(config.output_dir) / "curve.csv").string(),
                  CurveCsv(rows));
  written.push_back("curve.csv");
  WriteManifest(config, "run", written);
}

void CmdCompare(const ExperimentConfig& config) {
  if (config.solvers.size() < 2) {
    throw ConfigError("compare: config must define at least two solvers");
  }
  MeanFieldGame game = LoadGame(config.game);
  fs::create_directories(config.output_dir);

  std::vector<CurveRow> rows;
  std::ostringstream summary;
  summary << "algorithm,final_gap,iterations,wall_time_s\r\n";
  std::cout << "algorithm        final_gap    iterations  wall_time_s\n";
  for (const SolverSpec& spec : config.solvers) {
    SolverArtifact artifact = ExecuteSolver(game, spec, config.seed);
    rows.insert(rows.end(), artifact.rows.begin(), artifact.rows.end());
    char gap_buf[64], wall_buf[64];
    std::snprintf(gap_buf, sizeof(gap_buf), "%.12g", artifact.final_gap);
    std::snprintf(wall_buf, sizeof(wall_buf), "%.3f", artifact.wall_time_s);
    summary << spec.label << ',' << gap_buf << ',' << artifact.iterations
            << ',' << wall_buf << "\r\n";
    std::printf("%-16s %-12.4g %-11d %.3f\n", spec.label.c_str(),
                artifact.final_gap, artifact.iterations, artifact.wall_time_s);
  }
  WriteFileAtomic((fs::path(config.output_dir) / "curve.csv").string(),
                  CurveCsv(rows));
  WriteFileAtomic((fs::path(config.output_dir) / "summary.csv").string(),
                  summary.str());
  WriteManifest(config, "compare", {"curve.csv", "summary.csv"});
}

void CmdCompressDemo(const ExperimentConfig& config) {
  MeanFieldGame game = LoadGame(config.game);
  fs::create_directories(config.output_dir);

  PolicySet set(game);
  if (config.set_spec.kind == SetSpec::Kind::kAll) {
    for (const DeterministicPolicy& pi : AllDeterministicPolicies(game)) {
      set.Add(pi);
    }
  } else {
    PsroConfig warmup;
    warmup.mode = PsroMode::kCce;
    warmup.max_iterations = config.set_spec.warmup_iterations;
    warmup.t_max = config.loop.t_max;
    warmup.seed = config.seed;
    warmup.payoff_source = config.loop.payoff_source;
    PsroResult result = RunPsroCce(game, warmup);
    for (const DeterministicPolicy& pi : result.set->policies()) set.Add(pi);
  }

  RegretLoopConfig loop = config.loop;
  loop.seed = config.seed;
  loop.record_compression_curve = true;
  RegretLoopResult result = RunRegretLoop(game, set, loop);

  std::ostringstream csv;
  csv << "step,uniform_gap,compressed_gap,sparsity,seed\r\n";
  char buf[64];
  for (const CompressionLogEntry& e : result.compression_log) {
    csv << e.step << ',';
    std::snprintf(buf, sizeof(buf), "%.12g", e.uniform_gap);
    csv << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.12g", e.compressed_gap);
    csv << buf << ',' << e.atoms << ',' << config.seed << "\r\n";
  }
  WriteFileAtomic((fs::path(config.output_dir) / "compress.csv").string(),
                  csv.str());
  json device_json{{"device", ToJson(result.device)},
                   {"achieved_gap", result.achieved_gap},
                   {"steps", result.steps},
                   {"reached_target", result.reached_target}};
  WriteFileAtomic((fs::path(config.output_dir) / "device.json").string(),
                  device_json.dump(2) + "\n");
  WriteManifest(config, "compress-demo", {"compress.csv", "device.json"});
}

}  // namespace mfpsro
