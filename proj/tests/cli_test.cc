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

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mfpsro/experiment.h"
#include "mfpsro/serialization.h"

namespace mfpsro {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string CliBinary() {
  const char* env = std::getenv("MFPSRO_CLI");
  REQUIRE(env != nullptr);
  return env;
}

fs::path FreshDir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() /
                 ("mfpsro_cli_test_" + tag + "_" +
                  std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void WriteFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  REQUIRE(out.good());
  out << content;
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int RunCli(const std::string& args) {
  std::string cmd = CliBinary() + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

const char kNashConfig[] = R"(# biased RPS, Nash mode
game.name = biased_rps
solver.type = psro
solver.mode = nash
solver.rho_lim = 1e-4
solver.max_iterations = 8
solver.nash.iterations = 120
seed = 7
)";

TEST_CASE("run command writes artifacts and exits zero") {
  fs::path dir = FreshDir("run");
  fs::path cfg = dir / "config.txt";
  WriteFile(cfg, kNashConfig);
  int code = RunCli("run --config " + cfg.string() + " --output " +
                    (dir / "out").string());
  CHECK(code == 0);
  CHECK(fs::exists(dir / "out" / "run.json"));
  CHECK(fs::exists(dir / "out" / "curve.csv"));
  CHECK(fs::exists(dir / "out" / "manifest.json"));

  // Final gap below 1e-3 for this config.
  std::string csv = ReadFile(dir / "out" / "curve.csv");
  std::istringstream lines(csv);
  std::string line, last;
  std::getline(lines, line);  // header
  CHECK(line == "iteration,wall_time_s,gap,algorithm,seed\r");
  while (std::getline(lines, line)) {
    if (!line.empty()) last = line;
  }
  std::istringstream fields(last);
  std::string iteration, wall, gap;
  std::getline(fields, iteration, ',');
  std::getline(fields, wall, ',');
  std::getline(fields, gap, ',');
  CHECK(std::stod(gap) < 1e-3);
  fs::remove_all(dir);
}

TEST_CASE("malformed configs exit with code 2") {
  fs::path dir = FreshDir("bad");
  fs::path cfg = dir / "broken.txt";
  WriteFile(cfg, "game.name biased_rps\n");  // missing '='
  CHECK(RunCli("run --config " + cfg.string()) == 2);
  WriteFile(cfg, "{\"game\": {\"name\": \"biased_rps\"");  // truncated JSON
  CHECK(RunCli("run --config " + cfg.string()) == 2);
  WriteFile(cfg, "game.name = unknown_game\nsolver.type = psro\n");
  CHECK(RunCli("run --config " + cfg.string()) == 2);
  CHECK(RunCli("run --config " + (dir / "missing.txt").string()) == 2);
  fs::remove_all(dir);
}

TEST_CASE("compare requires at least two solvers") {
  fs::path dir = FreshDir("compare");
  fs::path single = dir / "single.txt";
  WriteFile(single, kNashConfig);
  CHECK(RunCli("compare --config " + single.string() + " --output " +
               (dir / "out1").string()) == 2);

  fs::path multi = dir / "multi.txt";
  WriteFile(multi,
            "game.name = biased_rps\n"
            "solvers.0.type = fp\n"
            "solvers.0.iterations = 50\n"
            "solvers.1.type = omd\n"
            "solvers.1.iterations = 50\n"
            "solvers.1.learning_rate = 1.0\n"
            "solvers.2.type = psro\n"
            "solvers.2.mode = nash\n"
            "solvers.2.max_iterations = 6\n");
  CHECK(RunCli("compare --config " + multi.string() + " --output " +
               (dir / "out2").string()) == 0);
  std::string csv = ReadFile(dir / "out2" / "curve.csv");
  CHECK(csv.find("fp") != std::string::npos);
  CHECK(csv.find("omd_1") != std::string::npos);
  CHECK(csv.find("psro_nash") != std::string::npos);
  CHECK(fs::exists(dir / "out2" / "summary.csv"));
  fs::remove_all(dir);
}

TEST_CASE("repeats write one deterministic artifact per seed") {
  fs::path dir = FreshDir("repeats");
  fs::path cfg = dir / "config.txt";
  WriteFile(cfg, std::string(kNashConfig) + "repeats = 3\n");
  CHECK(RunCli("run --config " + cfg.string() + " --output " +
               (dir / "a").string()) == 0);
  CHECK(RunCli("run --config " + cfg.string() + " --output " +
               (dir / "b").string()) == 0);
  for (int seed = 7; seed <= 9; ++seed) {
    fs::path name = "run_" + std::to_string(seed) + ".json";
    CHECK(fs::exists(dir / "a" / name));
    CHECK(ReadFile(dir / "a" / name) == ReadFile(dir / "b" / name));
  }
  fs::remove_all(dir);
}

TEST_CASE("identical seeds reproduce bit-identical run artifacts") {
  fs::path dir = FreshDir("determinism");
  fs::path cfg = dir / "config.txt";
  // CCE mode exercises the regret loop and compression.
  WriteFile(cfg,
            "game.name = coop_betray_punish\n"
            "solver.type = psro\n"
            "solver.mode = cce\n"
            "solver.rho_tol = 5e-2\n"
            "solver.rho_lim = 1e-2\n"
            "solver.t_max = 1200\n"
            "solver.max_iterations = 6\n"
            "seed = 11\n");
  CHECK(RunCli("run --config " + cfg.string() + " --output " +
               (dir / "a").string()) == 0);
  CHECK(RunCli("run --config " + cfg.string() + " --output " +
               (dir / "b").string()) == 0);
  CHECK(ReadFile(dir / "a" / "run.json") == ReadFile(dir / "b" / "run.json"));
  fs::remove_all(dir);
}

TEST_CASE("run.json round-trips through the serialization layer") {
  fs::path dir = FreshDir("roundtrip");
  fs::path cfg = dir / "config.txt";
  WriteFile(cfg, kNashConfig);
  CHECK(RunCli("run --config " + cfg.string() + " --output " +
               (dir / "out").string()) == 0);
  json original = json::parse(ReadFile(dir / "out" / "run.json"));
  PsroRunData data = PsroRunDataFromJson(original);
  CHECK(ToJson(data) == original);
  CHECK(ToJson(data).dump(2) + "\n" == ReadFile(dir / "out" / "run.json"));
  fs::remove_all(dir);
}

TEST_CASE("curve.csv matches the golden schema and values") {
  const char* golden_dir = std::getenv("MFPSRO_GOLDEN_DIR");
  REQUIRE(golden_dir != nullptr);
  fs::path golden_path = fs::path(golden_dir) / "curve_rps_nash.csv";

  fs::path dir = FreshDir("golden");
  fs::path cfg = dir / "config.txt";
  WriteFile(cfg, kNashConfig);
  CHECK(RunCli("run --config " + cfg.string() + " --output " +
               (dir / "out").string()) == 0);
  std::string fresh = ReadFile(dir / "out" / "curve.csv");

  // Wall time is the only nondeterministic column; mask it on both sides.
  auto mask = [](const std::string& csv) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
      if (header) {
        out << line << "\n";
        header = false;
        continue;
      }
      if (line.empty()) continue;
      size_t first = line.find(',');
      size_t second = line.find(',', first + 1);
      out << line.substr(0, first + 1) << "*" << line.substr(second) << "\n";
    }
    return out.str();
  };

  if (std::getenv("MFPSRO_REGEN_GOLDEN") != nullptr) {
    std::ofstream out(golden_path, std::ios::binary);
    out << fresh;
  }
  REQUIRE(fs::exists(golden_path));
  CHECK(mask(fresh) == mask(ReadFile(golden_path)));
  fs::remove_all(dir);
}

TEST_CASE("compress-demo reports dominated uniform gaps at every step") {
  fs::path dir = FreshDir("demo");
  fs::path cfg = dir / "config.txt";
  WriteFile(cfg,
            "game.name = biased_rps\n"
            "set.kind = all\n"
            "loop.t_max = 400\n"
            "loop.tau_compress = 10\n"
            "loop.target = 1e-6\n"
            "seed = 5\n");
  CHECK(RunCli("compress-demo --config " + cfg.string() + " --output " +
               (dir / "out").string()) == 0);
  std::string csv = ReadFile(dir / "out" / "compress.csv");
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "step,uniform_gap,compressed_gap,sparsity,seed\r");
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string step, uniform, compressed, sparsity;
    std::getline(fields, step, ',');
    std::getline(fields, uniform, ',');
    std::getline(fields, compressed, ',');
    std::getline(fields, sparsity, ',');
    CHECK(std::stod(compressed) <= std::stod(uniform) + 1e-9);
    CHECK(std::stoi(sparsity) >= 1);
    ++rows;
  }
  CHECK(rows >= 1);
  CHECK(fs::exists(dir / "out" / "device.json"));
  fs::remove_all(dir);
}

TEST_CASE("JSON configs parse equivalently to the text format") {
  json config = {
      {"game", {{"name", "biased_rps"}}},
      {"solver",
       {{"type", "psro"}, {"mode", "nash"}, {"max_iterations", 4}}},
      {"seed", 3},
  };
  ExperimentConfig from_json = ParseConfigText(config.dump());
  ExperimentConfig from_text = ParseConfigText(
      "game.name = biased_rps\n"
      "solver.type = psro\n"
      "solver.mode = nash\n"
      "solver.max_iterations = 4\n"
      "seed = 3\n");
  CHECK(from_json.game.name == from_text.game.name);
  CHECK(from_json.solvers.size() == from_text.solvers.size());
  CHECK(from_json.solvers[0].psro.max_iterations ==
        from_text.solvers[0].psro.max_iterations);
  CHECK(from_json.seed == from_text.seed);
}

TEST_CASE("regret traces and devices round-trip through JSON") {
  RegretTrace trace;
  MixedPolicy nu;
  nu.weights = {0.25, 0.75};
  trace.Append(nu, {1.0, -0.5}, true);
  nu.weights = {0.6, 0.4};
  trace.Append(nu, {0.2, 0.3}, true);
  json j = ToJson(trace);
  RegretTrace back = TraceFromJson(j);
  CHECK(ToJson(back) == j);

  CorrelationDevice device;
  device.atoms.push_back({0.3, MixedPolicy::Delta(0, 2)});
  device.atoms.push_back({0.7, MixedPolicy::Uniform(2)});
  json dj = ToJson(device);
  CHECK(ToJson(DeviceFromJson(dj)) == dj);
}

TEST_CASE("config errors carry line information in the text format") {
  try {
    ParseConfigText("game.name = biased_rps\noops\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

}  // namespace
}  // namespace mfpsro
