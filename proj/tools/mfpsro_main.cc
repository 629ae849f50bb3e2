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

#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mfpsro/experiment.h"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string output_dir;
  long long seed = -1;
  int jobs = 0;
};

void AttachFlags(CLI::App* cmd, CommonFlags* flags) {
  cmd->add_option("--config", flags->config_path, "Experiment config file")
      ->required();
  cmd->add_option("--seed", flags->seed, "Override the config seed");
  cmd->add_option("--jobs", flags->jobs, "Max concurrent repeats");
  cmd->add_option("--output", flags->output_dir, "Override output directory");
}

mfpsro::ExperimentConfig LoadWithOverrides(const CommonFlags& flags) {
  mfpsro::ExperimentConfig config =
      mfpsro::ParseConfigFile(flags.config_path);
  if (flags.seed >= 0) config.seed = static_cast<uint64_t>(flags.seed);
  if (flags.jobs > 0) config.jobs = flags.jobs;
  if (!flags.output_dir.empty()) config.output_dir = flags.output_dir;
  return config;
}

int ReportError(const char* kind, const std::exception& e, int code) {
  nlohmann::json msg{{"error", kind}, {"message", e.what()}};
  std::cerr << msg.dump() << std::endl;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean-field equilibrium experiment harness"};
  app.require_subcommand(1);

  CommonFlags run_flags, compare_flags, demo_flags;
  CLI::App* run = app.add_subcommand("run", "Execute the configured solver");
  AttachFlags(run, &run_flags);
  CLI::App* compare =
      app.add_subcommand("compare", "Run several solvers on one game");
  AttachFlags(compare, &compare_flags);
  CLI::App* demo = app.add_subcommand(
      "compress-demo", "Log uniform vs compressed device gaps per step");
  AttachFlags(demo, &demo_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      mfpsro::CmdRun(LoadWithOverrides(run_flags));
    } else if (compare->parsed()) {
      mfpsro::CmdCompare(LoadWithOverrides(compare_flags));
    } else if (demo->parsed()) {
      mfpsro::CmdCompressDemo(LoadWithOverrides(demo_flags));
    }
  } catch (const mfpsro::ConfigError& e) {
    return ReportError("config", e, 2);
  } catch (const std::exception& e) {
    return ReportError("runtime", e, 1);
  }
  return 0;
}
