// Copyright 2026 The AQM Authors
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
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "config.hpp"
#include "experiments.hpp"

int main(int argc, char** argv) {
  using aqm::cli::Overrides;
  CLI::App app{"Algebraic quantum mechanics experiments"};
  app.set_version_flag("--version", std::string(aqm::cli::kToolVersion));
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "Run an experiment");
  std::string experiment;
  std::optional<std::string> config_path;
  Overrides o;
  run->add_option("experiment", experiment,
                  "two-slit, delayed-choice, postulates or khinchin")
      ->required()
      ->check(CLI::IsMember({"two-slit", "delayed-choice", "postulates", "khinchin"}));
  run->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  run->add_option("--seed", o.seed, "Master seed");
  run->add_option("--n", o.n_events, "Number of events");
  run->add_option("--out", o.out_dir, "Output directory");
  run->add_option("--m4", o.m4, "delayed-choice: present or absent");
  run->add_option("--policy", o.policy, "delayed-choice: choice policy");
  run->add_option("--p", o.p, "delayed-choice: insertion probability");
  run->add_option("--preset", o.preset, "two-slit: geometry preset");
  run->add_option("--dim", o.dim, "postulates: Hilbert space dimension");
  run->add_option("--trials", o.trials, "postulates: random instances");
  run->add_option("--seeds", o.seeds, "khinchin: independent seeds");
  run->add_flag("--no-csv", o.no_csv, "Skip CSV artifacts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return aqm::cli::run_command(experiment, config_path, o, std::cout, std::cerr);
}
