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

#ifndef AQM_TOOLS_EXPERIMENTS_HPP_
#define AQM_TOOLS_EXPERIMENTS_HPP_

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "config.hpp"

namespace aqm::cli {

struct RunResult {
  /// The result document written to result.json.
  Json result;
  bool pass = false;
  /// Additional artifacts keyed by file name.
  std::map<std::string, std::string> files;
};

/// Runs a resolved configuration. Model violations are reported inside the
/// result with pass = false.
RunResult run_experiment(const Json& resolved);

/// Writes result.json and the CSV artifacts into `out_dir`, each file via a
/// temporary name and a rename.
void write_artifacts(const RunResult& run, const std::string& out_dir);

/// Resolves, runs and writes. Returns the process exit code: 0 on success,
/// 1 on a configuration error, 2 when a check fails or the model is
/// violated.
int run_command(const std::string& experiment,
                const std::optional<std::string>& config_path,
                const Overrides& overrides, std::ostream& out,
                std::ostream& err);

}  // namespace aqm::cli

#endif  // AQM_TOOLS_EXPERIMENTS_HPP_
