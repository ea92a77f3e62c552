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

#ifndef AQM_TOOLS_CONFIG_HPP_
#define AQM_TOOLS_CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "aqm/algebra.hpp"
#include "json.hpp"

namespace aqm::cli {

using Json = nlohmann::json;

inline constexpr const char* kToolName = "aqm";
inline constexpr const char* kToolVersion = "0.1.0";

/// Malformed or inconsistent run configuration (exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Command-line values that override keys of the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> n_events;
  std::optional<std::string> out_dir;
  std::optional<std::string> m4;
  std::optional<std::string> policy;
  std::optional<double> p;
  std::optional<std::string> preset;
  std::optional<std::int64_t> dim;
  std::optional<std::int64_t> trials;
  std::optional<std::int64_t> seeds;
  bool no_csv = false;
};

bool is_experiment(const std::string& name);

/// Applies overrides to the file config, rejects unknown keys, fills
/// defaults and validates every value. The result is the complete
/// resolved configuration.
Json resolve_config(const std::string& experiment, const Json& file,
                    const Overrides& overrides);

/// Reads a JSON config file; throws ConfigError on I/O or parse errors.
Json load_config_file(const std::string& path);

/// Matrices are row-major lists of [re, im] pairs.
Matrix matrix_from_json(const Json& j);
Json matrix_to_json(const Matrix& m);
/// Vectors are lists of [re, im] pairs.
Vector vector_from_json(const Json& j);

}  // namespace aqm::cli

#endif  // AQM_TOOLS_CONFIG_HPP_
