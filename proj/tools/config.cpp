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

#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "aqm/errors.hpp"
#include "aqm/interferometer.hpp"
#include "aqm/two_slit.hpp"

namespace aqm::cli {
namespace {

const std::set<std::string> kCommonKeys = {"experiment", "seed", "out_dir",
                                           "write_csv"};

const std::map<std::string, std::set<std::string>> kExperimentKeys = {
    {"two-slit",
     {"n_events", "preset", "sites", "slit_a", "slit_b", "source",
      "amplitudes"}},
    {"delayed-choice", {"n_events", "m4", "policy", "p", "splitter", "phase_a"}},
    {"postulates", {"dim", "trials", "luders_trials", "ks_samples"}},
    {"khinchin", {"seeds", "n_small", "n_large", "state", "observable"}},
};

[[noreturn]] void fail(const std::string& message) { throw ConfigError(message); }

std::uint64_t get_uint(const Json& j, const char* key, std::uint64_t fallback,
                       std::uint64_t min = 0,
                       std::uint64_t max = UINT64_MAX) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                 v.get<std::int64_t>() < 0)) {
    fail(std::string("'") + key + "' must be a non-negative integer");
  }
  const auto x = v.get<std::uint64_t>();
  if (x < min || x > max) {
    fail(std::string("'") + key + "' must lie in [" + std::to_string(min) +
         ", " + std::to_string(max) + "]");
  }
  return x;
}

double get_double(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number()) fail(std::string("'") + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(std::string("'") + key + "' must be finite");
  return x;
}

bool get_bool(const Json& j, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) fail(std::string("'") + key + "' must be a boolean");
  return j.at(key).get<bool>();
}

std::string get_choice(const Json& j, const char* key, const std::string& fallback,
                       const std::set<std::string>& allowed) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) fail(std::string("'") + key + "' must be a string");
  const auto s = j.at(key).get<std::string>();
  if (allowed.count(s) == 0) {
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    fail(std::string("'") + key + "' must be one of: " + list + " (got '" + s + "')");
  }
  return s;
}

std::vector<std::size_t> get_sites(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    fail(std::string("'") + key + "' must be an array of site indices");
  }
  std::vector<std::size_t> out;
  for (const Json& v : j.at(key)) {
    if (!v.is_number_unsigned()) {
      fail(std::string("'") + key + "' entries must be non-negative integers");
    }
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail("complex numbers are written as [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json complex_to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Json resolve_two_slit(const Json& j, Json out) {
  const bool has_geometry =
      j.contains("sites") || j.contains("slit_a") || j.contains("slit_b");
  const std::string preset = get_choice(
      j, "preset", has_geometry ? "custom" : "symmetric64", {"symmetric64", "custom"});
  two_slit::SlitGeometry geom;
  if (preset == "symmetric64") {
    if (has_geometry) fail("preset 'symmetric64' fixes the geometry; use preset 'custom'");
    geom = two_slit::SlitGeometry::symmetric64();
  } else {
    geom.sites = get_uint(j, "sites", 0, 1, 4096);
    if (!j.contains("sites")) fail("preset 'custom' requires 'sites'");
    geom.slit_a = get_sites(j, "slit_a");
    geom.slit_b = get_sites(j, "slit_b");
  }
  try {
    geom.validate();
  } catch (const aqm::Error& e) {
    fail(e.what());
  }

  const std::string source = get_choice(
      j, "source", j.contains("amplitudes") ? "amplitudes" : "uniform",
      {"uniform", "amplitudes"});
  out["n_events"] = get_uint(j, "n_events", 100000, 1);
  out["preset"] = preset;
  out["sites"] = geom.sites;
  out["slit_a"] = geom.slit_a;
  out["slit_b"] = geom.slit_b;
  out["source"] = source;
  if (source == "amplitudes") {
    if (!j.contains("amplitudes")) fail("source 'amplitudes' requires 'amplitudes'");
    const Vector v = vector_from_json(j.at("amplitudes"));
    if (std::size_t(v.size()) != geom.sites) {
      fail("'amplitudes' must have one entry per site");
    }
    double on_slits = 0.0;
    for (std::size_t s : geom.slit_a) on_slits += std::norm(v(Index(s)));
    for (std::size_t s : geom.slit_b) on_slits += std::norm(v(Index(s)));
    if (on_slits == 0.0) fail("incident state has no amplitude on either slit");
    out["amplitudes"] = j.at("amplitudes");
  } else if (j.contains("amplitudes")) {
    fail("'amplitudes' given with source 'uniform'");
  }
  return out;
}

Json resolve_delayed_choice(const Json& j, Json out) {
  const std::set<std::string> policies = {"always-present", "always-absent",
                                          "delayed-random", "delayed-alternating"};
  std::string policy = get_choice(j, "policy", "", policies);
  if (j.contains("m4")) {
    const std::string m4 = get_choice(j, "m4", "", {"present", "absent"});
    const std::string implied = m4 == "present" ? "always-present" : "always-absent";
    if (!policy.empty() && policy != implied) {
      fail("'m4' = '" + m4 + "' conflicts with policy '" + policy + "'");
    }
    policy = implied;
  }
  if (policy.empty()) policy = "always-present";

  const double p = get_double(j, "p", 0.5);
  if (p < 0.0 || p > 1.0) fail("'p' must lie in [0, 1]");

  interferometer::DeviceConfig device;
  if (j.contains("splitter")) {
    const Json& s = j.at("splitter");
    if (!s.is_object()) fail("'splitter' must be an object with keys t and r");
    for (const auto& [key, value] : s.items()) {
      if (key != "t" && key != "r") fail("unknown key 'splitter." + key + "'");
    }
    if (s.contains("t")) device.t = complex_from_json(s.at("t"));
    if (s.contains("r")) device.r = complex_from_json(s.at("r"));
  }
  device.phase_a = get_double(j, "phase_a", 0.0);
  try {
    device.validate();
  } catch (const aqm::Error& e) {
    fail(e.what());
  }

  out["n_events"] = get_uint(j, "n_events", 100000, 1);
  out["policy"] = policy;
  out["p"] = p;
  out["splitter"] = {{"t", complex_to_json(device.t)}, {"r", complex_to_json(device.r)}};
  out["phase_a"] = device.phase_a;
  return out;
}

Json resolve_postulates(const Json& j, Json out) {
  out["dim"] = get_uint(j, "dim", 8, 1, 64);
  out["trials"] = get_uint(j, "trials", 100, 1);
  out["luders_trials"] = get_uint(j, "luders_trials", 10000, 1);
  out["ks_samples"] = get_uint(j, "ks_samples", 2000, 10);
  return out;
}

Json resolve_khinchin(const Json& j, Json out) {
  out["seeds"] = get_uint(j, "seeds", 50, 2);
  out["n_small"] = get_uint(j, "n_small", 10000, 1);
  out["n_large"] = get_uint(j, "n_large", 1000000, 1);

  const double s = std::sqrt(0.5);
  const Vector state = j.contains("state")
                           ? vector_from_json(j.at("state"))
                           : Vector::Constant(2, Complex(s, 0.0));
  if (state.norm() == 0.0) fail("'state' must be a non-zero vector");
  Matrix observable = pauli::z().matrix();
  if (j.contains("observable")) observable = matrix_from_json(j.at("observable"));
  if (observable.rows() != state.size()) {
    fail("'observable' and 'state' dimensions differ");
  }
  try {
    Observable check(observable);
  } catch (const aqm::Error& e) {
    fail(std::string("'observable': ") + e.what());
  }
  Json amps = Json::array();
  for (Index i = 0; i < state.size(); ++i) amps.push_back(complex_to_json(state(i)));
  out["state"] = amps;
  out["observable"] = matrix_to_json(observable);
  return out;
}

}  // namespace

bool is_experiment(const std::string& name) {
  return kExperimentKeys.count(name) != 0;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) fail("matrices are non-empty lists of [re, im] pairs");
  const auto n = static_cast<Index>(std::llround(std::sqrt(double(j.size()))));
  if (std::size_t(n * n) != j.size()) {
    fail("matrix must have a square number of entries (row-major)");
  }
  Matrix m(n, n);
  for (Index r = 0; r < n; ++r) {
    for (Index c = 0; c < n; ++c) m(r, c) = complex_from_json(j[std::size_t(r * n + c)]);
  }
  return m;
}

Json matrix_to_json(const Matrix& m) {
  Json out = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) out.push_back(complex_to_json(m(r, c)));
  }
  return out;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) fail("vectors are non-empty lists of [re, im] pairs");
  Vector v(Index(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(Index(i)) = complex_from_json(j[i]);
  return v;
}

Json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

Json resolve_config(const std::string& experiment, const Json& file,
                    const Overrides& overrides) {
  if (!is_experiment(experiment)) fail("unknown experiment '" + experiment + "'");
  if (!file.is_null() && !file.is_object()) fail("config must be a JSON object");
  Json j = file.is_null() ? Json::object() : file;
  if (j.contains("experiment") && j.at("experiment") != experiment) {
    fail("config is for experiment " + j.at("experiment").dump() + ", not '" +
         experiment + "'");
  }

  if (overrides.seed) j["seed"] = *overrides.seed;
  if (overrides.n_events) j["n_events"] = *overrides.n_events;
  if (overrides.out_dir) j["out_dir"] = *overrides.out_dir;
  if (overrides.m4) j["m4"] = *overrides.m4;
  if (overrides.policy) j["policy"] = *overrides.policy;
  if (overrides.p) j["p"] = *overrides.p;
  if (overrides.preset) j["preset"] = *overrides.preset;
  if (overrides.dim) j["dim"] = *overrides.dim;
  if (overrides.trials) j["trials"] = *overrides.trials;
  if (overrides.seeds) j["seeds"] = *overrides.seeds;
  if (overrides.no_csv) j["write_csv"] = false;

  const auto& allowed = kExperimentKeys.at(experiment);
  for (const auto& [key, value] : j.items()) {
    if (kCommonKeys.count(key) == 0 && allowed.count(key) == 0) {
      fail("unknown key '" + key + "' for experiment '" + experiment + "'");
    }
  }

  Json out = Json::object();
  out["experiment"] = experiment;
  out["seed"] = get_uint(j, "seed", 1);
  out["write_csv"] = get_bool(j, "write_csv", true);
  if (j.contains("out_dir")) {
    if (!j.at("out_dir").is_string()) fail("'out_dir' must be a string");
    out["out_dir"] = j.at("out_dir");
  } else {
    out["out_dir"] = ".";
  }

  try {
    if (experiment == "two-slit") return resolve_two_slit(j, std::move(out));
    if (experiment == "delayed-choice") return resolve_delayed_choice(j, std::move(out));
    if (experiment == "postulates") return resolve_postulates(j, std::move(out));
    return resolve_khinchin(j, std::move(out));
  } catch (const Json::exception& e) {
    fail(std::string("invalid config value: ") + e.what());
  }
}

}  // namespace aqm::cli
