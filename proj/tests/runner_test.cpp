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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "config.hpp"
#include "experiments.hpp"

namespace {

namespace fs = std::filesystem;
using aqm::cli::ConfigError;
using aqm::cli::Json;
using aqm::cli::Overrides;
using aqm::cli::resolve_config;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("aqm_runner_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli(const std::string& args) {
  const std::string cmd = std::string(AQM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const fs::path& dir, const Json& j) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << j.dump();
  return p;
}

TEST(Config, DefaultsAreFilledIn) {
  const Json two = resolve_config("two-slit", Json(), {});
  EXPECT_EQ(two["preset"], "symmetric64");
  EXPECT_EQ(two["sites"], 64);
  EXPECT_EQ(two["slit_a"], Json::array({16}));
  EXPECT_EQ(two["n_events"], 100000);
  EXPECT_EQ(two["source"], "uniform");

  const Json dc = resolve_config("delayed-choice", Json(), {});
  EXPECT_EQ(dc["policy"], "always-present");
  EXPECT_DOUBLE_EQ(dc["p"].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(dc["splitter"]["r"][1].get<double>(), std::sqrt(0.5));

  const Json post = resolve_config("postulates", Json(), {});
  EXPECT_EQ(post["dim"], 8);
  EXPECT_EQ(post["trials"], 100);

  const Json kh = resolve_config("khinchin", Json(), {});
  EXPECT_EQ(kh["seeds"], 50);
  EXPECT_EQ(kh["observable"].size(), 4u);
}

TEST(Config, UnknownKeysAreRejected) {
  EXPECT_THROW(resolve_config("two-slit", Json{{"sede", 3}}, {}), ConfigError);
  EXPECT_THROW(resolve_config("postulates", Json{{"policy", "always-absent"}}, {}),
               ConfigError);
  Overrides o;
  o.dim = 4;
  EXPECT_THROW(resolve_config("two-slit", Json(), o), ConfigError);
  EXPECT_THROW(resolve_config("delayed-choice",
                              Json{{"splitter", {{"t", {1, 0}}, {"q", {0, 0}}}}}, {}),
               ConfigError);
  EXPECT_THROW(resolve_config("no-such", Json(), {}), ConfigError);
}

TEST(Config, FlagsWin) {
  const Json file{{"seed", 3}, {"n_events", 10}, {"m4", "absent"}};
  Overrides o;
  o.seed = 9;
  o.m4 = "present";
  const Json j = resolve_config("delayed-choice", file, o);
  EXPECT_EQ(j["seed"], 9);
  EXPECT_EQ(j["n_events"], 10);
  EXPECT_EQ(j["policy"], "always-present");
  o.no_csv = true;
  EXPECT_FALSE(resolve_config("delayed-choice", file, o)["write_csv"].get<bool>());
}

TEST(Config, InvalidValuesAreRejected) {
  EXPECT_THROW(resolve_config("delayed-choice", Json{{"p", 1.5}}, {}), ConfigError);
  EXPECT_THROW(resolve_config("delayed-choice",
                              Json{{"m4", "absent"}, {"policy", "always-present"}}, {}),
               ConfigError);
  EXPECT_THROW(resolve_config("delayed-choice",
                              Json{{"splitter", {{"t", {1, 0}}, {"r", {1, 0}}}}}, {}),
               ConfigError);
  EXPECT_THROW(resolve_config("two-slit", Json{{"sites", 8}, {"slit_a", {1, 2}},
                                               {"slit_b", {2, 3}}}, {}),
               ConfigError);
  EXPECT_THROW(resolve_config("two-slit", Json{{"preset", "symmetric64"}, {"sites", 8}}, {}),
               ConfigError);
  EXPECT_THROW(resolve_config("postulates", Json{{"dim", -2}}, {}), ConfigError);
  EXPECT_THROW(resolve_config("postulates", Json{{"trials", "many"}}, {}), ConfigError);
  EXPECT_THROW(resolve_config("khinchin",
                              Json{{"observable", {{0, 0}, {1, 0}, {0, 0}, {0, 0}}}}, {}),
               ConfigError);
  EXPECT_THROW(resolve_config("two-slit", Json{{"experiment", "khinchin"}}, {}),
               ConfigError);
  EXPECT_THROW(resolve_config("two-slit", Json::array({1}), {}), ConfigError);
}

TEST(Config, MatrixRoundTrip) {
  aqm::Matrix m(2, 2);
  m << aqm::Complex(1, 0), aqm::Complex(0, -2), aqm::Complex(0, 2), aqm::Complex(-1, 0);
  EXPECT_EQ(aqm::cli::matrix_from_json(aqm::cli::matrix_to_json(m)), m);
  EXPECT_THROW(aqm::cli::matrix_from_json(Json::array({{1, 0}, {0, 0}, {0, 0}})),
               ConfigError);
}

TEST(Run, TwoSlitIsByteIdenticalAcrossRuns) {
  const fs::path a = scratch("two_slit_a");
  const fs::path b = scratch("two_slit_b");
  const std::string args = "run two-slit --preset symmetric64 --n 100000 --seed 7 --out ";
  ASSERT_EQ(cli(args + a.string()), 0);
  ASSERT_EQ(cli(args + b.string()), 0);
  EXPECT_EQ(slurp(a / "result.json"), slurp(b / "result.json"));
  EXPECT_EQ(slurp(a / "pattern.csv"), slurp(b / "pattern.csv"));

  const Json r = Json::parse(slurp(a / "result.json"));
  EXPECT_TRUE(r["pass"].get<bool>());
  EXPECT_EQ(r["config"]["seed"], 7);
  EXPECT_FALSE(r["config"].contains("out_dir"));
  EXPECT_EQ(r["summary"]["pattern"].size(), 64u);
  EXPECT_EQ(slurp(a / "pattern.csv").substr(0, 13), "k,prob,count\n");
}

TEST(Run, DelayedChoiceMirrorPresent) {
  const fs::path dir = scratch("delayed_present");
  ASSERT_EQ(cli("run delayed-choice --m4 present --n 100000 --seed 7 --out " + dir.string()),
            0);
  const Json r = Json::parse(slurp(dir / "result.json"));
  EXPECT_EQ(r["summary"]["p_DB"].get<double>(), 1.0);
  EXPECT_EQ(r["summary"]["p_DA"].get<double>(), 0.0);
  EXPECT_EQ(r["config"]["policy"], "always-present");
  EXPECT_EQ(slurp(dir / "events.csv").substr(0, 35), "event,seed,kernel_path,m4,detector\n");
}

TEST(Run, DelayedChoiceRandomPolicy) {
  const fs::path dir = scratch("delayed_random");
  ASSERT_EQ(cli("run delayed-choice --policy delayed-random --p 0.3 --n 20000 --no-csv "
                "--seed 3 --out " + dir.string()),
            0);
  const Json r = Json::parse(slurp(dir / "result.json"));
  EXPECT_GT(r["summary"]["sub_ensembles"]["absent"]["events"].get<int>(), 0);
  EXPECT_EQ(r["summary"]["sub_ensembles"]["present"]["freq_db"].get<double>(), 1.0);
  EXPECT_FALSE(fs::exists(dir / "events.csv"));
}

TEST(Run, PostulatesPass) {
  const fs::path dir = scratch("postulates");
  ASSERT_EQ(cli("run postulates --dim 8 --trials 100 --seed 7 --out " + dir.string()), 0);
  const Json r = Json::parse(slurp(dir / "result.json"));
  for (const auto& [name, c] : r["checks"].items()) EXPECT_TRUE(c["pass"].get<bool>()) << name;
}

TEST(Run, KhinchinSmallRun) {
  const fs::path dir = scratch("khinchin");
  const fs::path cfg = write_config(dir, {{"n_small", 1000}, {"n_large", 100000}});
  ASSERT_EQ(cli("run khinchin --seeds 30 --config " + cfg.string() + " --out " +
                dir.string()),
            0);
  const Json r = Json::parse(slurp(dir / "result.json"));
  EXPECT_EQ(r["summary"]["expected_ratio"].get<double>(), 10.0);
  EXPECT_EQ(slurp(dir / "measurements.csv").substr(0, 33), "trial,seed,context,observable,val");
}

TEST(Run, ConfigErrorExitsWithOne) {
  const fs::path dir = scratch("config_error");
  const fs::path cfg = write_config(dir, {{"n_events", 10}, {"colour", "red"}});
  EXPECT_EQ(cli("run two-slit --config " + cfg.string() + " --out " + dir.string()), 1);
  EXPECT_FALSE(fs::exists(dir / "result.json"));
  EXPECT_EQ(cli("run delayed-choice --p 2 --out " + dir.string()), 1);
  EXPECT_EQ(cli("run nonsense"), 1);
}

TEST(Run, FailedCheckExitsWithTwo) {
  // A rare outcome is invisible at small n, so the error does not shrink at
  // the square-root rate between the two sample sizes.
  const fs::path dir = scratch("failed_check");
  const double eps = 1e-4;
  const Json state = Json::array({{std::sqrt(1.0 - eps), 0.0}, {std::sqrt(eps), 0.0}});
  const fs::path cfg = write_config(
      dir, {{"n_small", 100}, {"n_large", 1000000}, {"seeds", 10}, {"state", state}});
  EXPECT_EQ(cli("run khinchin --config " + cfg.string() + " --out " + dir.string()), 2);
  const Json r = Json::parse(slurp(dir / "result.json"));
  EXPECT_FALSE(r["pass"].get<bool>());
  EXPECT_FALSE(r["checks"]["convergence"]["pass"].get<bool>());
}

TEST(Run, ModelViolationExitsWithTwo) {
  const fs::path dir = scratch("model_violation");
  Json amps = Json::array();
  for (int i = 0; i < 16; ++i) {
    const double v = i == 3 ? 0.9 : (i == 11 ? std::sqrt(1.0 - 0.81) : 0.0);
    amps.push_back({v, 0.0});
  }
  const fs::path cfg = write_config(
      dir, {{"preset", "custom"}, {"sites", 16}, {"slit_a", {3}}, {"slit_b", {11}},
            {"amplitudes", amps}, {"n_events", 100}});
  EXPECT_EQ(cli("run two-slit --config " + cfg.string() + " --out " + dir.string()), 2);
  const Json r = Json::parse(slurp(dir / "result.json"));
  EXPECT_EQ(r["error"]["kind"], "model_violation");
  EXPECT_FALSE(r["pass"].get<bool>());
}

TEST(Run, InProcessMatchesResolvedEcho) {
  const Json cfg = resolve_config("two-slit", Json{{"n_events", 2000}, {"seed", 5}}, {});
  const aqm::cli::RunResult run = aqm::cli::run_experiment(cfg);
  EXPECT_TRUE(run.pass);
  EXPECT_EQ(run.result["tool"], "aqm");
  EXPECT_EQ(run.result["config"]["n_events"], 2000);
  EXPECT_EQ(run.result["summary"]["slit_counts"]["a"].get<int>() +
                run.result["summary"]["slit_counts"]["b"].get<int>(),
            2000);
}

}  // namespace
