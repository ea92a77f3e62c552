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

#include <benchmark/benchmark.h>

#include "aqm/algebra.hpp"
#include "aqm/interferometer.hpp"
#include "aqm/random.hpp"
#include "aqm/rng.hpp"
#include "aqm/two_slit.hpp"

namespace {

void BM_Philox(benchmark::State& state) {
  aqm::CounterRng rng(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(rng());
}
BENCHMARK(BM_Philox);

void BM_SpectralDecompose(benchmark::State& state) {
  aqm::CounterRng rng(2, 0);
  const auto n = static_cast<aqm::Index>(state.range(0));
  const aqm::Observable a = aqm::random_degenerate(rng, aqm::random_unitary(rng, n));
  for (auto _ : state) benchmark::DoNotOptimize(aqm::spectral_decompose(a));
}
BENCHMARK(BM_SpectralDecompose)->Arg(2)->Arg(8)->Arg(64);

void BM_StackedScreens(benchmark::State& state) {
  const auto geom = aqm::two_slit::SlitGeometry::symmetric64();
  const aqm::two_slit::ScreenSampler sampler(aqm::two_slit::uniform_state(geom.sites), geom);
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(aqm::two_slit::stacked_screens(sampler, n, 7));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StackedScreens)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_ParticleRun(benchmark::State& state) {
  aqm::interferometer::DeviceConfig config;
  const aqm::interferometer::DelayedRandom policy(0.5);
  std::uint64_t event = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(aqm::interferometer::particle_run(config, policy, event++, 7));
  }
}
BENCHMARK(BM_ParticleRun);

}  // namespace

BENCHMARK_MAIN();
