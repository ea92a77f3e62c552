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

#include "aqm/interferometer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

#include "aqm/errors.hpp"
#include "aqm/parallel.hpp"

namespace aqm::interferometer {
namespace {

using Amplitude = std::complex<double>;

constexpr Amplitude kMirror{0.0, 1.0};
constexpr double kUnitarityTol = 1e-12;
constexpr std::size_t kEventGrain = 1 << 15;
constexpr std::uint32_t kChoiceSubstream = 1;
constexpr std::uint32_t kAnnouncementSubstream = 2;

struct Counts {
  // [m4][detector]
  std::array<std::array<std::uint64_t, 2>, 2> by_config{};
  std::uint64_t locality_violations = 0;
};

SubEnsembleReport summarize(bool m4, const std::array<std::uint64_t, 2>& counts,
                            const DetectorProbabilities& expected) {
  SubEnsembleReport r{m4};
  r.count_da = counts[0];
  r.count_db = counts[1];
  r.events = r.count_da + r.count_db;
  r.expected_da = expected.p_da;
  r.expected_db = expected.p_db;
  if (r.events == 0) return r;
  const double n = static_cast<double>(r.events);
  r.freq_da = static_cast<double>(r.count_da) / n;
  r.freq_db = static_cast<double>(r.count_db) / n;
  r.deviation = std::max(std::abs(r.freq_da - r.expected_da),
                         std::abs(r.freq_db - r.expected_db));
  const double p = std::clamp(r.expected_da, 0.0, 1.0);
  r.tolerance = 4.0 * std::sqrt(p * (1.0 - p) / n);
  // Slack covers rounding in the expected probabilities only.
  r.pass = r.deviation <= r.tolerance + 1e-12;
  return r;
}

}  // namespace

const char* to_string(Path p) { return p == Path::A ? "A" : "B"; }
const char* to_string(Detector d) { return d == Detector::DA ? "D_A" : "D_B"; }

void DeviceConfig::validate() const {
  const double norm = std::norm(t) + std::norm(r);
  const double off_diagonal = std::abs(std::conj(t) * r + std::conj(r) * t);
  if (std::abs(norm - 1.0) > kUnitarityTol || off_diagonal > kUnitarityTol) {
    throw InvalidArgument("DeviceConfig: beam splitter is not unitary");
  }
}

DetectorProbabilities wave_probabilities(const DeviceConfig& config) {
  config.validate();
  // M1: transmitted into A, reflected into B.
  Amplitude a = config.t;
  Amplitude b = config.r;
  // M3 folds A, M2 folds B.
  a *= kMirror * std::polar(1.0, config.phase_a);
  b *= kMirror;
  Amplitude da = a;
  Amplitude db = b;
  if (config.m4_present) {
    da = config.t * a + config.r * b;
    db = config.r * a + config.t * b;
  }
  return {std::norm(da), std::norm(db)};
}

DelayedRandom::DelayedRandom(double p) : p_(p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument("DelayedRandom: probability must lie in [0, 1]");
  }
}

bool DelayedRandom::m4_present(std::uint64_t event, FlightPhase phase,
                               std::uint64_t seed) const {
  if (phase == FlightPhase::BeforeM1) {
    return CounterRng(seed, event, kAnnouncementSubstream).uniform() < 0.5;
  }
  return CounterRng(seed, event, kChoiceSubstream).uniform() < p_;
}

std::string DelayedRandom::name() const {
  return "delayed-random(" + std::to_string(p_) + ")";
}

bool DelayedAlternating::m4_present(std::uint64_t event, FlightPhase phase,
                                    std::uint64_t) const {
  const bool odd = (event % 2) == 1;
  return phase == FlightPhase::AfterM1 ? odd : !odd;
}

std::unique_ptr<ChoicePolicy> make_policy(const std::string& name, double p) {
  if (name == "always-present") return std::make_unique<AlwaysPresent>();
  if (name == "always-absent") return std::make_unique<AlwaysAbsent>();
  if (name == "delayed-random") return std::make_unique<DelayedRandom>(p);
  if (name == "delayed-alternating") {
    return std::make_unique<DelayedAlternating>();
  }
  throw InvalidArgument("unknown choice policy '" + name + "'");
}

Detector KernelDarkFieldModel::detector(Path kernel, bool m4_present,
                                        const DeviceConfig& config,
                                        double u_steer) const {
  if (!m4_present) return kernel == Path::A ? Detector::DA : Detector::DB;
  DeviceConfig closed = config;
  closed.m4_present = true;
  return u_steer < wave_probabilities(closed).p_da ? Detector::DA
                                                   : Detector::DB;
}

const ParticleModel& kernel_dark_field_model() {
  static const KernelDarkFieldModel model;
  return model;
}

PhotonEvent particle_run(const DeviceConfig& config, const ChoicePolicy& policy,
                         std::uint64_t event, std::uint64_t seed,
                         const ParticleModel& model) {
  CounterRng rng(seed, event);
  const double u_path = rng.uniform();
  const double u_steer = rng.uniform();
  const Path path = u_path < std::norm(config.t) ? Path::A : Path::B;
  const bool m4 = policy.m4_present(event, FlightPhase::AfterM1, seed);
  return {event, path, m4, model.detector(path, m4, config, u_steer), seed};
}

std::vector<PhotonEvent> simulate_events(const DeviceConfig& config,
                                         const ChoicePolicy& policy,
                                         std::uint64_t n, std::uint64_t seed,
                                         const ParticleModel& model) {
  config.validate();
  std::vector<PhotonEvent> events(static_cast<std::size_t>(n));
  for_each_block(events.size(), kEventGrain,
                 [&](std::size_t, std::size_t begin, std::size_t end) {
                   for (std::size_t i = begin; i < end; ++i) {
                     events[i] = particle_run(config, policy, i, seed, model);
                   }
                 });
  return events;
}

void write_event_csv(std::ostream& out, std::span<const PhotonEvent> events) {
  out << "event,seed,kernel_path,m4,detector\n";
  for (const PhotonEvent& e : events) {
    out << e.index << ',' << e.seed << ',' << to_string(e.kernel_path) << ','
        << (e.m4_at_arrival ? "present" : "absent") << ','
        << to_string(e.detector) << '\n';
  }
}

EquivalenceReport equivalence_report(const DeviceConfig& config,
                                     const ChoicePolicy& policy,
                                     std::uint64_t n, std::uint64_t seed,
                                     const ParticleModel& model) {
  config.validate();
  const std::size_t total = static_cast<std::size_t>(n);
  std::vector<Counts> partial(block_count(total, kEventGrain));
  for_each_block(total, kEventGrain,
                 [&](std::size_t block, std::size_t begin, std::size_t end) {
                   Counts& c = partial[block];
                   for (std::size_t i = begin; i < end; ++i) {
                     const PhotonEvent e =
                         particle_run(config, policy, i, seed, model);
                     const int det = e.detector == Detector::DA ? 0 : 1;
                     ++c.by_config[e.m4_at_arrival ? 1 : 0][det];
                     if (!e.m4_at_arrival &&
                         (e.kernel_path == Path::A) != (det == 0)) {
                       ++c.locality_violations;
                     }
                   }
                 });
  Counts sum;
  for (const Counts& c : partial) {
    for (int m = 0; m < 2; ++m) {
      for (int d = 0; d < 2; ++d) sum.by_config[m][d] += c.by_config[m][d];
    }
    sum.locality_violations += c.locality_violations;
  }

  DeviceConfig open = config;
  open.m4_present = false;
  DeviceConfig closed = config;
  closed.m4_present = true;

  EquivalenceReport report;
  report.policy = policy.name();
  report.n = n;
  report.absent = summarize(false, sum.by_config[0], wave_probabilities(open));
  report.present = summarize(true, sum.by_config[1], wave_probabilities(closed));
  report.max_deviation =
      std::max(report.absent.deviation, report.present.deviation);
  report.locality_violations = sum.locality_violations;
  report.pass = report.absent.pass && report.present.pass;
  return report;
}

}  // namespace aqm::interferometer
