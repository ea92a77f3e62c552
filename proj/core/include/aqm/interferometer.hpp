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

#ifndef AQM_INTERFEROMETER_HPP_
#define AQM_INTERFEROMETER_HPP_

// Delayed-choice Mach-Zehnder interferometer. The photon enters half-silvered
// mirror M1; the transmitted beam (path A) is folded by mirror M3, the
// reflected beam (path B) by mirror M2. With the removable half-silvered
// mirror M4 absent, path A ends at detector D_A and path B at D_B. With M4
// present both paths meet there: D_A receives A transmitted and B reflected,
// D_B receives A reflected and B transmitted.
//
// Reflection at a full mirror multiplies the amplitude by i; a beam
// splitter has transmission amplitude t and reflection amplitude r
// (default 1/sqrt(2) and i/sqrt(2)).

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "aqm/rng.hpp"

namespace aqm::interferometer {

enum class Path { A, B };
enum class Detector { DA, DB };
enum class FlightPhase { BeforeM1, AfterM1 };

const char* to_string(Path p);
const char* to_string(Detector d);

struct DeviceConfig {
  bool m4_present = false;
  std::complex<double> t{0.5 * std::numbers::sqrt2, 0.0};
  std::complex<double> r{0.0, 0.5 * std::numbers::sqrt2};
  /// Extra phase (radians) on path A. Zero in the physical device.
  double phase_a = 0.0;

  /// Throws InvalidArgument unless [[t, r], [r, t]] is unitary within 1e-12.
  void validate() const;
};

struct DetectorProbabilities {
  double p_da;
  double p_db;
};

/// Propagates a unit amplitude through the network.
DetectorProbabilities wave_probabilities(const DeviceConfig& config);

/// The experimenter's decision whether M4 is in place, as a function of the
/// event and of the moment the decision is issued. Only the decision
/// issued after the photon has passed M1 reaches the apparatus.
class ChoicePolicy {
 public:
  virtual ~ChoicePolicy() = default;
  virtual bool m4_present(std::uint64_t event, FlightPhase phase,
                          std::uint64_t seed) const = 0;
  virtual std::string name() const = 0;
};

class AlwaysPresent final : public ChoicePolicy {
 public:
  bool m4_present(std::uint64_t, FlightPhase, std::uint64_t) const override {
    return true;
  }
  std::string name() const override { return "always-present"; }
};

class AlwaysAbsent final : public ChoicePolicy {
 public:
  bool m4_present(std::uint64_t, FlightPhase, std::uint64_t) const override {
    return false;
  }
  std::string name() const override { return "always-absent"; }
};

/// After M1: present with probability p, from the experimenter's own
/// stream. Before M1 it announces an independent coin flip that is then
/// overridden.
class DelayedRandom final : public ChoicePolicy {
 public:
  explicit DelayedRandom(double p);
  bool m4_present(std::uint64_t event, FlightPhase phase,
                  std::uint64_t seed) const override;
  std::string name() const override;
  double probability() const { return p_; }

 private:
  double p_;
};

/// After M1: present on odd events. Before M1 it announces the opposite.
class DelayedAlternating final : public ChoicePolicy {
 public:
  bool m4_present(std::uint64_t event, FlightPhase phase,
                  std::uint64_t seed) const override;
  std::string name() const override { return "delayed-alternating"; }
};

/// Builds a built-in policy: always-present, always-absent,
/// delayed-random (uses `p`) or delayed-alternating.
std::unique_ptr<ChoicePolicy> make_policy(const std::string& name,
                                          double p = 0.5);

struct PhotonEvent {
  std::uint64_t index;
  Path kernel_path;
  bool m4_at_arrival;
  Detector detector;
  std::uint64_t seed;
};

/// Which detector fires, given the kernel's path, the apparatus at arrival
/// and one uniform draw reserved for the steering step.
class ParticleModel {
 public:
  virtual ~ParticleModel() = default;
  virtual Detector detector(Path kernel, bool m4_present,
                            const DeviceConfig& config,
                            double u_steer) const = 0;
};

/// Kernel plus dark field. Without M4 the kernel's path decides the
/// detector. With M4 the coherent dark field steers the kernel and the
/// detector is drawn from the wave distribution, whatever the path.
class KernelDarkFieldModel final : public ParticleModel {
 public:
  Detector detector(Path kernel, bool m4_present, const DeviceConfig& config,
                    double u_steer) const override;
};

const ParticleModel& kernel_dark_field_model();

/// One photon. Draws from CounterRng(seed, event): first the path choice at
/// M1 (A with probability |t|^2), then the steering uniform. The policy is
/// consulted once, at FlightPhase::AfterM1. `config.m4_present` is ignored.
PhotonEvent particle_run(const DeviceConfig& config, const ChoicePolicy& policy,
                         std::uint64_t event, std::uint64_t seed,
                         const ParticleModel& model = kernel_dark_field_model());

std::vector<PhotonEvent> simulate_events(
    const DeviceConfig& config, const ChoicePolicy& policy, std::uint64_t n,
    std::uint64_t seed,
    const ParticleModel& model = kernel_dark_field_model());

/// CSV with header `event,seed,kernel_path,m4,detector`.
void write_event_csv(std::ostream& out, std::span<const PhotonEvent> events);

struct SubEnsembleReport {
  bool m4_present;
  std::uint64_t events = 0;
  std::uint64_t count_da = 0;
  std::uint64_t count_db = 0;
  double freq_da = 0.0;
  double freq_db = 0.0;
  double expected_da = 0.0;
  double expected_db = 0.0;
  double deviation = 0.0;
  /// 4 sigma binomial half-width at the expected probability.
  double tolerance = 0.0;
  bool pass = true;
};

struct EquivalenceReport {
  std::string policy;
  std::uint64_t n = 0;
  SubEnsembleReport absent{false};
  SubEnsembleReport present{true};
  double max_deviation = 0.0;
  bool pass = true;
  /// M4-absent events whose detector did not follow the kernel's path.
  std::uint64_t locality_violations = 0;
};

/// Compares particle-model detector frequencies with the wave probabilities
/// in the M4-absent and M4-present sub-ensembles.
EquivalenceReport equivalence_report(
    const DeviceConfig& config, const ChoicePolicy& policy, std::uint64_t n,
    std::uint64_t seed,
    const ParticleModel& model = kernel_dark_field_model());

}  // namespace aqm::interferometer

#endif  // AQM_INTERFEROMETER_HPP_
