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

#ifndef AQM_TWO_SLIT_HPP_
#define AQM_TWO_SLIT_HPP_

// Two-slit scattering on an N-site lattice. Positions are the standard
// basis; "momentum directions" are the columns of the unitary DFT. The
// state conditioned on passing the slits is split into the two direct
// terms and the interference cross term, and a per-event sampler localizes
// every event at exactly one slit.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "aqm/algebra.hpp"
#include "aqm/ensemble.hpp"

namespace aqm::two_slit {

struct SlitGeometry {
  std::size_t sites = 0;
  std::vector<std::size_t> slit_a;
  std::vector<std::size_t> slit_b;

  /// Throws InvalidArgument for empty, out-of-range or overlapping slits.
  void validate() const;

  /// N = 64 with point slits at sites 16 and 48.
  static SlitGeometry symmetric64();
};

/// Half-open range [begin, end) of DFT momentum indices.
struct MomentumBin {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct InterferenceDecomposition {
  double direct_a = 0.0;
  double direct_b = 0.0;
  double interference = 0.0;
  double total = 0.0;

  /// |direct_a + direct_b + interference - total|
  double closure_residual() const;
};

struct SlitProjectors {
  Observable a;
  Observable b;

  /// p_a + p_b, the event "the particle passed one of the slits".
  Observable both() const { return a + b; }
};

SlitProjectors slit_projectors(const SlitGeometry& geom);

/// Column k of the unitary DFT: exp(2 pi i j k / N) / sqrt(N).
Vector dft_column(std::size_t k, std::size_t sites);

/// Sum of |f_k><f_k| over the bin.
Observable momentum_projector(const MomentumBin& bin, std::size_t sites);

/// Uniform pure state over all sites, the default source.
QuantumState uniform_state(std::size_t sites);

/// Pure state with equal amplitude on the listed sites.
QuantumState uniform_over(std::span<const std::size_t> sites, std::size_t dim);

/// Conditions the incident state on p_a + p_b.
QuantumState prepare_conditioned(const QuantumState& psi0,
                                 const SlitProjectors& slits);

/// Throws PreconditionViolated unless |Psi(p_a + p_b) - 1| <= 1e-8.
void require_conditioned(const QuantumState& psi, const SlitProjectors& slits);

/// Largest of |Psi(A) - Psi(AE)|, |Psi(A) - Psi(EA)|, |Psi(A) - Psi(EAE)|
/// with E = p_a + p_b.
double support_residual(const QuantumState& psi_ab, const SlitProjectors& slits,
                        const Matrix& a);

/// support_residual() maximized over `trials` random complex Gaussian
/// dynamical variables drawn from CounterRng(seed, trial).
double verify_support_identities(const QuantumState& psi_ab,
                                 const SlitProjectors& slits,
                                 std::size_t trials, std::uint64_t seed);

/// Psi(p_a K p_a), Psi(p_b K p_b), Psi(p_a K p_b + p_b K p_a) and Psi(K).
InterferenceDecomposition decompose_mean(const QuantumState& psi_ab,
                                         const Observable& k,
                                         const SlitProjectors& slits);

/// decompose_mean() for every single-bin momentum projector, computed from
/// the DFT columns directly.
std::vector<InterferenceDecomposition> pattern(const QuantumState& psi_ab,
                                               const SlitProjectors& slits);

/// The totals of a pattern.
std::vector<double> intensities(std::span<const InterferenceDecomposition> p);

/// (max - min) / (max + min) over the intensities.
double fringe_visibility(std::span<const double> intensity);

/// Half the L1 distance between two distributions of equal length.
double total_variation(std::span<const double> p, std::span<const double> q);

enum class Slit { A, B };

const char* to_string(Slit s);

struct ScreenEvent {
  std::uint64_t index;
  Slit slit;
  std::size_t site;
};

/// Per-event particle model: the kernel passes one slit s with probability
/// Psi(p_s) and lands on momentum site k with probability
/// (Psi(p_s K_k p_s) + Psi(p_s K_k p_s' + p_s' K_k p_s) / 2) / Psi(p_s),
/// i.e. each slit carries half of the interference mass. Small negative
/// conditional masses are clamped and renormalized; if the clamped mass of
/// either slit exceeds 1e-6 * N construction throws ModelViolation.
class ScreenSampler {
 public:
  ScreenSampler(const QuantumState& psi0, const SlitGeometry& geom);

  std::size_t sites() const { return sites_; }
  const QuantumState& conditioned() const { return conditioned_; }
  const std::vector<InterferenceDecomposition>& ensemble_pattern() const {
    return pattern_;
  }
  double slit_probability(Slit s) const;
  /// P(k | s) after clamping; empty when the slit has zero probability.
  const std::vector<double>& conditional(Slit s) const;
  /// Negative mass removed by clamping, per slit.
  double clamped_mass(Slit s) const;

  /// Event `index` draws from CounterRng(seed, index).
  ScreenEvent sample(std::uint64_t index, std::uint64_t seed) const;

 private:
  std::size_t sites_;
  QuantumState conditioned_;
  std::vector<InterferenceDecomposition> pattern_;
  double prob_a_ = 0.0;
  std::vector<double> cond_a_;
  std::vector<double> cond_b_;
  double clamped_a_ = 0.0;
  double clamped_b_ = 0.0;
};

struct StackedScreens {
  std::vector<std::uint64_t> histogram;
  std::uint64_t n_a = 0;
  std::uint64_t n_b = 0;
  /// Filled only when requested.
  std::vector<ScreenEvent> events;
};

/// Runs n_events independent single-event experiments and stacks their
/// screens.
StackedScreens stacked_screens(const QuantumState& psi0,
                               const SlitGeometry& geom,
                               std::uint64_t n_events, std::uint64_t seed,
                               bool keep_events = false);

StackedScreens stacked_screens(const ScreenSampler& sampler,
                               std::uint64_t n_events, std::uint64_t seed,
                               bool keep_events = false);

}  // namespace aqm::two_slit

#endif  // AQM_TWO_SLIT_HPP_
