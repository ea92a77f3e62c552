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

#ifndef AQM_ENSEMBLE_HPP_
#define AQM_ENSEMBLE_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aqm/algebra.hpp"
#include "aqm/rng.hpp"
#include "aqm/tolerances.hpp"

namespace aqm {

/// A quantum state as a density matrix. Its functional is
/// Psi(A) = tr(rho A). Immutable after construction.
class QuantumState {
 public:
  /// Validates Hermiticity, unit trace and positivity within `tol` and
  /// stores the exact Hermitian part.
  explicit QuantumState(const Matrix& rho, double tol = kDefaultTolerances.state);

  /// |psi><psi| for the normalized `psi`. Throws InvalidArgument on a zero
  /// vector.
  static QuantumState pure(const Vector& psi);
  static QuantumState maximally_mixed(Index dim);

  Index dim() const { return rho_.rows(); }
  const Matrix& density() const { return rho_; }

  /// Psi(A) = tr(rho A) for an arbitrary dynamical variable.
  Complex expectation(const Matrix& a) const;
  /// Psi(A) for an observable (real).
  double mean(const Observable& a) const;

 private:
  Matrix rho_;
};

/// Branch probabilities of one context in one state.
struct BranchDistribution {
  std::string context_id;
  std::vector<double> probs;
};

/// One measured value, tagged with the stream that produced it.
struct MeasurementRecord {
  std::string observable;
  std::string context_id;
  double value = 0.0;
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
};

struct MeasurementOutcome {
  double value;
  QuantumState post_state;
  MeasurementRecord record;
  Character character;
};

struct MeanEstimate {
  double estimate;
  double std_error;
  std::size_t n;
};

/// Probability of each value of an observable; support sorted ascending.
using ValueDistribution = std::vector<std::pair<double, double>>;

/// Picks the branch a measuring device reports. The Born device samples
/// the Born distribution by inverse CDF with a single uniform draw.
class MeasurementDevice {
 public:
  virtual ~MeasurementDevice() = default;
  virtual std::size_t choose_branch(const BranchDistribution& born,
                                    CounterRng& rng) const = 0;
};

class BornDevice final : public MeasurementDevice {
 public:
  std::size_t choose_branch(const BranchDistribution& born,
                            CounterRng& rng) const override;
};

const MeasurementDevice& born_device();

/// p_i = tr(rho P_i), clamped to [0, 1] and renormalized.
BranchDistribution born_distribution(const QuantumState& psi,
                                     const Context& q);

/// Inverse-CDF draw from `dist` using one uniform of `rng`.
std::size_t sample_branch(const BranchDistribution& dist, CounterRng& rng);

Character sample_character(const QuantumState& psi, const ContextPtr& q,
                           CounterRng& rng);

/// Samples a character of `q`, evaluates `a` on it and applies the Lueders
/// update P rho P / tr(rho P) for the sampled branch projector P. Throws
/// IncompatibleObservable when `a` is not in `q`.
MeasurementOutcome measure(const QuantumState& psi, const Observable& a,
                           const ContextPtr& q, CounterRng& rng,
                           const std::string& label = "A");

/// Arithmetic mean of n independent measurements of `a` on fresh copies of
/// `psi`; trial j draws from CounterRng(seed, j). std_error is the sample
/// standard deviation over sqrt(n).
MeanEstimate monte_carlo_mean(const QuantumState& psi, const Observable& a,
                              const ContextPtr& q, std::size_t n,
                              std::uint64_t seed);

/// The per-trial records behind monte_carlo_mean(), same streams.
std::vector<MeasurementRecord> measurement_series(
    const QuantumState& psi, const Observable& a, const ContextPtr& q,
    std::size_t n, std::uint64_t seed, const std::string& label = "A");

/// CSV with header `trial,seed,context,observable,value`.
void write_measurement_csv(std::ostream& out,
                           std::span<const MeasurementRecord> records);

/// Distribution of the values of `a` when measured through context `q`.
ValueDistribution pushforward(const QuantumState& psi, const Observable& a,
                              const Context& q,
                              double tol = kDefaultTolerances.commute);

/// sup_x |F_1(x) - F_2(x)| between the CDFs of two value distributions.
double cdf_distance(const ValueDistribution& a, const ValueDistribution& b);

/// Two-sample Kolmogorov-Smirnov critical value at significance alpha.
double ks_critical_value(std::size_t n, std::size_t m, double alpha);

struct Postulate5Report {
  double exact_distance;
  double ks_statistic;
  double ks_critical;
  bool pass;
};

/// Device-independence of the distribution of `a` across two contexts that
/// both contain it. Exact pushforward distributions must agree within 1e-10
/// and the two-sample KS statistic of n draws per context must stay below
/// the alpha = 0.01 critical value. Context `q` draws from substream 0 and
/// `qp` from substream 1 of CounterRng(seed, j).
Postulate5Report check_postulate5(
    const QuantumState& psi, const Observable& a, const ContextPtr& q,
    const ContextPtr& qp, std::size_t n, std::uint64_t seed,
    const MeasurementDevice& device_q = born_device(),
    const MeasurementDevice& device_qp = born_device());

/// |Psi(A) + Psi(B) - Psi(A + B)|.
double postulate6_residual(const QuantumState& psi, const Observable& a,
                           const Observable& b);

/// Linearity of the mean functional; A and B need not commute.
bool check_postulate6(const QuantumState& psi, const Observable& a,
                      const Observable& b, double tol = 1e-10);

struct Postulate6Sampled {
  MeanEstimate a;
  MeanEstimate b;
  MeanEstimate sum;
  /// |mean(A) + mean(B) - mean(A+B)| / combined stderr.
  double z_score;
};

/// Monte Carlo form of the linearity check: A, B and A + B are each
/// measured in a maximal context of their own.
Postulate6Sampled check_postulate6_sampled(const QuantumState& psi,
                                           const Observable& a,
                                           const Observable& b, std::size_t n,
                                           std::uint64_t seed);

/// E rho E / tr(rho E). Throws InvalidArgument when E is not a projector
/// and ImpossibleEvent when tr(rho E) vanishes.
QuantumState condition_on_event(const QuantumState& psi, const Observable& e);

}  // namespace aqm

#endif  // AQM_ENSEMBLE_HPP_
