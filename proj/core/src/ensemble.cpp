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

#include "aqm/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>

#include "aqm/errors.hpp"
#include "aqm/parallel.hpp"

namespace aqm {
namespace {

constexpr std::size_t kTrialGrain = 1 << 16;
constexpr double kImpossibleMass = 1e-12;

void require_same_dim(Index a, Index b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw DimensionMismatch(os.str());
  }
}

void require_contains(const Context& q, const Observable& a, const char* what) {
  if (!contains(q, a)) {
    throw IncompatibleObservable(std::string(what) +
                                 ": observable is not in context '" + q.id() +
                                 "'");
  }
}

// evaluate() of every branch of `q` on `a`.
std::vector<double> branch_values(const ContextPtr& q, const Observable& a) {
  std::vector<double> values(q->size());
  for (std::size_t i = 0; i < q->size(); ++i) {
    values[i] = evaluate(Character(q, i), a);
  }
  return values;
}

// Counts of each branch over n trials; trial j uses CounterRng(seed, j,
// substream). Deterministic for any thread count.
std::vector<std::uint64_t> branch_counts(const BranchDistribution& dist,
                                         const MeasurementDevice& device,
                                         std::size_t n, std::uint64_t seed,
                                         std::uint32_t substream) {
  const std::size_t m = dist.probs.size();
  std::vector<std::vector<std::uint64_t>> partial(block_count(n, kTrialGrain),
                                                  std::vector<std::uint64_t>(m));
  for_each_block(n, kTrialGrain,
                 [&](std::size_t block, std::size_t begin, std::size_t end) {
                   auto& counts = partial[block];
                   for (std::size_t j = begin; j < end; ++j) {
                     CounterRng rng(seed, j, substream);
                     const std::size_t b = device.choose_branch(dist, rng);
                     if (b >= m) {
                       throw InvalidArgument(
                           "measurement device returned an invalid branch");
                     }
                     ++counts[b];
                   }
                 });
  std::vector<std::uint64_t> total(m);
  for (const auto& counts : partial) {
    for (std::size_t i = 0; i < m; ++i) total[i] += counts[i];
  }
  return total;
}

ValueDistribution merge_values(std::vector<std::pair<double, double>> points,
                               double tol) {
  std::sort(points.begin(), points.end());
  ValueDistribution out;
  for (const auto& [value, prob] : points) {
    if (!out.empty() &&
        std::abs(value - out.back().first) <= tol * std::max(1.0, std::abs(value))) {
      out.back().second += prob;
    } else {
      out.emplace_back(value, prob);
    }
  }
  return out;
}

constexpr double kValueMergeTol = 1e-8;

}  // namespace

// ---------------------------------------------------------------------------
// QuantumState

QuantumState::QuantumState(const Matrix& rho, double tol) {
  if (rho.rows() == 0 || rho.rows() != rho.cols()) {
    throw DimensionMismatch("QuantumState: density matrix must be square");
  }
  if (max_abs(rho - rho.adjoint()) > tol) {
    throw InvalidArgument("QuantumState: density matrix is not Hermitian");
  }
  rho_ = 0.5 * (rho + rho.adjoint());
  if (std::abs(rho_.trace().real() - 1.0) > tol) {
    throw InvalidArgument("QuantumState: trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -tol) {
    throw InvalidArgument("QuantumState: density matrix is not positive");
  }
}

QuantumState QuantumState::pure(const Vector& psi) {
  const double norm = psi.norm();
  if (psi.size() == 0 || norm == 0.0) {
    throw InvalidArgument("QuantumState::pure: zero vector");
  }
  const Vector u = psi / norm;
  return QuantumState(u * u.adjoint());
}

QuantumState QuantumState::maximally_mixed(Index dim) {
  return QuantumState(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

Complex QuantumState::expectation(const Matrix& a) const {
  require_same_dim(dim(), a.rows(), "QuantumState::expectation");
  // tr(rho A) without forming the product.
  return (rho_.transpose().cwiseProduct(a)).sum();
}

double QuantumState::mean(const Observable& a) const {
  return expectation(a.matrix()).real();
}

// ---------------------------------------------------------------------------
// Sampling and measurement

std::size_t BornDevice::choose_branch(const BranchDistribution& born,
                                      CounterRng& rng) const {
  return sample_branch(born, rng);
}

const MeasurementDevice& born_device() {
  static const BornDevice device;
  return device;
}

BranchDistribution born_distribution(const QuantumState& psi,
                                     const Context& q) {
  require_same_dim(psi.dim(), q.dim(), "born_distribution");
  BranchDistribution dist{q.id(), std::vector<double>(q.size())};
  double total = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double p = std::clamp(psi.expectation(q.projector(i)).real(), 0.0, 1.0);
    dist.probs[i] = p;
    total += p;
  }
  for (double& p : dist.probs) p /= total;
  return dist;
}

std::size_t sample_branch(const BranchDistribution& dist, CounterRng& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t last_possible = 0;
  for (std::size_t i = 0; i < dist.probs.size(); ++i) {
    if (dist.probs[i] <= 0.0) continue;
    cumulative += dist.probs[i];
    last_possible = i;
    if (u < cumulative) return i;
  }
  return last_possible;
}

Character sample_character(const QuantumState& psi, const ContextPtr& q,
                           CounterRng& rng) {
  return Character(q, sample_branch(born_distribution(psi, *q), rng));
}

MeasurementOutcome measure(const QuantumState& psi, const Observable& a,
                           const ContextPtr& q, CounterRng& rng,
                           const std::string& label) {
  require_contains(*q, a, "measure");
  Character chi = sample_character(psi, q, rng);
  const double value = evaluate(chi, a);
  const Matrix& p = chi.projector();
  const double mass = psi.expectation(p).real();
  QuantumState post(p * psi.density() * p / mass);
  MeasurementRecord record{label, q->id(), value, rng.stream(), rng.seed()};
  return {value, std::move(post), std::move(record), std::move(chi)};
}

MeanEstimate monte_carlo_mean(const QuantumState& psi, const Observable& a,
                              const ContextPtr& q, std::size_t n,
                              std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("monte_carlo_mean: n must be >= 1");
  require_contains(*q, a, "monte_carlo_mean");
  const std::vector<double> values = branch_values(q, a);
  const std::vector<std::uint64_t> counts =
      branch_counts(born_distribution(psi, *q), born_device(), n, seed, 0);

  double mean = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    mean += static_cast<double>(counts[i]) * values[i];
  }
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - mean;
    ss += static_cast<double>(counts[i]) * d * d;
  }
  const double variance = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
  return {mean, std::sqrt(variance / static_cast<double>(n)), n};
}

std::vector<MeasurementRecord> measurement_series(
    const QuantumState& psi, const Observable& a, const ContextPtr& q,
    std::size_t n, std::uint64_t seed, const std::string& label) {
  require_contains(*q, a, "measurement_series");
  const std::vector<double> values = branch_values(q, a);
  const BranchDistribution dist = born_distribution(psi, *q);
  std::vector<MeasurementRecord> records(n);
  for_each_block(n, kTrialGrain,
                 [&](std::size_t, std::size_t begin, std::size_t end) {
                   for (std::size_t j = begin; j < end; ++j) {
                     CounterRng rng(seed, j);
                     const std::size_t b = sample_branch(dist, rng);
                     records[j] = {label, q->id(), values[b], j, seed};
                   }
                 });
  return records;
}

void write_measurement_csv(std::ostream& out,
                           std::span<const MeasurementRecord> records) {
  out << "trial,seed,context,observable,value\n";
  const auto precision = out.precision(17);
  for (const MeasurementRecord& r : records) {
    out << r.trial << ',' << r.seed << ',' << r.context_id << ','
        << r.observable << ',' << r.value << '\n';
  }
  out.precision(precision);
}

// ---------------------------------------------------------------------------
// Postulate checks

ValueDistribution pushforward(const QuantumState& psi, const Observable& a,
                              const Context& q, double tol) {
  require_contains(q, a, "pushforward");
  const auto shared = std::make_shared<const Context>(q);
  const BranchDistribution dist = born_distribution(psi, q);
  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < q.size(); ++i) {
    points.emplace_back(evaluate(Character(shared, i), a, tol), dist.probs[i]);
  }
  return merge_values(std::move(points), kValueMergeTol);
}

double cdf_distance(const ValueDistribution& a, const ValueDistribution& b) {
  std::vector<std::pair<double, double>> tagged;
  for (const auto& [v, p] : a) tagged.emplace_back(v, p);
  for (const auto& [v, p] : b) tagged.emplace_back(v, -p);
  std::sort(tagged.begin(), tagged.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  double difference = 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < tagged.size(); ++i) {
    difference += tagged[i].second;
    const bool group_ends =
        i + 1 == tagged.size() ||
        tagged[i + 1].first - tagged[i].first >
            kValueMergeTol * std::max(1.0, std::abs(tagged[i].first));
    if (group_ends) worst = std::max(worst, std::abs(difference));
  }
  return worst;
}

double ks_critical_value(std::size_t n, std::size_t m, double alpha) {
  const double c = std::sqrt(-std::log(alpha / 2.0) / 2.0);
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  return c * std::sqrt((nn + mm) / (nn * mm));
}

Postulate5Report check_postulate5(const QuantumState& psi, const Observable& a,
                                  const ContextPtr& q, const ContextPtr& qp,
                                  std::size_t n, std::uint64_t seed,
                                  const MeasurementDevice& device_q,
                                  const MeasurementDevice& device_qp) {
  if (n == 0) throw InvalidArgument("check_postulate5: n must be >= 1");
  require_contains(*q, a, "check_postulate5");
  require_contains(*qp, a, "check_postulate5");

  const double exact =
      cdf_distance(pushforward(psi, a, *q), pushforward(psi, a, *qp));

  auto empirical = [&](const ContextPtr& ctx, const MeasurementDevice& device,
                       std::uint32_t substream) {
    const std::vector<double> values = branch_values(ctx, a);
    const std::vector<std::uint64_t> counts = branch_counts(
        born_distribution(psi, *ctx), device, n, seed, substream);
    std::vector<std::pair<double, double>> points;
    for (std::size_t i = 0; i < values.size(); ++i) {
      points.emplace_back(values[i], static_cast<double>(counts[i]) /
                                         static_cast<double>(n));
    }
    return merge_values(std::move(points), kValueMergeTol);
  };
  const double ks =
      cdf_distance(empirical(q, device_q, 0), empirical(qp, device_qp, 1));
  const double critical = ks_critical_value(n, n, 0.01);
  return {exact, ks, critical, exact <= 1e-10 && ks < critical};
}

double postulate6_residual(const QuantumState& psi, const Observable& a,
                           const Observable& b) {
  require_same_dim(a.dim(), b.dim(), "postulate6_residual");
  return std::abs(psi.mean(a) + psi.mean(b) - psi.mean(a + b));
}

bool check_postulate6(const QuantumState& psi, const Observable& a,
                      const Observable& b, double tol) {
  return postulate6_residual(psi, a, b) <= tol;
}

Postulate6Sampled check_postulate6_sampled(const QuantumState& psi,
                                           const Observable& a,
                                           const Observable& b, std::size_t n,
                                           std::uint64_t seed) {
  const Observable sum = a + b;
  auto estimate = [&](const Observable& x, const char* id, std::uint64_t s) {
    const auto q = std::make_shared<const Context>(masa_from(x, id));
    return monte_carlo_mean(psi, x, q, n, s);
  };
  Postulate6Sampled out{estimate(a, "masa(A)", seed),
                        estimate(b, "masa(B)", seed + 1),
                        estimate(sum, "masa(A+B)", seed + 2), 0.0};
  const double gap = std::abs(out.a.estimate + out.b.estimate - out.sum.estimate);
  const double scale = std::sqrt(out.a.std_error * out.a.std_error +
                                 out.b.std_error * out.b.std_error +
                                 out.sum.std_error * out.sum.std_error);
  if (scale > 0.0) {
    out.z_score = gap / scale;
  } else {
    out.z_score = gap <= 1e-10 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return out;
}

QuantumState condition_on_event(const QuantumState& psi, const Observable& e) {
  require_same_dim(psi.dim(), e.dim(), "condition_on_event");
  const Matrix& em = e.matrix();
  if (max_abs(em * em - em) > kDefaultTolerances.projector) {
    throw InvalidArgument("condition_on_event: event is not a projector");
  }
  const double mass = psi.expectation(em).real();
  if (mass <= kImpossibleMass) {
    throw ImpossibleEvent("condition_on_event: event has probability zero");
  }
  return QuantumState(em * psi.density() * em / mass);
}

}  // namespace aqm
