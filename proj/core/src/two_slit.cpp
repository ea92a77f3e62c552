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

#include "aqm/two_slit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "aqm/errors.hpp"
#include "aqm/parallel.hpp"

namespace aqm::two_slit {
namespace {

constexpr double kConditionedTol = 1e-8;
constexpr double kNeverSampled = 1e-12;
constexpr double kClampPerSite = 1e-6;
constexpr std::size_t kEventGrain = 1 << 15;

Observable site_projector(std::span<const std::size_t> sites, std::size_t dim) {
  Matrix m = Matrix::Zero(Index(dim), Index(dim));
  for (std::size_t s : sites) m(Index(s), Index(s)) = 1.0;
  return Observable(m);
}

// Inverse-CDF draw over a non-negative weight vector summing to one.
std::size_t draw(std::span<const double> probs, double u) {
  double cumulative = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    cumulative += probs[i];
    last = i;
    if (u < cumulative) return i;
  }
  return last;
}

// Clamps negatives to zero and renormalizes; returns the clamped mass.
double clamp_normalize(std::vector<double>& probs, Slit slit) {
  double negative = 0.0;
  double total = 0.0;
  for (double& p : probs) {
    if (p < 0.0) {
      negative -= p;
      p = 0.0;
    }
    total += p;
  }
  const double limit = kClampPerSite * static_cast<double>(probs.size());
  if (negative > limit) {
    throw ModelViolation(
        std::string("stacked screens: conditional distribution of slit ") +
        to_string(slit) + " has negative mass " + std::to_string(negative) +
        " (limit " + std::to_string(limit) +
        "); the equal-split kernel sampler cannot reproduce this pattern");
  }
  for (double& p : probs) p /= total;
  return negative;
}

}  // namespace

void SlitGeometry::validate() const {
  if (sites == 0) throw InvalidArgument("SlitGeometry: zero sites");
  if (slit_a.empty() || slit_b.empty()) {
    throw InvalidArgument("SlitGeometry: both slits must be non-empty");
  }
  std::set<std::size_t> seen;
  for (std::size_t s : slit_a) {
    if (s >= sites) throw InvalidArgument("SlitGeometry: slit a site out of range");
    seen.insert(s);
  }
  for (std::size_t s : slit_b) {
    if (s >= sites) throw InvalidArgument("SlitGeometry: slit b site out of range");
    if (seen.count(s) != 0) {
      throw InvalidArgument("SlitGeometry: slits overlap at site " +
                            std::to_string(s));
    }
  }
}

SlitGeometry SlitGeometry::symmetric64() { return {64, {16}, {48}}; }

double InterferenceDecomposition::closure_residual() const {
  return std::abs(direct_a + direct_b + interference - total);
}

SlitProjectors slit_projectors(const SlitGeometry& geom) {
  geom.validate();
  return {site_projector(geom.slit_a, geom.sites),
          site_projector(geom.slit_b, geom.sites)};
}

Vector dft_column(std::size_t k, std::size_t sites) {
  Vector f(static_cast<Index>(sites));
  const double scale = 1.0 / std::sqrt(static_cast<double>(sites));
  for (std::size_t j = 0; j < sites; ++j) {
    // Reduce j*k mod N first so the phase stays accurate for large N.
    const double phase = 2.0 * std::numbers::pi *
                         static_cast<double>((j * k) % sites) /
                         static_cast<double>(sites);
    f(Index(j)) = std::polar(scale, phase);
  }
  return f;
}

Observable momentum_projector(const MomentumBin& bin, std::size_t sites) {
  if (sites == 0 || bin.begin >= bin.end || bin.end > sites) {
    throw InvalidArgument("momentum_projector: bin [" +
                          std::to_string(bin.begin) + ", " +
                          std::to_string(bin.end) + ") invalid for N = " +
                          std::to_string(sites));
  }
  Matrix k = Matrix::Zero(Index(sites), Index(sites));
  for (std::size_t i = bin.begin; i < bin.end; ++i) {
    const Vector f = dft_column(i, sites);
    k += f * f.adjoint();
  }
  return Observable(k);
}

QuantumState uniform_state(std::size_t sites) {
  return QuantumState::pure(Vector::Ones(Index(sites)));
}

QuantumState uniform_over(std::span<const std::size_t> sites, std::size_t dim) {
  Vector v = Vector::Zero(Index(dim));
  for (std::size_t s : sites) v(Index(s)) = 1.0;
  return QuantumState::pure(v);
}

QuantumState prepare_conditioned(const QuantumState& psi0,
                                 const SlitProjectors& slits) {
  return condition_on_event(psi0, slits.both());
}

void require_conditioned(const QuantumState& psi, const SlitProjectors& slits) {
  if (psi.dim() != slits.a.dim()) {
    throw DimensionMismatch("two-slit: state and slit projectors differ in dimension");
  }
  const double mass = psi.mean(slits.both());
  if (std::abs(mass - 1.0) > kConditionedTol) {
    throw PreconditionViolated("two-slit: state is not conditioned on the "
                               "slits (Psi(p_a + p_b) = " +
                               std::to_string(mass) + ")");
  }
}

double support_residual(const QuantumState& psi_ab, const SlitProjectors& slits,
                        const Matrix& a) {
  const Matrix e = slits.both().matrix();
  const Complex base = psi_ab.expectation(a);
  return std::max({std::abs(base - psi_ab.expectation(a * e)),
                   std::abs(base - psi_ab.expectation(e * a)),
                   std::abs(base - psi_ab.expectation(e * a * e))});
}

double verify_support_identities(const QuantumState& psi_ab,
                                 const SlitProjectors& slits,
                                 std::size_t trials, std::uint64_t seed) {
  require_conditioned(psi_ab, slits);
  const Index n = psi_ab.dim();
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    CounterRng rng(seed, t);
    Matrix a(n, n);
    for (Index c = 0; c < n; ++c) {
      for (Index r = 0; r < n; ++r) {
        const double re = rng.normal();
        a(r, c) = Complex(re, rng.normal());
      }
    }
    worst = std::max(worst, support_residual(psi_ab, slits, a));
  }
  return worst;
}

InterferenceDecomposition decompose_mean(const QuantumState& psi_ab,
                                         const Observable& k,
                                         const SlitProjectors& slits) {
  if (k.dim() != psi_ab.dim()) {
    throw DimensionMismatch("decompose_mean: K and state differ in dimension");
  }
  require_conditioned(psi_ab, slits);
  const Matrix& pa = slits.a.matrix();
  const Matrix& pb = slits.b.matrix();
  const Matrix& km = k.matrix();
  return {psi_ab.expectation(pa * km * pa).real(),
          psi_ab.expectation(pb * km * pb).real(),
          psi_ab.expectation(pa * km * pb + pb * km * pa).real(),
          psi_ab.mean(k)};
}

std::vector<InterferenceDecomposition> pattern(const QuantumState& psi_ab,
                                               const SlitProjectors& slits) {
  require_conditioned(psi_ab, slits);
  const Matrix& rho = psi_ab.density();
  const Matrix& pa = slits.a.matrix();
  const Matrix& pb = slits.b.matrix();
  // tr(rho p K p') = <f| p' rho p |f> for K = |f><f|.
  const Matrix aa = pa * rho * pa;
  const Matrix bb = pb * rho * pb;
  const Matrix cross = pb * rho * pa + pa * rho * pb;
  const std::size_t sites = std::size_t(psi_ab.dim());

  std::vector<InterferenceDecomposition> out(sites);
  for (std::size_t k = 0; k < sites; ++k) {
    const Vector f = dft_column(k, sites);
    out[k] = {f.dot(aa * f).real(), f.dot(bb * f).real(),
              f.dot(cross * f).real(), f.dot(rho * f).real()};
  }
  return out;
}

std::vector<double> intensities(std::span<const InterferenceDecomposition> p) {
  std::vector<double> out;
  out.reserve(p.size());
  for (const auto& d : p) out.push_back(d.total);
  return out;
}

double fringe_visibility(std::span<const double> intensity) {
  const auto [lo, hi] = std::minmax_element(intensity.begin(), intensity.end());
  return (*hi - *lo) / (*hi + *lo);
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw DimensionMismatch("total_variation: length mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return 0.5 * sum;
}

const char* to_string(Slit s) { return s == Slit::A ? "a" : "b"; }

// ---------------------------------------------------------------------------
// ScreenSampler

ScreenSampler::ScreenSampler(const QuantumState& psi0, const SlitGeometry& geom)
    : sites_(geom.sites),
      conditioned_(prepare_conditioned(psi0, slit_projectors(geom))) {
  const SlitProjectors slits = slit_projectors(geom);
  pattern_ = pattern(conditioned_, slits);
  prob_a_ = std::clamp(conditioned_.mean(slits.a), 0.0, 1.0);

  auto build = [&](Slit s, double prob, std::vector<double>& cond,
                   double& clamped) {
    if (prob <= kNeverSampled) return;
    cond.resize(sites_);
    for (std::size_t k = 0; k < sites_; ++k) {
      const auto& d = pattern_[k];
      const double direct = s == Slit::A ? d.direct_a : d.direct_b;
      cond[k] = (direct + 0.5 * d.interference) / prob;
    }
    clamped = clamp_normalize(cond, s);
  };
  build(Slit::A, prob_a_, cond_a_, clamped_a_);
  build(Slit::B, 1.0 - prob_a_, cond_b_, clamped_b_);
}

double ScreenSampler::slit_probability(Slit s) const {
  return s == Slit::A ? prob_a_ : 1.0 - prob_a_;
}

const std::vector<double>& ScreenSampler::conditional(Slit s) const {
  return s == Slit::A ? cond_a_ : cond_b_;
}

double ScreenSampler::clamped_mass(Slit s) const {
  return s == Slit::A ? clamped_a_ : clamped_b_;
}

ScreenEvent ScreenSampler::sample(std::uint64_t index,
                                  std::uint64_t seed) const {
  CounterRng rng(seed, index);
  const double u_slit = rng.uniform();
  const double u_site = rng.uniform();
  Slit slit = u_slit < prob_a_ ? Slit::A : Slit::B;
  if (conditional(slit).empty()) slit = slit == Slit::A ? Slit::B : Slit::A;
  return {index, slit, draw(conditional(slit), u_site)};
}

StackedScreens stacked_screens(const QuantumState& psi0,
                               const SlitGeometry& geom,
                               std::uint64_t n_events, std::uint64_t seed,
                               bool keep_events) {
  return stacked_screens(ScreenSampler(psi0, geom), n_events, seed,
                         keep_events);
}

StackedScreens stacked_screens(const ScreenSampler& sampler,
                               std::uint64_t n_events, std::uint64_t seed,
                               bool keep_events) {
  if (n_events == 0) {
    throw InvalidArgument("stacked_screens: n_events must be >= 1");
  }
  const std::size_t n = static_cast<std::size_t>(n_events);
  const std::size_t blocks = block_count(n, kEventGrain);
  std::vector<StackedScreens> partial(blocks);
  StackedScreens out;
  if (keep_events) out.events.resize(n);

  for_each_block(n, kEventGrain,
                 [&](std::size_t block, std::size_t begin, std::size_t end) {
                   StackedScreens& part = partial[block];
                   part.histogram.assign(sampler.sites(), 0);
                   for (std::size_t i = begin; i < end; ++i) {
                     const ScreenEvent e = sampler.sample(i, seed);
                     ++part.histogram[e.site];
                     ++(e.slit == Slit::A ? part.n_a : part.n_b);
                     if (keep_events) out.events[i] = e;
                   }
                 });

  out.histogram.assign(sampler.sites(), 0);
  for (const StackedScreens& part : partial) {
    for (std::size_t k = 0; k < sampler.sites(); ++k) {
      out.histogram[k] += part.histogram[k];
    }
    out.n_a += part.n_a;
    out.n_b += part.n_b;
  }
  return out;
}

}  // namespace aqm::two_slit
