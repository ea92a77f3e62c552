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

#include "aqm/random.hpp"

#include <Eigen/QR>

namespace aqm {

Matrix random_complex(CounterRng& rng, Index n) {
  Matrix m(n, n);
  for (Index c = 0; c < n; ++c) {
    for (Index r = 0; r < n; ++r) {
      const double re = rng.normal();
      m(r, c) = Complex(re, rng.normal());
    }
  }
  return m;
}

Observable random_hermitian(CounterRng& rng, Index n) {
  const Matrix g = random_complex(rng, n);
  return Observable(0.5 * (g + g.adjoint()));
}

Matrix random_unitary(CounterRng& rng, Index n) {
  Eigen::HouseholderQR<Matrix> qr(random_complex(rng, n));
  return qr.householderQ() * Matrix::Identity(n, n);
}

QuantumState random_mixed_state(CounterRng& rng, Index n) {
  const Matrix g = random_complex(rng, n);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return QuantumState(rho);
}

QuantumState random_pure_state(CounterRng& rng, Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) {
    const double re = rng.normal();
    v(i) = Complex(re, rng.normal());
  }
  return QuantumState::pure(v);
}

Observable random_degenerate(CounterRng& rng, const Matrix& u, int distinct) {
  const Index n = u.rows();
  Matrix d = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    d(i, i) = static_cast<double>(rng() % static_cast<unsigned>(distinct));
  }
  return Observable(u * d * u.adjoint());
}

Observable random_element(CounterRng& rng, const Context& q) {
  Matrix m = Matrix::Zero(q.dim(), q.dim());
  for (const Matrix& p : q.projectors()) m += rng.normal() * p;
  return Observable(m);
}

}  // namespace aqm
