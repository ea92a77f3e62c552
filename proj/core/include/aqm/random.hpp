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

#ifndef AQM_RANDOM_HPP_
#define AQM_RANDOM_HPP_

// Random instances for property checks. Everything is driven by CounterRng
// so any instance reproduces from (seed, stream).

#include "aqm/algebra.hpp"
#include "aqm/ensemble.hpp"
#include "aqm/rng.hpp"

namespace aqm {

/// Matrix of independent standard complex Gaussian entries.
Matrix random_complex(CounterRng& rng, Index n);

Observable random_hermitian(CounterRng& rng, Index n);

/// Unitary Q factor of a complex Gaussian matrix.
Matrix random_unitary(CounterRng& rng, Index n);

/// G G^dagger / tr(G G^dagger) for complex Gaussian G (full rank a.s.).
QuantumState random_mixed_state(CounterRng& rng, Index n);

QuantumState random_pure_state(CounterRng& rng, Index n);

/// U diag(d) U^dagger with d drawn from {0, .., distinct - 1}, so that
/// eigenvalues repeat.
Observable random_degenerate(CounterRng& rng, const Matrix& u,
                             int distinct = 3);

/// sum_i c_i P_i over the projectors of q, c_i standard normal.
Observable random_element(CounterRng& rng, const Context& q);

}  // namespace aqm

#endif  // AQM_RANDOM_HPP_
