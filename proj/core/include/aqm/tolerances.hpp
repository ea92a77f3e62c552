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

#ifndef AQM_TOLERANCES_HPP_
#define AQM_TOLERANCES_HPP_

namespace aqm {

/// Numerical tolerances used throughout the library. All checks that the
/// theory states as exact identities are carried out against these.
struct Tolerances {
  /// Max-norm of A - A^dagger accepted for an observable.
  double hermitian = 1e-10;
  /// Max-norm of AB - BA below which two observables commute.
  double commute = 1e-10;
  /// Projector identities (P^2 = P, P_i P_j = 0, sum P_i = I).
  double projector = 1e-10;
  /// Eigenvalues closer than spectral_relative * ||A|| are merged.
  double spectral_relative = 1e-8;
  /// Density matrices: trace, Hermiticity and positivity slack.
  double state = 1e-10;
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace aqm

#endif  // AQM_TOLERANCES_HPP_
