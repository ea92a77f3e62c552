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

#ifndef AQM_ERRORS_HPP_
#define AQM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace aqm {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// An input violated a structural requirement (not Hermitian, not a
/// projector, not orthonormal, out of range, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The observable does not belong to the context it was evaluated or
/// measured in.
class IncompatibleObservable : public Error {
 public:
  using Error::Error;
};

/// An elementary state has no character on a context that the query needs.
class IndeterminateState : public Error {
 public:
  using Error::Error;
};

/// Conditioning on an event of probability zero.
class ImpossibleEvent : public Error {
 public:
  using Error::Error;
};

/// A state handed to a two-slit routine does not satisfy the conditioning
/// identity Psi(p_a + p_b) = 1.
class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

/// The per-event particle sampler cannot reproduce the ensemble pattern
/// (negative conditional mass beyond the clamp tolerance).
class ModelViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace aqm

#endif  // AQM_ERRORS_HPP_
