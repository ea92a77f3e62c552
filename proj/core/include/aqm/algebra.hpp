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

#ifndef AQM_ALGEBRA_HPP_
#define AQM_ALGEBRA_HPP_

// Finite-dimensional model of the algebra of dynamical variables: the full
// matrix algebra M_n(C), its Hermitian elements (observables), complete
// orthogonal projector families (contexts, i.e. commutative subalgebras
// generated by their projectors) and the characters on them.

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aqm/tolerances.hpp"

namespace aqm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Largest absolute entry, ||M||_max.
double max_abs(const Matrix& m);

/// A dynamical variable: an arbitrary square complex matrix.
class DynamicalVariable {
 public:
  explicit DynamicalVariable(Matrix entries);

  static DynamicalVariable identity(Index dim);

  Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }

  DynamicalVariable adjoint() const;

  friend DynamicalVariable operator+(const DynamicalVariable& a,
                                     const DynamicalVariable& b);
  friend DynamicalVariable operator-(const DynamicalVariable& a,
                                     const DynamicalVariable& b);
  friend DynamicalVariable operator*(const DynamicalVariable& a,
                                     const DynamicalVariable& b);
  friend DynamicalVariable operator*(Complex s, const DynamicalVariable& a);

 private:
  Matrix entries_;
};

/// Hermitian dynamical variable. Construction checks Hermiticity within
/// `hermitian_tol` and stores the exact Hermitian part.
class Observable {
 public:
  explicit Observable(const Matrix& entries,
                      double hermitian_tol = kDefaultTolerances.hermitian);
  explicit Observable(const DynamicalVariable& variable,
                      double hermitian_tol = kDefaultTolerances.hermitian);

  static Observable identity(Index dim);
  static Observable diagonal(std::span<const double> values);
  static Observable diagonal(std::initializer_list<double> values);

  Index dim() const { return value_.rows(); }
  const Matrix& matrix() const { return value_; }
  DynamicalVariable variable() const { return DynamicalVariable(value_); }

  friend Observable operator+(const Observable& a, const Observable& b);
  friend Observable operator-(const Observable& a, const Observable& b);
  friend Observable operator*(double s, const Observable& a);

 private:
  Matrix value_;
};

namespace pauli {
Observable x();
Observable y();
Observable z();
}  // namespace pauli

/// A complete family of mutually orthogonal Hermitian projectors
/// P_1..P_m with sum I. Operationally: one type of measuring device. The
/// family is maximal (a maximal commutative subalgebra) when every
/// projector has rank one.
class Context {
 public:
  Context(std::string id, std::vector<Matrix> projectors,
          double tol = kDefaultTolerances.projector);

  /// Rank-one projectors onto the columns of an orthonormal basis.
  static Context from_basis(std::string id, const Matrix& basis,
                            double tol = kDefaultTolerances.projector);

  /// Rank-one projectors onto the standard basis vectors, in index order.
  static Context standard(std::string id, Index dim);

  const std::string& id() const { return id_; }
  Index dim() const { return projectors_.front().rows(); }
  std::size_t size() const { return projectors_.size(); }
  const Matrix& projector(std::size_t i) const { return projectors_.at(i); }
  std::span<const Matrix> projectors() const { return projectors_; }
  std::size_t rank(std::size_t i) const;
  bool is_maximal() const;

 private:
  std::string id_;
  std::vector<Matrix> projectors_;
};

using ContextPtr = std::shared_ptr<const Context>;

/// Character on one context: the homomorphism that sends every element of
/// the context to its eigenvalue on the selected branch projector.
class Character {
 public:
  Character(ContextPtr context, std::size_t branch);

  const std::string& context_id() const { return context_->id(); }
  const Context& context() const { return *context_; }
  const ContextPtr& context_ptr() const { return context_; }
  std::size_t branch() const { return branch_; }
  const Matrix& projector() const { return context_->projector(branch_); }

 private:
  ContextPtr context_;
  std::size_t branch_;
};

/// A finite registered family of contexts sharing one dimension.
class ContextFamily {
 public:
  ContextFamily() = default;
  explicit ContextFamily(std::vector<Context> contexts);
  explicit ContextFamily(std::vector<ContextPtr> contexts);

  std::size_t size() const { return contexts_.size(); }
  Index dim() const { return dim_; }

  /// nullptr when the id is not registered.
  ContextPtr find(const std::string& id) const;
  const std::map<std::string, ContextPtr>& contexts() const {
    return contexts_;
  }

  /// Contexts containing `a` (see contains()), in id order.
  std::vector<ContextPtr> containing(
      const Observable& a, double tol = kDefaultTolerances.commute) const;

 private:
  void insert(ContextPtr context);

  std::map<std::string, ContextPtr> contexts_;
  Index dim_ = 0;
};

/// Per-context character assignment. Characters may be added lazily, one
/// context at a time, as measurements are made.
class ElementaryState {
 public:
  ElementaryState() = default;

  /// Replaces any character already stored for the same context.
  void assign(Character chi);

  /// nullptr when no character has been assigned on that context.
  const Character* find(const std::string& context_id) const;
  std::size_t size() const { return assignment_.size(); }

 private:
  std::map<std::string, Character> assignment_;
};

struct SpectralComponent {
  double eigenvalue;
  Matrix projector;
};

/// True iff ||AB - BA||_max <= tol.
bool commutes(const Observable& a, const Observable& b,
              double tol = kDefaultTolerances.commute);

/// Eigen-decomposition A = sum_k lambda_k P_k with eigenvalues closer than
/// relative_tol * ||A|| merged into one eigenspace. Components are ordered
/// by decreasing eigenvalue.
std::vector<SpectralComponent> spectral_decompose(
    const Observable& a,
    double relative_tol = kDefaultTolerances.spectral_relative);

/// Maximal context containing `a`: its eigenprojectors, with each
/// degenerate eigenspace split into rank-one projectors by Gram-Schmidt on
/// `refinement` (an orthonormal basis given as columns) projected into the
/// eigenspace. Default refinement is the standard basis.
Context masa_from(const Observable& a, std::string id,
                  const std::optional<Matrix>& refinement = std::nullopt,
                  const Tolerances& tol = kDefaultTolerances);

/// Maximal context containing every observable in `generators`, obtained
/// by successive joint diagonalization. Throws IncompatibleObservable when
/// two generators do not commute.
Context masa_from_commuting(
    std::span<const Observable> generators, std::string id,
    const std::optional<Matrix>& refinement = std::nullopt,
    const Tolerances& tol = kDefaultTolerances);

Context masa_from_pair(const Observable& a, const Observable& b,
                       std::string id,
                       const Tolerances& tol = kDefaultTolerances);

/// True iff `a` commutes with every projector of `q` within tol.
bool contains(const Context& q, const Observable& a,
              double tol = kDefaultTolerances.commute);

/// Value of the character on `a`. Throws IncompatibleObservable when `a`
/// is not in the character's context or is not constant on its branch.
double evaluate(const Character& chi, const Observable& a,
                double tol = kDefaultTolerances.commute);

/// Stability of an elementary state on `a`: every character of `phi` on a
/// family context containing `a` gives the same value. Throws
/// IndeterminateState when such a context has no character in `phi`.
bool is_stable(const ElementaryState& phi, const Observable& a,
               const ContextFamily& family,
               double tol = kDefaultTolerances.commute);

}  // namespace aqm

#endif  // AQM_ALGEBRA_HPP_
