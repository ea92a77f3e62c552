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

#include "aqm/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "aqm/errors.hpp"

namespace aqm {
namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows()
       << "x" << m.cols();
    throw DimensionMismatch(os.str());
  }
}

void require_same_dim(Index a, Index b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw DimensionMismatch(os.str());
  }
}

// Eigenvalue groups of a Hermitian matrix, as index ranges into the
// ascending eigenvalue list, returned in descending order.
struct Cluster {
  Index begin;
  Index end;
};

std::vector<Cluster> cluster_ascending(const Eigen::VectorXd& values,
                                       double tol) {
  std::vector<Cluster> clusters;
  Index start = 0;
  for (Index i = 1; i <= values.size(); ++i) {
    if (i == values.size() || values(i) - values(i - 1) > tol) {
      clusters.push_back({start, i});
      start = i;
    }
  }
  std::reverse(clusters.begin(), clusters.end());
  return clusters;
}

double spectral_norm(const Eigen::VectorXd& values) {
  return values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff();
}

// Splits the range of the orthonormal columns `block` into rank-one pieces
// using the columns of `refinement` projected into the block, in order.
std::vector<Vector> refine_block(const Matrix& block, const Matrix& refinement) {
  constexpr double kAccept = 1e-6;
  const Index rank = block.cols();
  std::vector<Vector> chosen;
  chosen.reserve(static_cast<std::size_t>(rank));

  auto residual = [&](const Vector& candidate) {
    Vector v = block * (block.adjoint() * candidate);
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& u : chosen) v -= u * u.dot(v);
    }
    return v;
  };

  for (Index j = 0; j < refinement.cols() && Index(chosen.size()) < rank;
       ++j) {
    Vector v = residual(refinement.col(j));
    const double norm = v.norm();
    if (norm > kAccept) chosen.push_back(v / norm);
  }
  // Pivoted completion in the rare case in-order selection fell short.
  while (Index(chosen.size()) < rank) {
    Vector best;
    double best_norm = -1.0;
    for (Index j = 0; j < refinement.cols(); ++j) {
      Vector v = residual(refinement.col(j));
      if (v.norm() > best_norm) {
        best_norm = v.norm();
        best = std::move(v);
      }
    }
    chosen.push_back(best / best_norm);
  }
  return chosen;
}

void check_refinement(const Matrix& refinement, Index dim) {
  if (refinement.rows() != dim || refinement.cols() != dim) {
    std::ostringstream os;
    os << "refinement basis must be " << dim << "x" << dim << ", got "
       << refinement.rows() << "x" << refinement.cols();
    throw DimensionMismatch(os.str());
  }
  const Matrix gram = refinement.adjoint() * refinement;
  if (max_abs(gram - Matrix::Identity(dim, dim)) > 1e-10) {
    throw InvalidArgument("refinement basis is not orthonormal");
  }
}

}  // namespace

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// DynamicalVariable / Observable

DynamicalVariable::DynamicalVariable(Matrix entries)
    : entries_(std::move(entries)) {
  require_square(entries_, "DynamicalVariable");
}

DynamicalVariable DynamicalVariable::identity(Index dim) {
  return DynamicalVariable(Matrix::Identity(dim, dim));
}

DynamicalVariable DynamicalVariable::adjoint() const {
  return DynamicalVariable(entries_.adjoint());
}

DynamicalVariable operator+(const DynamicalVariable& a,
                            const DynamicalVariable& b) {
  require_same_dim(a.dim(), b.dim(), "DynamicalVariable +");
  return DynamicalVariable(a.entries_ + b.entries_);
}

DynamicalVariable operator-(const DynamicalVariable& a,
                            const DynamicalVariable& b) {
  require_same_dim(a.dim(), b.dim(), "DynamicalVariable -");
  return DynamicalVariable(a.entries_ - b.entries_);
}

DynamicalVariable operator*(const DynamicalVariable& a,
                            const DynamicalVariable& b) {
  require_same_dim(a.dim(), b.dim(), "DynamicalVariable *");
  return DynamicalVariable(a.entries_ * b.entries_);
}

DynamicalVariable operator*(Complex s, const DynamicalVariable& a) {
  return DynamicalVariable(s * a.entries_);
}

Observable::Observable(const Matrix& entries, double hermitian_tol) {
  require_square(entries, "Observable");
  if (max_abs(entries - entries.adjoint()) > hermitian_tol) {
    throw InvalidArgument("Observable: matrix is not Hermitian");
  }
  value_ = 0.5 * (entries + entries.adjoint());
}

Observable::Observable(const DynamicalVariable& variable, double hermitian_tol)
    : Observable(variable.matrix(), hermitian_tol) {}

Observable Observable::identity(Index dim) {
  return Observable(Matrix::Identity(dim, dim));
}

Observable Observable::diagonal(std::span<const double> values) {
  Matrix m = Matrix::Zero(Index(values.size()), Index(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) m(Index(i), Index(i)) = values[i];
  return Observable(m);
}

Observable Observable::diagonal(std::initializer_list<double> values) {
  return diagonal(std::span<const double>(values.begin(), values.size()));
}

Observable operator+(const Observable& a, const Observable& b) {
  require_same_dim(a.dim(), b.dim(), "Observable +");
  return Observable(a.value_ + b.value_);
}

Observable operator-(const Observable& a, const Observable& b) {
  require_same_dim(a.dim(), b.dim(), "Observable -");
  return Observable(a.value_ - b.value_);
}

Observable operator*(double s, const Observable& a) {
  return Observable(s * a.value_);
}

namespace pauli {
Observable x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return Observable(m);
}
Observable y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return Observable(m);
}
Observable z() { return Observable::diagonal({1.0, -1.0}); }
}  // namespace pauli

// ---------------------------------------------------------------------------
// Context / Character / ContextFamily / ElementaryState

Context::Context(std::string id, std::vector<Matrix> projectors, double tol)
    : id_(std::move(id)), projectors_(std::move(projectors)) {
  if (projectors_.empty()) {
    throw InvalidArgument("Context '" + id_ + "': no projectors");
  }
  const Index n = projectors_.front().rows();
  Matrix sum = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < projectors_.size(); ++i) {
    const Matrix& p = projectors_[i];
    require_square(p, "Context projector");
    require_same_dim(p.rows(), n, "Context projector");
    if (max_abs(p - p.adjoint()) > tol || max_abs(p * p - p) > tol) {
      throw InvalidArgument("Context '" + id_ + "': projector " +
                            std::to_string(i) +
                            " is not a Hermitian idempotent");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (max_abs(p * projectors_[j]) > tol) {
        throw InvalidArgument("Context '" + id_ + "': projectors " +
                              std::to_string(j) + " and " + std::to_string(i) +
                              " are not orthogonal");
      }
    }
    if (p.trace().real() < 0.5) {
      throw InvalidArgument("Context '" + id_ + "': projector " +
                            std::to_string(i) + " is zero");
    }
    sum += p;
  }
  if (max_abs(sum - Matrix::Identity(n, n)) > tol) {
    throw InvalidArgument("Context '" + id_ +
                          "': projectors do not sum to the identity");
  }
}

Context Context::from_basis(std::string id, const Matrix& basis, double tol) {
  require_square(basis, "Context::from_basis");
  std::vector<Matrix> projectors;
  projectors.reserve(std::size_t(basis.cols()));
  for (Index j = 0; j < basis.cols(); ++j) {
    projectors.push_back(basis.col(j) * basis.col(j).adjoint());
  }
  return Context(std::move(id), std::move(projectors), tol);
}

Context Context::standard(std::string id, Index dim) {
  return from_basis(std::move(id), Matrix::Identity(dim, dim));
}

std::size_t Context::rank(std::size_t i) const {
  return static_cast<std::size_t>(std::lround(projector(i).trace().real()));
}

bool Context::is_maximal() const {
  for (std::size_t i = 0; i < size(); ++i) {
    if (rank(i) != 1) return false;
  }
  return true;
}

Character::Character(ContextPtr context, std::size_t branch)
    : context_(std::move(context)), branch_(branch) {
  if (!context_) throw InvalidArgument("Character: null context");
  if (branch_ >= context_->size()) {
    throw InvalidArgument("Character: branch " + std::to_string(branch_) +
                          " out of range for context '" + context_->id() +
                          "'");
  }
}

ContextFamily::ContextFamily(std::vector<Context> contexts) {
  for (auto& c : contexts) {
    insert(std::make_shared<const Context>(std::move(c)));
  }
}

ContextFamily::ContextFamily(std::vector<ContextPtr> contexts) {
  for (auto& c : contexts) insert(std::move(c));
}

void ContextFamily::insert(ContextPtr context) {
  if (!context) throw InvalidArgument("ContextFamily: null context");
  if (dim_ == 0) dim_ = context->dim();
  require_same_dim(context->dim(), dim_, "ContextFamily");
  const std::string id = context->id();
  if (!contexts_.emplace(id, std::move(context)).second) {
    throw InvalidArgument("ContextFamily: duplicate context id '" + id + "'");
  }
}

ContextPtr ContextFamily::find(const std::string& id) const {
  auto it = contexts_.find(id);
  return it == contexts_.end() ? nullptr : it->second;
}

std::vector<ContextPtr> ContextFamily::containing(const Observable& a,
                                                  double tol) const {
  std::vector<ContextPtr> out;
  for (const auto& [id, q] : contexts_) {
    if (contains(*q, a, tol)) out.push_back(q);
  }
  return out;
}

void ElementaryState::assign(Character chi) {
  const std::string id = chi.context_id();
  assignment_.insert_or_assign(id, std::move(chi));
}

const Character* ElementaryState::find(const std::string& context_id) const {
  auto it = assignment_.find(context_id);
  return it == assignment_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// Operations

bool commutes(const Observable& a, const Observable& b, double tol) {
  require_same_dim(a.dim(), b.dim(), "commutes");
  const Matrix& am = a.matrix();
  const Matrix& bm = b.matrix();
  return max_abs(am * bm - bm * am) <= tol;
}

std::vector<SpectralComponent> spectral_decompose(const Observable& a,
                                                  double relative_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error("spectral_decompose: eigen solver did not converge");
  }
  const Eigen::VectorXd& values = solver.eigenvalues();
  const Matrix& vectors = solver.eigenvectors();
  const double tol = relative_tol * spectral_norm(values);

  std::vector<SpectralComponent> out;
  for (const Cluster& c : cluster_ascending(values, tol)) {
    const Index width = c.end - c.begin;
    const Matrix v = vectors.middleCols(c.begin, width);
    out.push_back({values.segment(c.begin, width).mean(), v * v.adjoint()});
  }
  return out;
}

Context masa_from(const Observable& a, std::string id,
                  const std::optional<Matrix>& refinement,
                  const Tolerances& tol) {
  return masa_from_commuting(std::span<const Observable>(&a, 1), std::move(id),
                             refinement, tol);
}

Context masa_from_commuting(std::span<const Observable> generators,
                            std::string id,
                            const std::optional<Matrix>& refinement,
                            const Tolerances& tol) {
  if (generators.empty()) {
    throw InvalidArgument("masa_from_commuting: no generators");
  }
  const Index n = generators.front().dim();
  for (std::size_t i = 0; i < generators.size(); ++i) {
    require_same_dim(generators[i].dim(), n, "masa_from_commuting");
    for (std::size_t j = 0; j < i; ++j) {
      if (!commutes(generators[i], generators[j], tol.commute)) {
        throw IncompatibleObservable(
            "masa_from_commuting: generators do not commute");
      }
    }
  }
  if (refinement) check_refinement(*refinement, n);

  // Successively split invariant subspaces by the eigenspaces of each
  // generator restricted to them.
  std::vector<Matrix> blocks{Matrix::Identity(n, n)};
  for (const Observable& g : generators) {
    Eigen::SelfAdjointEigenSolver<Matrix> whole(g.matrix(),
                                                Eigen::EigenvaluesOnly);
    const double cluster_tol =
        tol.spectral_relative * spectral_norm(whole.eigenvalues());
    std::vector<Matrix> next;
    for (const Matrix& v : blocks) {
      Matrix restricted = v.adjoint() * g.matrix() * v;
      restricted = 0.5 * (restricted + restricted.adjoint()).eval();
      Eigen::SelfAdjointEigenSolver<Matrix> solver(restricted);
      for (const Cluster& c : cluster_ascending(solver.eigenvalues(),
                                                cluster_tol)) {
        next.push_back(v * solver.eigenvectors().middleCols(c.begin,
                                                            c.end - c.begin));
      }
    }
    blocks = std::move(next);
  }

  const Matrix basis = refinement ? *refinement : Matrix::Identity(n, n);
  std::vector<Matrix> projectors;
  projectors.reserve(std::size_t(n));
  for (const Matrix& v : blocks) {
    if (v.cols() == 1) {
      const Vector u = v.col(0).normalized();
      projectors.push_back(u * u.adjoint());
      continue;
    }
    for (const Vector& u : refine_block(v, basis)) {
      projectors.push_back(u * u.adjoint());
    }
  }
  return Context(std::move(id), std::move(projectors), tol.projector);
}

Context masa_from_pair(const Observable& a, const Observable& b,
                       std::string id, const Tolerances& tol) {
  const Observable pair[] = {a, b};
  return masa_from_commuting(pair, std::move(id), std::nullopt, tol);
}

bool contains(const Context& q, const Observable& a, double tol) {
  require_same_dim(q.dim(), a.dim(), "contains");
  const Matrix& am = a.matrix();
  for (const Matrix& p : q.projectors()) {
    if (max_abs(am * p - p * am) > tol) return false;
  }
  return true;
}

double evaluate(const Character& chi, const Observable& a, double tol) {
  if (!contains(chi.context(), a, tol)) {
    throw IncompatibleObservable("evaluate: observable is not in context '" +
                                 chi.context_id() + "'");
  }
  const Matrix& p = chi.projector();
  const Matrix ap = a.matrix() * p;
  const double value = ap.trace().real() / p.trace().real();
  if (max_abs(ap - value * p) > tol * std::max(1.0, max_abs(a.matrix()))) {
    throw IncompatibleObservable(
        "evaluate: observable is not constant on branch " +
        std::to_string(chi.branch()) + " of context '" + chi.context_id() +
        "'");
  }
  return value;
}

bool is_stable(const ElementaryState& phi, const Observable& a,
               const ContextFamily& family, double tol) {
  std::optional<double> first;
  bool stable = true;
  for (const ContextPtr& q : family.containing(a, tol)) {
    const Character* chi = phi.find(q->id());
    if (chi == nullptr) {
      throw IndeterminateState("is_stable: no character on context '" +
                               q->id() + "'");
    }
    const double value = evaluate(*chi, a, tol);
    if (!first) {
      first = value;
    } else if (std::abs(value - *first) > tol) {
      stable = false;
    }
  }
  return stable;
}

}  // namespace aqm
