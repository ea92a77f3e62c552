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

#include <memory>

#include "aqm/errors.hpp"
#include "gtest/gtest.h"
#include "aqm/random.hpp"

namespace aqm {
namespace {


Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Matrix sigma_x_basis() {
  const double s = 1.0 / std::sqrt(2.0);
  return mat2(s, s, s, -s);
}

ContextPtr share(Context c) { return std::make_shared<const Context>(std::move(c)); }

TEST(DynamicalVariable, RejectsNonSquare) {
  EXPECT_THROW(DynamicalVariable(Matrix(2, 3)), DimensionMismatch);
  EXPECT_THROW(DynamicalVariable(Matrix(0, 0)), DimensionMismatch);
}

TEST(DynamicalVariable, AlgebraStaysInDimension) {
  CounterRng rng(1, 0);
  const DynamicalVariable a(random_complex(rng, 3));
  const DynamicalVariable b(random_complex(rng, 3));
  EXPECT_EQ((a * b).dim(), 3);
  EXPECT_EQ((a + b).dim(), 3);
  EXPECT_EQ((Complex(0, 2) * a).dim(), 3);
  EXPECT_LE(max_abs((a * b).adjoint().matrix() -
                    (b.adjoint() * a.adjoint()).matrix()),
            1e-12);
  EXPECT_THROW(a * DynamicalVariable::identity(2), DimensionMismatch);
}

TEST(Observable, RequiresHermitian) {
  EXPECT_THROW(Observable(mat2(0, 1, 0, 0)), InvalidArgument);
  EXPECT_NO_THROW(Observable(mat2(1, Complex(0, 1), Complex(0, -1), 2)));
  EXPECT_NO_THROW(pauli::y());
}

TEST(Commutes, Examples) {
  EXPECT_FALSE(commutes(pauli::x(), pauli::z()));
  EXPECT_TRUE(commutes(Observable::diagonal({1, 2, 3}),
                       Observable::diagonal({4, 5, 6})));
  EXPECT_THROW(commutes(pauli::x(), Observable::identity(3)), DimensionMismatch);
}

TEST(Commutes, ObservableCommutesWithItsSquare) {
  CounterRng rng(2, 0);
  for (int i = 0; i < 20; ++i) {
    const Observable a = random_hermitian(rng, 5);
    EXPECT_TRUE(commutes(a, Observable(a.matrix() * a.matrix()), 1e-9));
  }
}

TEST(SpectralDecompose, SigmaZ) {
  const auto parts = spectral_decompose(pauli::z());
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_NEAR(parts[0].eigenvalue, 1.0, 1e-14);
  EXPECT_LE(max_abs(parts[0].projector - mat2(1, 0, 0, 0)), 1e-14);
  EXPECT_NEAR(parts[1].eigenvalue, -1.0, 1e-14);
  EXPECT_LE(max_abs(parts[1].projector - mat2(0, 0, 0, 1)), 1e-14);
}

TEST(SpectralDecompose, IdentityIsOneEigenspace) {
  const auto parts = spectral_decompose(Observable::identity(3));
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_NEAR(parts[0].eigenvalue, 1.0, 1e-14);
  EXPECT_LE(max_abs(parts[0].projector - Matrix::Identity(3, 3)), 1e-14);
}

TEST(SpectralDecompose, SigmaX) {
  // Hand-computed: P± = (I ± sigma_x) / 2; both idempotent, P+ - P- = sigma_x.
  const Matrix plus = mat2(0.5, 0.5, 0.5, 0.5);
  const Matrix minus = mat2(0.5, -0.5, -0.5, 0.5);
  ASSERT_LE(max_abs(plus * plus - plus), 1e-15);
  ASSERT_LE(max_abs(plus - minus - pauli::x().matrix()), 1e-15);

  const auto parts = spectral_decompose(pauli::x());
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_NEAR(parts[0].eigenvalue, 1.0, 1e-14);
  EXPECT_LE(max_abs(parts[0].projector - plus), 1e-14);
  EXPECT_NEAR(parts[1].eigenvalue, -1.0, 1e-14);
  EXPECT_LE(max_abs(parts[1].projector - minus), 1e-14);
}

TEST(SpectralDecompose, ClustersNearlyDegenerateEigenvalues) {
  const auto parts = spectral_decompose(Observable::diagonal({1.0, 1.0 + 1e-12, 2.0}));
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_NEAR(parts[1].projector.trace().real(), 2.0, 1e-12);
}

TEST(SpectralDecompose, ReconstructionProperty) {
  CounterRng rng(3, 0);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 1 + Index(rng() % 32);
    const Observable a = random_hermitian(rng, n);
    const auto parts = spectral_decompose(a);
    Matrix sum = Matrix::Zero(n, n);
    Matrix id = Matrix::Zero(n, n);
    for (const auto& c : parts) {
      sum += c.eigenvalue * c.projector;
      id += c.projector;
    }
    EXPECT_LE(max_abs(a.matrix() - sum), 1e-10) << "n = " << n;
    EXPECT_LE(max_abs(id - Matrix::Identity(n, n)), 1e-10);
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
      EXPECT_GT(parts[i].eigenvalue, parts[i + 1].eigenvalue);
    }
  }
}

TEST(Context, ValidatesProjectorFamily) {
  EXPECT_THROW(Context("bad", {mat2(1, 0, 0, 0)}), InvalidArgument);  // sum != I
  EXPECT_THROW(Context("bad", {mat2(1, 0, 0, 0), mat2(0.5, 0.5, 0.5, 0.5)}),
               InvalidArgument);  // not orthogonal
  EXPECT_THROW(Context("bad", {mat2(1, 1, 0, 0), mat2(0, -1, 0, 1)}),
               InvalidArgument);  // not Hermitian
  EXPECT_THROW(Context("bad", {}), InvalidArgument);
  const Context full("full", {Matrix::Identity(2, 2)});
  EXPECT_FALSE(full.is_maximal());
  EXPECT_TRUE(Context::standard("z", 2).is_maximal());
}

TEST(MasaFrom, SigmaZ) {
  const Context q = masa_from(pauli::z(), "z");
  ASSERT_EQ(q.size(), 2u);
  EXPECT_LE(max_abs(q.projector(0) - mat2(1, 0, 0, 0)), 1e-14);
  EXPECT_LE(max_abs(q.projector(1) - mat2(0, 0, 0, 1)), 1e-14);
  EXPECT_TRUE(q.is_maximal());
}

TEST(MasaFrom, IdentityDefaultRefinementIsStandardBasis) {
  const Context q = masa_from(Observable::identity(2), "id");
  ASSERT_EQ(q.size(), 2u);
  EXPECT_LE(max_abs(q.projector(0) - mat2(1, 0, 0, 0)), 1e-14);
  EXPECT_LE(max_abs(q.projector(1) - mat2(0, 0, 0, 1)), 1e-14);
}

TEST(MasaFrom, IdentityWithSigmaXRefinement) {
  const Context q = masa_from(Observable::identity(2), "idx", sigma_x_basis());
  ASSERT_EQ(q.size(), 2u);
  EXPECT_LE(max_abs(q.projector(0) - mat2(0.5, 0.5, 0.5, 0.5)), 1e-14);
  EXPECT_LE(max_abs(q.projector(1) - mat2(0.5, -0.5, -0.5, 0.5)), 1e-14);
  // Two different maximal contexts share the identity.
  EXPECT_TRUE(contains(q, Observable::identity(2)));
  EXPECT_FALSE(contains(q, pauli::z()));
}

TEST(MasaFrom, RejectsBadRefinement) {
  EXPECT_THROW(masa_from(pauli::z(), "z", Matrix::Identity(3, 3)),
               DimensionMismatch);
  EXPECT_THROW(masa_from(pauli::z(), "z", mat2(1, 1, 0, 1)), InvalidArgument);
}

TEST(MasaFrom, RefinementNotAlignedWithEigenspace) {
  // Refinement vectors straddle eigenspaces; the result is still maximal
  // and contains A.
  CounterRng rng(4, 0);
  const Matrix u = random_unitary(rng, 6);
  const Observable a = Observable::diagonal({1, 1, 1, 2, 2, 3});
  const Context q = masa_from(a, "q", u);
  EXPECT_TRUE(q.is_maximal());
  EXPECT_TRUE(contains(q, a));
}

TEST(MasaFrom, ProjectorCompletenessProperty) {
  CounterRng rng(5, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 1 + Index(rng() % 64);
    const Matrix u = random_unitary(rng, n);
    const Observable a = random_degenerate(rng, u);
    const Context q = masa_from(a, "q", trial % 2 ? std::optional<Matrix>(u)
                                                  : std::nullopt);
    ASSERT_EQ(q.size(), std::size_t(n));
    Matrix sum = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < q.size(); ++i) {
      sum += q.projector(i);
      for (std::size_t j = 0; j < q.size(); ++j) {
        const Matrix expected = i == j ? q.projector(i) : Matrix::Zero(n, n);
        ASSERT_LE(max_abs(q.projector(i) * q.projector(j) - expected), 1e-10);
      }
    }
    EXPECT_LE(max_abs(sum - Matrix::Identity(n, n)), 1e-10);
    EXPECT_TRUE(contains(q, a, 1e-9));
  }
}

TEST(MasaFromPair, CommutingPairSharesContext) {
  CounterRng rng(6, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 2 + Index(rng() % 7);
    const Matrix u = random_unitary(rng, n);
    const Observable a = random_degenerate(rng, u);
    const Observable b = random_degenerate(rng, u);
    ASSERT_TRUE(commutes(a, b, 1e-9));
    const Context q = masa_from_pair(a, b, "ab");
    EXPECT_TRUE(q.is_maximal());
    EXPECT_TRUE(contains(q, a, 1e-9));
    EXPECT_TRUE(contains(q, b, 1e-9));
  }
}

TEST(MasaFromPair, NonCommutingPairHasNoContext) {
  EXPECT_THROW(masa_from_pair(pauli::x(), pauli::z(), "xz"),
               IncompatibleObservable);
  // Converse direction: a context containing both forces commutation.
  const Context q = masa_from(pauli::z(), "z");
  EXPECT_FALSE(contains(q, pauli::x()) && contains(q, pauli::z()));
}

TEST(Contains, Examples) {
  const Context z = masa_from(pauli::z(), "z");
  EXPECT_TRUE(contains(z, pauli::z()));
  EXPECT_FALSE(contains(z, pauli::x()));
  EXPECT_TRUE(contains(z, Observable::identity(2)));
  EXPECT_THROW(contains(z, Observable::identity(3)), DimensionMismatch);
}

TEST(Evaluate, Examples) {
  const auto z = share(masa_from(pauli::z(), "z"));
  EXPECT_DOUBLE_EQ(evaluate(Character(z, 0), pauli::z()), 1.0);
  EXPECT_DOUBLE_EQ(evaluate(Character(z, 1), 3.0 * Observable::identity(2)), 3.0);
  EXPECT_THROW(evaluate(Character(z, 0), pauli::x()), IncompatibleObservable);
  EXPECT_THROW(evaluate(Character(z, 1), pauli::x()), IncompatibleObservable);
  EXPECT_THROW(Character(z, 2), InvalidArgument);
}

TEST(Evaluate, NonMaximalBranchMustBeConstant) {
  // diag(1,2,3) commutes with the projectors {diag(1,1,0), diag(0,0,1)} but
  // takes two values on the first branch.
  Matrix p0 = Matrix::Zero(3, 3);
  p0(0, 0) = p0(1, 1) = 1;
  const auto q = share(Context("coarse", {p0, Matrix::Identity(3, 3) - p0}));
  EXPECT_TRUE(contains(*q, Observable::diagonal({1, 2, 3})));
  EXPECT_THROW(evaluate(Character(q, 0), Observable::diagonal({1, 2, 3})),
               IncompatibleObservable);
  EXPECT_DOUBLE_EQ(evaluate(Character(q, 1), Observable::diagonal({1, 2, 3})), 3.0);
}

TEST(Character, HomomorphismProperty) {
  CounterRng rng(7, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 1 + Index(rng() % 8);
    const auto q = share(Context::from_basis("q", random_unitary(rng, n)));
    const Observable a = random_element(rng, *q);
    const Observable b = random_element(rng, *q);
    const Observable ab(a.matrix() * b.matrix(), 1e-9);
    for (std::size_t i = 0; i < q->size(); ++i) {
      const Character chi(q, i);
      const double va = evaluate(chi, a, 1e-9);
      const double vb = evaluate(chi, b, 1e-9);
      EXPECT_NEAR(evaluate(chi, ab, 1e-9), va * vb, 1e-9);
      EXPECT_NEAR(evaluate(chi, a + b, 1e-9), va + vb, 1e-9);
      // A P = chi(A) P and chi(A) = tr(PA) / tr(P).
      EXPECT_LE(max_abs(a.matrix() * chi.projector() - va * chi.projector()), 1e-9);
    }
  }
}

TEST(ContextFamily, RejectsDuplicatesAndMixedDimensions) {
  EXPECT_THROW(ContextFamily(std::vector<Context>{Context::standard("z", 2),
                                                  Context::standard("z", 2)}),
               InvalidArgument);
  EXPECT_THROW(ContextFamily(std::vector<Context>{Context::standard("a", 2),
                                                  Context::standard("b", 3)}),
               DimensionMismatch);
  const ContextFamily family(std::vector<Context>{
      Context::standard("z", 2), Context::from_basis("x", sigma_x_basis())});
  EXPECT_EQ(family.size(), 2u);
  EXPECT_EQ(family.containing(pauli::z()).size(), 1u);
  EXPECT_EQ(family.containing(Observable::identity(2)).size(), 2u);
  EXPECT_EQ(family.find("nope"), nullptr);
}

TEST(IsStable, SingleContainingContext) {
  const ContextFamily family(std::vector<Context>{Context::standard("z", 2)});
  for (std::size_t b = 0; b < 2; ++b) {
    ElementaryState phi;
    phi.assign(Character(family.find("z"), b));
    EXPECT_TRUE(is_stable(phi, pauli::z(), family));
  }
}

TEST(IsStable, IdentityIsStableAcrossContexts) {
  const ContextFamily family(std::vector<Context>{
      Context::standard("z", 2), Context::from_basis("x", sigma_x_basis())});
  for (std::size_t bz = 0; bz < 2; ++bz) {
    for (std::size_t bx = 0; bx < 2; ++bx) {
      ElementaryState phi;
      phi.assign(Character(family.find("z"), bz));
      phi.assign(Character(family.find("x"), bx));
      EXPECT_TRUE(is_stable(phi, Observable::identity(2), family));
    }
  }
}

TEST(IsStable, DegenerateObservableCanBeUnstable) {
  // A = diag(1,1,2). Context q1 refines the 1-eigenspace by the standard
  // basis, q2 by (e0 ± e1)/sqrt(2); both keep e2 as the 2-eigenspace.
  const Observable a = Observable::diagonal({1, 1, 2});
  const double s = 1.0 / std::sqrt(2.0);
  Matrix rotated = Matrix::Identity(3, 3);
  rotated.topLeftCorner(2, 2) = sigma_x_basis();
  const ContextFamily family(std::vector<Context>{
      masa_from(a, "q1"), masa_from(a, "q2", rotated)});
  const auto q1 = family.find("q1");
  const auto q2 = family.find("q2");
  // Oracle: q1 order is (e2 | e0, e1), q2 order is (e2 | (e0+e1)/s, (e0-e1)/s).
  Vector plus = Vector::Zero(3);
  plus << s, s, 0;
  ASSERT_LE(max_abs(q2->projector(1) - plus * plus.adjoint()), 1e-14);
  ASSERT_DOUBLE_EQ(evaluate(Character(q1, 1), a), 1.0);
  ASSERT_DOUBLE_EQ(evaluate(Character(q2, 0), a), 2.0);

  ElementaryState unstable;
  unstable.assign(Character(q1, 1));
  unstable.assign(Character(q2, 0));
  EXPECT_FALSE(is_stable(unstable, a, family));

  ElementaryState stable;
  stable.assign(Character(q1, 1));
  stable.assign(Character(q2, 2));
  EXPECT_TRUE(is_stable(stable, a, family));
}

TEST(IsStable, MissingCharacterIsIndeterminate) {
  const ContextFamily family(std::vector<Context>{
      Context::standard("z", 2), Context::from_basis("x", sigma_x_basis())});
  ElementaryState phi;
  phi.assign(Character(family.find("z"), 0));
  EXPECT_THROW(is_stable(phi, Observable::identity(2), family),
               IndeterminateState);
  // sigma_z lives only in "z", which is assigned.
  EXPECT_TRUE(is_stable(phi, pauli::z(), family));
}

}  // namespace
}  // namespace aqm
