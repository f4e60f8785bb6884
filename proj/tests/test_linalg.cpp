// Copyright 2026 The eqpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>

#include "eqpt/eqpt.hpp"
#include "test_util.hpp"

namespace eqpt {
namespace {

using test::basis;
using test::random_hermitian;

TEST(HermitianEig, DiagonalInput) {
  ComplexMatrix a = ComplexMatrix::Zero(4, 4);
  const double vals[] = {0.4, 0.3, 0.2, 0.1};
  for (int k = 0; k < 4; ++k) a(k, k) = vals[k];
  const EigenPair e = hermitian_eig(a);
  RealVector sorted = e.values;
  std::sort(sorted.data(), sorted.data() + sorted.size(), std::greater<>());
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(sorted(k), vals[k], 1e-15);
  for (int c = 0; c < 4; ++c) {
    int nonzero = 0;
    for (int r = 0; r < 4; ++r) {
      const double mag = std::abs(e.vectors(r, c));
      if (mag > 1e-12) {
        ++nonzero;
        EXPECT_NEAR(mag, 1.0, 1e-12);
      }
    }
    EXPECT_EQ(nonzero, 1);
  }
}

TEST(HermitianEig, DegenerateIdentity) {
  const ComplexMatrix a = ComplexMatrix::Identity(2, 2) * 0.5;
  const EigenPair e = hermitian_eig(a);
  EXPECT_NEAR(e.values(0), 0.5, 1e-15);
  EXPECT_NEAR(e.values(1), 0.5, 1e-15);
  EXPECT_LE(unitarity_defect(e.vectors), 1e-12);
}

TEST(HermitianEig, RecoversConjugatedSpectrum) {
  const ComplexMatrix u = random_unitary(4, 7);
  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  const double vals[] = {0.4, 0.3, 0.2, 0.1};
  for (int k = 0; k < 4; ++k) rho(k, k) = vals[k];
  const EigenPair e = hermitian_eig(u * rho * u.adjoint());
  // Solver order is ascending.
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(e.values(3 - k), vals[k], 1e-12);
}

TEST(HermitianEig, ReconstructionProperty) {
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial) * 62 / 99;
    const ComplexMatrix a = random_hermitian(d, 1000 + static_cast<std::uint64_t>(trial));
    const EigenPair e = hermitian_eig(a);
    const ComplexMatrix rebuilt = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    EXPECT_LE((rebuilt - a).norm(), 1e-10 * a.norm()) << "d=" << d;
    EXPECT_LE(unitarity_defect(e.vectors), 1e-10);
    for (Eigen::Index k = 0; k < a.rows(); ++k) {
      EXPECT_LE((a * e.vectors.col(k) - e.values(k) * e.vectors.col(k)).norm(), 1e-10 * a.norm());
      EXPECT_NEAR(e.vectors.col(k).norm(), 1.0, 1e-12);
    }
  }
}

TEST(HermitianEig, Errors) {
  EXPECT_THROW(hermitian_eig(ComplexMatrix::Zero(2, 3)), DimensionError);
  ComplexMatrix a = ComplexMatrix::Identity(2, 2);
  a(0, 1) = 0.5;
  EXPECT_THROW(hermitian_eig(a), ArgumentError);
  a(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(hermitian_eig(a), NumericalError);
}

TEST(Svd, Identity) {
  const SvdResult f = svd(ComplexMatrix::Identity(3, 3));
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(f.sigma(k), 1.0, 1e-15);
}

TEST(Svd, RankDeficientDiagonal) {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = 2.0;
  const SvdResult f = svd(a);
  EXPECT_NEAR(f.sigma(0), 2.0, 1e-15);
  EXPECT_NEAR(f.sigma(1), 0.0, 1e-15);
}

TEST(Svd, FrobeniusIdentityAndReconstruction) {
  const ComplexMatrix a = test::random_complex(4, 4, 3);
  const SvdResult f = svd(a);
  EXPECT_NEAR(a.squaredNorm(), f.sigma.squaredNorm(), 1e-10);
  const ComplexMatrix rebuilt = f.left * f.sigma.cast<Complex>().asDiagonal() * f.right.adjoint();
  EXPECT_LE((rebuilt - a).norm(), 1e-10 * a.norm());
  for (Eigen::Index k = 1; k < f.sigma.size(); ++k) EXPECT_GE(f.sigma(k - 1), f.sigma(k));
  EXPECT_GE(f.sigma.minCoeff(), 0.0);
}

TEST(NearestUnitary, FixedPoint) {
  const ComplexMatrix u = random_unitary(6, 21, UnitaryMode::ComplexGinibre);
  EXPECT_LE((nearest_unitary(u) - u).norm(), 1e-12);
}

TEST(NearestUnitary, PositiveDiagonalScaling) {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = 3.0;
  EXPECT_LE((nearest_unitary(a) - ComplexMatrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(NearestUnitary, ImprovesPerturbedUnitary) {
  const ComplexMatrix u = random_unitary(8, 11);
  ComplexMatrix e = test::random_complex(8, 8, 12);
  e *= 1e-3 / e.norm();
  const ComplexMatrix a = u + e;
  const ComplexMatrix p = nearest_unitary(a);
  EXPECT_LT(nmse(u, p), nmse(u, a));
  EXPECT_LE(unitarity_defect(p), 1e-12 * std::sqrt(8.0));
}

TEST(NearestUnitary, Idempotent) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const ComplexMatrix a = test::random_complex(5, 5, 40 + s);
    const ComplexMatrix p = nearest_unitary(a);
    EXPECT_LE((nearest_unitary(p) - p).norm(), 1e-12);
  }
}

TEST(NearestUnitary, RankDeficientReported) {
  ComplexMatrix a = ComplexMatrix::Zero(3, 3);
  a(0, 0) = 1.0;
  a(1, 1) = 1.0;
  UnitaryProjectionReport report;
  const ComplexMatrix p = nearest_unitary(a, &report);
  EXPECT_TRUE(report.rank_deficient);
  EXPECT_LE(unitarity_defect(p), 1e-12);
}

TEST(RandomUnitary, OneByOne) {
  const ComplexMatrix u = random_unitary(1, 99);
  EXPECT_NEAR(std::abs(u(0, 0)), 1.0, 1e-15);
}

TEST(RandomUnitary, UnitaryAndOrthogonalColumns) {
  const ComplexMatrix q = random_unitary(8, 42);
  EXPECT_LT((q.adjoint() * q - ComplexMatrix::Identity(8, 8)).norm(), 1e-12);
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j) EXPECT_LT(std::abs(q.col(i).dot(q.col(j))), 1e-12);
}

TEST(RandomUnitary, DefaultIsRealOrthogonal) {
  const ComplexMatrix q = random_unitary(16, 5);
  EXPECT_EQ(q.imag().cwiseAbs().maxCoeff(), 0.0);
  const ComplexMatrix g = random_unitary(16, 5, UnitaryMode::ComplexGinibre);
  EXPECT_GT(g.imag().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LT(unitarity_defect(g), 1e-12);
}

TEST(RandomUnitary, Deterministic) {
  const ComplexMatrix a = random_unitary(32, 123);
  const ComplexMatrix b = random_unitary(32, 123);
  EXPECT_EQ(0, std::memcmp(a.data(), b.data(), sizeof(Complex) * static_cast<std::size_t>(a.size())));
  EXPECT_NE((a - random_unitary(32, 124)).norm(), 0.0);
  EXPECT_THROW(random_unitary(0, 1), ArgumentError);
}

TEST(Cca, ExactOneDimensionalIntersection) {
  ComplexMatrix b1(4, 2), b2(4, 2);
  b1 << basis(4, 0), basis(4, 1);
  b2 << basis(4, 1), basis(4, 2);
  const ComplexVector o = cca_principal_direction(b1, b2);
  EXPECT_NEAR(std::abs(o(1)), 1.0, 1e-12);
  EXPECT_NEAR(o.norm(), 1.0, 1e-12);
}

TEST(Cca, IdenticalLines) {
  const ComplexMatrix b = basis(3, 0);
  const ComplexVector o = cca_principal_direction(b, b);
  EXPECT_NEAR(std::abs(o(0)), 1.0, 1e-12);
}

TEST(Cca, ColumnOfKnownUnitary) {
  const ComplexMatrix u = random_unitary(4, 5);
  ComplexMatrix b1(4, 2), b2(4, 2);
  b1 << u.col(0), u.col(1);
  b2 << u.col(1), u.col(3);
  const ComplexVector o = cca_principal_direction(b1, b2);
  EXPECT_GT(std::abs(o.dot(u.col(1))), 1.0 - 1e-10);
}

TEST(Cca, InvariantUnderBasisChange) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const ComplexMatrix u = random_unitary(6, 300 + s, UnitaryMode::ComplexGinibre);
    const ComplexMatrix b1 = u.leftCols(3);
    ComplexMatrix b2(6, 2);
    b2 << u.col(2), u.col(5);
    const ComplexMatrix r = test::random_complex(3, 3, 400 + s);
    const ComplexVector o = cca_principal_direction(b1, b2);
    const ComplexVector o2 = cca_principal_direction(b1 * r, b2);
    EXPECT_NEAR(std::abs(o.dot(o2)), 1.0, 1e-10);
  }
}

TEST(Cca, PhaseConvention) {
  const ComplexMatrix u = random_unitary(5, 8, UnitaryMode::ComplexGinibre);
  const ComplexVector o = cca_principal_direction(u.leftCols(2), u.middleCols(1, 2));
  Eigen::Index first = 0;
  while (std::abs(o(first)) <= 1e-12) ++first;
  EXPECT_GT(o(first).real(), 0.0);
  EXPECT_EQ(o(first).imag(), 0.0);
}

TEST(Cca, Errors) {
  EXPECT_THROW(cca_principal_direction(ComplexMatrix(4, 0), basis(4, 0)), ArgumentError);
  ComplexMatrix dependent(4, 2);
  dependent << basis(4, 0), basis(4, 0);
  EXPECT_THROW(cca_principal_direction(dependent, basis(4, 0)), NumericalError);
  EXPECT_THROW(cca_principal_direction(basis(4, 0), basis(3, 0)), DimensionError);
}

TEST(Tolerances, SingleRecord) {
  EXPECT_EQ(kTolerances.reconstruction, 1e-10);
  EXPECT_EQ(kTolerances.unitarity, 1e-12);
}

}  // namespace
}  // namespace eqpt
