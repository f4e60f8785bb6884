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

// Dense complex linear-algebra kernel.
//
// Storage is Eigen. The Hermitian eigensolver (zheevr) and SVD (zgesvd) go through
// LAPACK; QR stays in Eigen.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <cblas.h>
#include <lapacke.h>

#include "eqpt/error.hpp"
#include "eqpt/rng.hpp"
#include "eqpt/tolerances.hpp"

extern "C" void openblas_set_num_threads(int num_threads);

namespace eqpt {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Eigen-decomposition of a Hermitian matrix; column k of `vectors` pairs with `values[k]`.
struct EigenPair {
  RealVector values;
  ComplexMatrix vectors;
};

/// A = left * diag(sigma) * right^H, sigma nonincreasing.
struct SvdResult {
  ComplexMatrix left;
  RealVector sigma;
  ComplexMatrix right;
};

/// Leading canonical directions between two subspaces, expressed in the ambient space.
struct CanonicalDirections {
  ComplexMatrix directions;  ///< d x k, unit-norm columns
  RealVector correlations;   ///< cosines of the principal angles, nonincreasing
};

/// Diagnostic companion of nearest_unitary.
struct UnitaryProjectionReport {
  bool rank_deficient = false;
  double sigma_ratio = 1.0;  ///< sigma_min / sigma_max
};

enum class UnitaryMode {
  RealUniformQR,   ///< Q factor of a real matrix with i.i.d. uniform [0, 1] entries
  ComplexGinibre,  ///< Haar-distributed unitary from a complex Gaussian matrix
};

namespace detail {

inline void pin_blas_threads() {
  static std::once_flag once;
  // Multi-threaded BLAS makes results depend on the thread count.
  std::call_once(once, [] { openblas_set_num_threads(1); });
}

inline void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    std::ostringstream msg;
    msg << what << ": expected a non-empty square matrix, got " << a.rows() << "x" << a.cols();
    throw DimensionError(msg.str());
  }
}

}  // namespace detail

/// ||A^H A - I||_F
inline double unitarity_defect(const ComplexMatrix& a) {
  detail::pin_blas_threads();
  const auto n = a.cols();
  if (n == 0) return 0.0;
  ComplexMatrix gram(n, n);
  const double one = 1.0, zero = 0.0;
  cblas_zherk(CblasColMajor, CblasLower, CblasConjTrans, static_cast<int>(n), static_cast<int>(a.rows()), one,
              a.data(), static_cast<int>(a.rows()), zero, gram.data(), static_cast<int>(n));
  double sum = 0.0;
  for (Eigen::Index c = 0; c < n; ++c) {
    sum += std::norm(gram(c, c) - 1.0);
    for (Eigen::Index r = c + 1; r < n; ++r) sum += 2.0 * std::norm(gram(r, c));
  }
  return std::sqrt(sum);
}

/// ||A - A^H||_F / ||A||_F (0 for the zero matrix).
inline double relative_asymmetry(const ComplexMatrix& a) {
  const double scale = a.norm();
  if (scale == 0.0) return 0.0;
  return (a - a.adjoint()).norm() / scale;
}

inline bool all_finite(const ComplexMatrix& a) {
  return a.allFinite();
}

/// Eigenvalues (ascending, as returned by the solver) and orthonormal eigenvectors of a
/// Hermitian matrix.
inline EigenPair hermitian_eig(const ComplexMatrix& a, const Tolerances& tol = kTolerances) {
  detail::require_square(a, "hermitian_eig");
  if (!all_finite(a)) throw NumericalError("hermitian_eig: input contains NaN or Inf");
  const double asym = relative_asymmetry(a);
  if (asym > tol.hermitian_asymmetry) {
    std::ostringstream msg;
    msg << "hermitian_eig: input is not Hermitian (relative asymmetry " << asym << ")";
    throw ArgumentError(msg.str());
  }
  detail::pin_blas_threads();

  const lapack_int n = static_cast<lapack_int>(a.rows());
  ComplexMatrix work = a;
  EigenPair out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_zheevr(
      LAPACK_COL_MAJOR, 'V', 'A', 'L', n, reinterpret_cast<lapack_complex_double*>(work.data()),
      n, 0.0, 0.0, 0, 0, 0.0, &found, out.values.data(),
      reinterpret_cast<lapack_complex_double*>(out.vectors.data()), n, support.data());
  if (info != 0 || found != n) {
    std::ostringstream msg;
    msg << "hermitian_eig: solver did not converge (info " << info << ", " << found << "/" << n
        << " eigenpairs, ||A||_F " << a.norm() << ")";
    throw NumericalError(msg.str());
  }
  return out;
}

namespace detail {

// jobu / jobvt follow LAPACK: 'A' full, 'S' thin, 'N' none.
inline SvdResult lapack_svd(const ComplexMatrix& a, char jobu, char jobvt, const char* who) {
  pin_blas_threads();
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  const lapack_int p = std::min(m, n);
  ComplexMatrix work = a;
  SvdResult out;
  out.sigma.resize(p);
  const lapack_int ucols = jobu == 'A' ? m : (jobu == 'S' ? p : 1);
  const lapack_int vrows = jobvt == 'A' ? n : (jobvt == 'S' ? p : 1);
  out.left.resize(jobu == 'N' ? 1 : m, ucols);
  out.right.resize(vrows, n);  // holds V^H until the end
  std::vector<double> superb(static_cast<std::size_t>(std::max<lapack_int>(p, 1)));
  const lapack_int info = LAPACKE_zgesvd(
      LAPACK_COL_MAJOR, jobu, jobvt, m, n, reinterpret_cast<lapack_complex_double*>(work.data()), m,
      out.sigma.data(), reinterpret_cast<lapack_complex_double*>(out.left.data()),
      static_cast<lapack_int>(out.left.rows()),
      reinterpret_cast<lapack_complex_double*>(out.right.data()),
      static_cast<lapack_int>(out.right.rows()), superb.data());
  if (info != 0) {
    std::ostringstream msg;
    msg << who << ": SVD did not converge (info " << info << ")";
    throw NumericalError(msg.str());
  }
  if (jobu == 'N') out.left.resize(0, 0);
  if (jobvt == 'N') {
    out.right.resize(0, 0);
  } else {
    out.right.adjointInPlace();
  }
  return out;
}

}  // namespace detail

/// Full SVD. Works for rectangular input; `left` and `right` are square unitary.
inline SvdResult svd(const ComplexMatrix& a) {
  if (a.rows() < 1 || a.cols() < 1) throw DimensionError("svd: empty matrix");
  if (!all_finite(a)) throw NumericalError("svd: input contains NaN or Inf");
  return detail::lapack_svd(a, 'A', 'A', "svd");
}

/// Closest unitary matrix in Frobenius norm: V W^H from A = V S W^H.
inline ComplexMatrix nearest_unitary(const ComplexMatrix& a, UnitaryProjectionReport* report = nullptr,
                                     const Tolerances& tol = kTolerances) {
  detail::require_square(a, "nearest_unitary");
  const SvdResult f = svd(a);
  const double smax = f.sigma(0);
  const double smin = f.sigma(f.sigma.size() - 1);
  if (report != nullptr) {
    report->sigma_ratio = smax > 0.0 ? smin / smax : 0.0;
    report->rank_deficient = !(smin > tol.rank_ratio * smax);
  }
  return f.left * f.right.adjoint();
}

/// Deterministic random unitary of dimension d.
///
/// The default mode fills a real d x d matrix row by row with uniform [0, 1) draws and
/// returns the Q factor of its Householder QR, so the result is real orthogonal.
inline ComplexMatrix random_unitary(std::size_t d, std::uint64_t seed,
                                    UnitaryMode mode = UnitaryMode::RealUniformQR) {
  if (d < 1) throw ArgumentError("random_unitary: dimension must be at least 1");
  const auto n = static_cast<Eigen::Index>(d);
  rng::SequentialStream stream(seed);
  if (mode == UnitaryMode::RealUniformQR) {
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) m(r, c) = stream.uniform01();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    return q.cast<Complex>();
  }
  ComplexMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) {
      const double re = stream.normal();
      const double im = stream.normal();
      m(r, c) = Complex(re, im) / std::sqrt(2.0);
    }
  Eigen::HouseholderQR<ComplexMatrix> qr(m);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix& r = qr.matrixQR();
  // Haar column phases.
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex rk = r(k, k);
    const double mag = std::abs(rk);
    if (mag > 0.0) q.col(k) *= rk / mag;
  }
  return q;
}

/// Orthonormal basis (thin Q) for the columns of b. Throws when the columns are
/// numerically dependent.
inline ComplexMatrix orthonormal_basis(const ComplexMatrix& b, const Tolerances& tol = kTolerances) {
  if (b.cols() < 1) throw ArgumentError("orthonormal_basis: empty basis");
  if (b.cols() > b.rows()) throw NumericalError("orthonormal_basis: more vectors than dimensions");
  Eigen::HouseholderQR<ComplexMatrix> qr(b);
  const ComplexMatrix& r = qr.matrixQR();
  double rmax = 0.0;
  for (Eigen::Index k = 0; k < b.cols(); ++k) rmax = std::max(rmax, std::abs(r(k, k)));
  for (Eigen::Index k = 0; k < b.cols(); ++k) {
    if (!(std::abs(r(k, k)) > tol.zero_norm * rmax) || rmax == 0.0)
      throw NumericalError("orthonormal_basis: basis columns are linearly dependent");
  }
  return qr.householderQ() * ComplexMatrix::Identity(b.rows(), b.cols());
}

/// Scales v to unit norm and rotates it so its first non-negligible component is
/// real and positive.
inline void canonicalize_direction(Eigen::Ref<ComplexVector> v, const Tolerances& tol = kTolerances) {
  const double n = v.norm();
  if (!(n > tol.zero_norm)) throw NumericalError("canonicalize_direction: zero vector");
  v /= n;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > tol.zero_component) {
      v *= std::conj(v(i)) / mag;
      v(i) = Complex(std::abs(v(i)), 0.0);
      return;
    }
  }
}

/// Top-k canonical directions between span(q1) and span(q2); both inputs must already
/// have orthonormal columns. The directions are taken on the q1 side.
inline CanonicalDirections canonical_directions_orthonormal(const ComplexMatrix& q1,
                                                            const ComplexMatrix& q2, Eigen::Index k,
                                                            const Tolerances& tol = kTolerances) {
  if (q1.rows() != q2.rows()) throw DimensionError("canonical_directions: ambient dimensions differ");
  if (k < 1 || k > std::min(q1.cols(), q2.cols()))
    throw ArgumentError("canonical_directions: requested direction count out of range");
  const ComplexMatrix overlap = q1.adjoint() * q2;
  if (!all_finite(overlap)) throw NumericalError("canonical_directions: input contains NaN or Inf");
  const SvdResult f = detail::lapack_svd(overlap, 'S', 'N', "canonical_directions");
  CanonicalDirections out;
  out.directions = q1 * f.left.leftCols(k);
  out.correlations = f.sigma.head(k);
  for (Eigen::Index c = 0; c < k; ++c) canonicalize_direction(out.directions.col(c), tol);
  return out;
}

/// Top-k canonical directions between span(b1) and span(b2) for arbitrary bases.
inline CanonicalDirections canonical_directions(const ComplexMatrix& b1, const ComplexMatrix& b2,
                                                Eigen::Index k, const Tolerances& tol = kTolerances) {
  if (b1.cols() < 1 || b2.cols() < 1) throw ArgumentError("canonical_directions: empty basis");
  if (b1.rows() != b2.rows()) throw DimensionError("canonical_directions: ambient dimensions differ");
  return canonical_directions_orthonormal(orthonormal_basis(b1, tol), orthonormal_basis(b2, tol), k,
                                          tol);
}

/// Unit vector of span(b1) maximally correlated with span(b2). When the two spans share
/// exactly one direction this is that direction, up to a unit-modulus factor.
inline ComplexVector cca_principal_direction(const ComplexMatrix& b1, const ComplexMatrix& b2,
                                             const Tolerances& tol = kTolerances) {
  return canonical_directions(b1, b2, 1, tol).directions.col(0);
}

}  // namespace eqpt
