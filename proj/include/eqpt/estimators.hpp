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

// Eigenanalysis-based process estimators.
//
// Every estimator follows the same two-part pattern:
//   1. eigendecompose preprocessed output densities of structured diagonal inputs, which
//      yields the columns of U up to one unknown phase per column;
//   2. remove those phases with a probe state (a pure ket, or a known mixed state).
// The single-stage estimator reads all columns from one eigendecomposition. The two-stage
// and dichotomic estimators use inputs with repeated eigenvalues and recover each column
// as the one-dimensional intersection of eigen-subspaces from different stages.
//
// Inputs are expected to be preprocessed (Hermitian, unit trace; kets normalized).

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eqpt/qst.hpp"
#include "eqpt/states.hpp"

namespace eqpt {

enum class Method { EQPT1, EQPT2, EQPT3, EQPT4, EQPT5, VariantG, VariantH };

/// Where the nearest-unitary projection is applied in the two-stage pipeline.
enum class Unitarization { None, BeforePhase, AfterPhase };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::EQPT1: return "eqpt1";
    case Method::EQPT2: return "eqpt2";
    case Method::EQPT3: return "eqpt3";
    case Method::EQPT4: return "eqpt4";
    case Method::EQPT5: return "eqpt5";
    case Method::VariantG: return "variant-g";
    case Method::VariantH: return "variant-h";
  }
  return "unknown";
}

inline std::string_view to_string(Unitarization u) {
  switch (u) {
    case Unitarization::None: return "none";
    case Unitarization::BeforePhase: return "before-phase";
    case Unitarization::AfterPhase: return "after-phase";
  }
  return "unknown";
}

inline constexpr double kNoGap = std::numeric_limits<double>::quiet_NaN();

struct StageDiagnostics {
  std::string name;
  double min_gap = kNoGap;  ///< smallest gap between consecutive eigenvalue groups; NaN if no eigenproblem
  double seconds = 0.0;
  std::size_t reorthonormalized_blocks = 0;
};

struct Diagnostics {
  std::vector<StageDiagnostics> stages;
  double unitarity_defect = 0.0;
  double seconds = 0.0;
  bool rank_deficient_projection = false;
  bool non_hermitian_fallback = false;

  double min_gap() const {
    double g = std::numeric_limits<double>::infinity();
    for (const auto& s : stages)
      if (!std::isnan(s.min_gap)) g = std::min(g, s.min_gap);
    return g;
  }
};

struct ProcessEstimate {
  ComplexMatrix matrix;
  Method method = Method::EQPT1;
  Unitarization unitarization = Unitarization::None;
  Diagnostics diagnostics;
};

/// Eigenpairs in nonincreasing eigenvalue order with unit-norm columns.
struct SortedEig {
  RealVector values;
  ComplexMatrix vectors;
  bool non_hermitian_fallback = false;

  /// Smallest drop between consecutive groups of `group` equal eigenvalues.
  double boundary_gap(std::size_t group = 1) const {
    double g = std::numeric_limits<double>::infinity();
    const auto n = static_cast<std::size_t>(values.size());
    for (std::size_t b = group; b < n; b += group) {
      const auto i = static_cast<Eigen::Index>(b);
      g = std::min(g, values(i - 1) - values(i));
    }
    return g;
  }
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

inline void expect_source(const DensityMatrix& rho, const Layout& expected, const char* what) {
  if (rho.source && *rho.source != expected)
    throw ArgumentError(std::string(what) + ": expected output of a " + to_string(expected) +
                        " input, got " + to_string(*rho.source));
}

inline void expect_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want)
    throw DimensionError(std::string(what) + ": dimension " + std::to_string(got) + ", expected " +
                         std::to_string(want));
}

inline void normalize_columns(ComplexMatrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const double n = m.col(c).norm();
    if (n > 0.0) m.col(c) /= n;
  }
}

/// Orthonormal bases of consecutive column blocks; counts blocks whose Gram defect was
/// above tolerance before re-orthonormalization.
inline std::vector<ComplexMatrix> block_bases(const ComplexMatrix& vectors, Eigen::Index block,
                                              std::size_t& reorthonormalized,
                                              const Tolerances& tol) {
  std::vector<ComplexMatrix> bases;
  for (Eigen::Index start = 0; start < vectors.cols(); start += block) {
    const ComplexMatrix b = vectors.middleCols(start, block);
    const double defect = (b.adjoint() * b - ComplexMatrix::Identity(block, block)).norm();
    if (defect > tol.block_gram_defect) ++reorthonormalized;
    bases.push_back(orthonormal_basis(b, tol));
  }
  return bases;
}

}  // namespace detail

/// Eigendecomposition reordered by nonincreasing eigenvalue (stable for ties), with columns
/// divided by their norms. Non-Hermitian input falls back to a general eigensolver ordered
/// by eigenvalue modulus.
inline SortedEig sorted_eigendecomposition(const DensityMatrix& rho_hat, const Tolerances& tol = kTolerances) {
  detail::require_square(rho_hat.matrix, "sorted_eigendecomposition");
  const auto n = rho_hat.matrix.rows();
  RealVector keys(n);
  ComplexMatrix vectors;
  bool fallback = false;
  if (relative_asymmetry(rho_hat.matrix) <= tol.hermitian_asymmetry) {
    EigenPair eig = hermitian_eig(rho_hat.matrix, tol);
    keys = std::move(eig.values);
    vectors = std::move(eig.vectors);
  } else {
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(rho_hat.matrix);
    if (solver.info() != Eigen::Success)
      throw NumericalError("sorted_eigendecomposition: general eigensolver did not converge");
    keys = solver.eigenvalues().cwiseAbs();
    vectors = solver.eigenvectors();
    fallback = true;
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return keys(a) > keys(b); });

  SortedEig out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  out.non_hermitian_fallback = fallback;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.values(k) = keys(src);
    out.vectors.col(k) = vectors.col(src);
  }
  detail::normalize_columns(out.vectors);
  return out;
}

/// Removes per-column phases of u2 = U D using the probe pair (psi1, phi2_hat = e^{it} U psi1):
/// returns u2 diag((u2^H phi2_hat) ./ psi1) = e^{it} U.
///
/// With `unit_modulus` the correction factors are reduced to pure phases, which keeps a
/// unitary u2 unitary.
inline ComplexMatrix resolve_phases_pure(const ComplexMatrix& u2, const Ket& psi1, const Ket& phi2_hat,
                                         bool unit_modulus = false, const Tolerances& tol = kTolerances) {
  detail::require_square(u2, "resolve_phases_pure");
  const auto d = static_cast<std::size_t>(u2.rows());
  detail::expect_dim(psi1.dim(), d, "resolve_phases_pure (input ket)");
  detail::expect_dim(phi2_hat.dim(), d, "resolve_phases_pure (output ket)");
  for (Eigen::Index k = 0; k < psi1.amplitudes.size(); ++k)
    if (!(std::abs(psi1.amplitudes(k)) > tol.zero_component))
      throw ArgumentError("resolve_phases_pure: input ket component " + std::to_string(k + 1) + " is zero");

  const ComplexVector projected = u2.adjoint() * phi2_hat.amplitudes;
  ComplexVector factors = projected.cwiseQuotient(psi1.amplitudes);
  if (unit_modulus) {
    for (Eigen::Index k = 0; k < factors.size(); ++k) {
      const double mag = std::abs(factors(k));
      factors(k) = mag > 0.0 ? factors(k) / mag : Complex(1.0, 0.0);
    }
  }
  return u2 * factors.asDiagonal();
}

/// Single-stage estimator.
inline ProcessEstimate eqpt1(const DensityMatrix& rho2_pre, const Ket& phi2_hat, std::size_t d,
                             const Tolerances& tol = kTolerances) {
  const auto t0 = detail::Clock::now();
  detail::expect_dim(rho2_pre.dim(), d, "eqpt1 (density)");
  detail::expect_dim(phi2_hat.dim(), d, "eqpt1 (ket)");
  detail::expect_source(rho2_pre, Layout::single_stage(), "eqpt1");

  ProcessEstimate est;
  est.method = Method::EQPT1;
  const SortedEig eig = sorted_eigendecomposition(rho2_pre, tol);
  est.diagnostics.stages.push_back({"eigendecomposition", eig.boundary_gap(1), detail::seconds_since(t0), 0});
  est.diagnostics.non_hermitian_fallback = eig.non_hermitian_fallback;

  const auto t1 = detail::Clock::now();
  est.matrix = resolve_phases_pure(eig.vectors, probe_ket(d), phi2_hat, false, tol);
  est.diagnostics.stages.push_back({"phase", kNoGap, detail::seconds_since(t1), 0});
  est.diagnostics.unitarity_defect = unitarity_defect(est.matrix);
  est.diagnostics.seconds = detail::seconds_since(t0);
  return est;
}

/// Index (0-based) of the single column of U shared by eigen-block `i` of the first stage
/// and eigen-block `j` of the second stage, or -1 when they share none. Block i of the first
/// stage covers columns [i m1, (i+1) m1); block j of the second stage covers the columns
/// congruent to j modulo n2.
inline Eigen::Index two_stage_shared_column(std::size_t i, std::size_t j, std::size_t m1, std::size_t n2) {
  const std::size_t start = i * m1;
  const std::size_t c = start + (j + n2 - start % n2) % n2;
  return c < start + m1 ? static_cast<Eigen::Index>(c) : Eigen::Index{-1};
}

/// Columns of U (each up to a phase) from the two stage densities, via pairwise
/// eigen-subspace intersections.
inline ComplexMatrix two_stage_columns(const DensityMatrix& rho2_pre, const DensityMatrix& rho6_pre,
                                       std::size_t m1, std::size_t n2, Diagnostics* diag = nullptr,
                                       const Tolerances& tol = kTolerances) {
  if (m1 < 1 || n2 < 2) throw ArgumentError("two-stage: need m1 >= 1 and n2 >= 2");
  if (m1 > n2)
    throw ArgumentError("two-stage: multiplicity m1 = " + std::to_string(m1) +
                        " exceeds distinct-value count n2 = " + std::to_string(n2));
  const std::size_t d = m1 * n2;
  detail::expect_dim(rho2_pre.dim(), d, "two-stage (first density)");
  detail::expect_dim(rho6_pre.dim(), d, "two-stage (second density)");
  detail::expect_source(rho2_pre, Layout::two_stage_first(), "two-stage (first density)");
  detail::expect_source(rho6_pre, Layout::two_stage_second(), "two-stage (second density)");

  const auto block = static_cast<Eigen::Index>(m1);
  std::vector<ComplexMatrix> first_blocks, second_blocks;
  for (int stage = 0; stage < 2; ++stage) {
    const auto t0 = detail::Clock::now();
    const SortedEig eig = sorted_eigendecomposition(stage == 0 ? rho2_pre : rho6_pre, tol);
    StageDiagnostics sd{stage == 0 ? "first-stage" : "second-stage", eig.boundary_gap(m1), 0.0, 0};
    (stage == 0 ? first_blocks : second_blocks) = detail::block_bases(eig.vectors, block, sd.reorthonormalized_blocks, tol);
    sd.seconds = detail::seconds_since(t0);
    if (diag != nullptr) {
      diag->stages.push_back(sd);
      diag->non_hermitian_fallback = diag->non_hermitian_fallback || eig.non_hermitian_fallback;
    }
  }

  const auto t0 = detail::Clock::now();
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix columns = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < n2; ++i)
    for (std::size_t j = 0; j < n2; ++j) {
      const Eigen::Index c = two_stage_shared_column(i, j, m1, n2);
      if (c < 0) continue;
      columns.col(c) = canonical_directions_orthonormal(first_blocks[i], second_blocks[j], 1, tol).directions.col(0);
    }
  if (diag != nullptr) diag->stages.push_back({"intersections", kNoGap, detail::seconds_since(t0), 0});
  return columns;
}

/// Two-stage estimator. `mode` selects the plain estimator (None), projection onto the
/// nearest unitary before the phase step (BeforePhase), or after it (AfterPhase).
///
/// In BeforePhase mode the phase factors are reduced to unit modulus so the output stays
/// unitary.
inline ProcessEstimate eqpt_two_stage(const DensityMatrix& rho2_pre, const DensityMatrix& rho6_pre,
                                      const Ket& phi2_hat, std::size_t m1, std::size_t n2,
                                      Unitarization mode = Unitarization::None,
                                      const Tolerances& tol = kTolerances) {
  const auto t0 = detail::Clock::now();
  ProcessEstimate est;
  est.method = mode == Unitarization::None          ? Method::EQPT2
               : mode == Unitarization::BeforePhase ? Method::EQPT3
                                                    : Method::EQPT4;
  est.unitarization = mode;
  ComplexMatrix columns = two_stage_columns(rho2_pre, rho6_pre, m1, n2, &est.diagnostics, tol);
  const std::size_t d = m1 * n2;
  detail::expect_dim(phi2_hat.dim(), d, "two-stage (ket)");

  const auto t1 = detail::Clock::now();
  UnitaryProjectionReport report;
  if (mode == Unitarization::BeforePhase) columns = nearest_unitary(columns, &report, tol);
  est.matrix = resolve_phases_pure(columns, probe_ket(d), phi2_hat, mode == Unitarization::BeforePhase, tol);
  if (mode == Unitarization::AfterPhase) est.matrix = nearest_unitary(est.matrix, &report, tol);
  est.diagnostics.rank_deficient_projection = report.rank_deficient;
  est.diagnostics.stages.push_back({"phase", kNoGap, detail::seconds_since(t1), 0});
  est.diagnostics.unitarity_defect = unitarity_defect(est.matrix);
  est.diagnostics.seconds = detail::seconds_since(t0);
  return est;
}

namespace detail {

struct DichotomicLevel {
  std::vector<ComplexMatrix> halves;  // orthonormal bases of the two eigen-subspaces
};

inline void dichotomic_descend(const std::vector<DichotomicLevel>& levels, std::size_t level,
                               const ComplexMatrix* running, Eigen::Index offset, std::size_t d,
                               ComplexMatrix& out, std::size_t& leaves, const Tolerances& tol) {
  const std::size_t last = levels.size() - 1;
  const auto keep = static_cast<Eigen::Index>((d / 2) >> level);
  const auto span = static_cast<Eigen::Index>(d >> (level + 1));
  for (std::size_t h = 0; h < 2; ++h) {
    const ComplexMatrix& half = levels[level].halves[h];
    ComplexMatrix inter = running == nullptr
                              ? half
                              : canonical_directions_orthonormal(*running, half, keep, tol).directions;
    const Eigen::Index child = offset + static_cast<Eigen::Index>(h) * span;
    if (level < last) {
      dichotomic_descend(levels, level + 1, &inter, child, d, out, leaves, tol);
    } else {
      ComplexVector col = inter.col(0);
      canonicalize_direction(col, tol);
      out.col(child) = col;
      ++leaves;
    }
  }
}

}  // namespace detail

/// Columns of U (each up to a phase) from the dichotomic stage densities, one per level
/// 0 .. log2(d/2). Level l splits on bit (log2(d/2) - l) of the 0-based column index; the
/// recursion walks the bits from most to least significant so leaves come out in column
/// order.
inline ComplexMatrix dichotomic_columns(const std::vector<DensityMatrix>& rho_stages, std::size_t d,
                                        Diagnostics* diag = nullptr, std::size_t* leaf_count = nullptr,
                                        const Tolerances& tol = kTolerances) {
  if (!detail::is_power_of_two(d) || d < 8)
    throw ArgumentError("eqpt5: dimension must be a power of two, at least 8");
  const std::size_t level_count = multi_stage_level_count(d);
  if (rho_stages.size() != level_count)
    throw ArgumentError("eqpt5: expected " + std::to_string(level_count) + " stage densities, got " +
                        std::to_string(rho_stages.size()));

  const auto half = static_cast<Eigen::Index>(d / 2);
  std::vector<detail::DichotomicLevel> levels(level_count);
  for (std::size_t l = 0; l < level_count; ++l) {
    const auto t0 = detail::Clock::now();
    detail::expect_dim(rho_stages[l].dim(), d, "eqpt5 (stage density)");
    detail::expect_source(rho_stages[l], Layout::multi_stage(l), "eqpt5");
    const SortedEig eig = sorted_eigendecomposition(rho_stages[l], tol);
    StageDiagnostics sd{"level-" + std::to_string(l), eig.boundary_gap(d / 2), 0.0, 0};
    levels[l].halves = detail::block_bases(eig.vectors, half, sd.reorthonormalized_blocks, tol);
    sd.seconds = detail::seconds_since(t0);
    if (diag != nullptr) {
      diag->stages.push_back(sd);
      diag->non_hermitian_fallback = diag->non_hermitian_fallback || eig.non_hermitian_fallback;
    }
  }

  const auto t0 = detail::Clock::now();
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  std::size_t leaves = 0;
  detail::dichotomic_descend(levels, 0, nullptr, 0, d, out, leaves, tol);
  if (leaf_count != nullptr) *leaf_count = leaves;
  if (diag != nullptr) diag->stages.push_back({"intersections", kNoGap, detail::seconds_since(t0), 0});
  return out;
}

/// Dichotomic multi-stage estimator.
inline ProcessEstimate eqpt5(const std::vector<DensityMatrix>& rho_stages, const Ket& phi2_hat, std::size_t d,
                             const Tolerances& tol = kTolerances) {
  const auto t0 = detail::Clock::now();
  ProcessEstimate est;
  est.method = Method::EQPT5;
  const ComplexMatrix columns = dichotomic_columns(rho_stages, d, &est.diagnostics, nullptr, tol);
  detail::expect_dim(phi2_hat.dim(), d, "eqpt5 (ket)");
  const auto t1 = detail::Clock::now();
  est.matrix = resolve_phases_pure(columns, probe_ket(d), phi2_hat, false, tol);
  est.diagnostics.stages.push_back({"phase", kNoGap, detail::seconds_since(t1), 0});
  est.diagnostics.unitarity_defect = unitarity_defect(est.matrix);
  est.diagnostics.seconds = detail::seconds_since(t0);
  return est;
}

/// Phase removal with a known mixed probe rho5 (non-diagonal, first row free of zeros) and
/// the preprocessed estimate rho8_pre of its output:
///   u2 diag(conj(row_1(u2^H rho8_pre u2) ./ row_1(rho5))).
inline ComplexMatrix resolve_phases_mixed(const ComplexMatrix& u2, const DensityMatrix& rho5,
                                          const DensityMatrix& rho8_pre, const Tolerances& tol = kTolerances) {
  detail::require_square(u2, "resolve_phases_mixed");
  const auto d = static_cast<std::size_t>(u2.rows());
  detail::expect_dim(rho5.dim(), d, "resolve_phases_mixed (known input)");
  detail::expect_dim(rho8_pre.dim(), d, "resolve_phases_mixed (output estimate)");
  for (Eigen::Index k = 0; k < rho5.matrix.cols(); ++k)
    if (!(std::abs(rho5.matrix(0, k)) > tol.zero_component))
      throw ArgumentError("resolve_phases_mixed: first row of the known input has a zero entry at column " +
                          std::to_string(k + 1) + " (a diagonal input carries no phase information)");

  const Eigen::RowVectorXcd row = (u2.col(0).adjoint() * rho8_pre.matrix) * u2;
  ComplexVector factors(static_cast<Eigen::Index>(d));
  for (Eigen::Index k = 0; k < factors.size(); ++k) factors(k) = std::conj(row(k) / rho5.matrix(0, k));
  return u2 * factors.asDiagonal();
}

/// Single-stage estimator with mixed-state phase resolution.
inline ProcessEstimate eqpt1_mixed_phase(const DensityMatrix& rho2_pre, const DensityMatrix& rho5,
                                         const DensityMatrix& rho8_pre, const Tolerances& tol = kTolerances) {
  const auto t0 = detail::Clock::now();
  const std::size_t d = rho2_pre.dim();
  detail::expect_source(rho2_pre, Layout::single_stage(), "eqpt1_mixed_phase");
  ProcessEstimate est;
  est.method = Method::VariantH;
  const SortedEig eig = sorted_eigendecomposition(rho2_pre, tol);
  est.diagnostics.stages.push_back({"eigendecomposition", eig.boundary_gap(1), detail::seconds_since(t0), 0});
  const auto t1 = detail::Clock::now();
  detail::expect_dim(rho8_pre.dim(), d, "eqpt1_mixed_phase");
  est.matrix = resolve_phases_mixed(eig.vectors, rho5, rho8_pre, tol);
  est.diagnostics.stages.push_back({"phase", kNoGap, detail::seconds_since(t1), 0});
  est.diagnostics.unitarity_defect = unitarity_defect(est.matrix);
  est.diagnostics.seconds = detail::seconds_since(t0);
  return est;
}

/// Single-stage estimator for a known, non-diagonal input density rho1 with distinct
/// eigenvalues. With rho1 = V diag(l) V^H (sorted, unit-norm V) the eigendecomposition of
/// the output recovers U V up to column phases, which are removed against V^H psi1 before
/// V is divided out.
inline ProcessEstimate eqpt1_general_input(const DensityMatrix& rho1_known, const DensityMatrix& rho2_pre,
                                           const Ket& phi2_hat, const Tolerances& tol = kTolerances) {
  const auto t0 = detail::Clock::now();
  const std::size_t d = rho1_known.dim();
  detail::expect_dim(rho2_pre.dim(), d, "eqpt1_general_input (output density)");
  detail::expect_dim(phi2_hat.dim(), d, "eqpt1_general_input (ket)");

  const SortedEig input = sorted_eigendecomposition(rho1_known, tol);
  if (!(input.boundary_gap(1) > tol.repeated_eigenvalue))
    throw ArgumentError("eqpt1_general_input: known input density has repeated eigenvalues");
  const SortedEig output = sorted_eigendecomposition(rho2_pre, tol);

  ProcessEstimate est;
  est.method = Method::VariantG;
  est.diagnostics.stages.push_back({"eigendecomposition", output.boundary_gap(1), detail::seconds_since(t0), 0});

  const auto t1 = detail::Clock::now();
  const Ket psi1 = probe_ket(d);
  const ComplexVector reference = input.vectors.adjoint() * psi1.amplitudes;
  for (Eigen::Index k = 0; k < reference.size(); ++k)
    if (!(std::abs(reference(k)) > tol.zero_component))
      throw ArgumentError("eqpt1_general_input: probe ket is orthogonal to input eigenvector " +
                          std::to_string(k + 1));
  const ComplexVector projected = output.vectors.adjoint() * phi2_hat.amplitudes;
  const ComplexVector factors = projected.cwiseQuotient(reference);
  est.matrix = output.vectors * factors.asDiagonal() * input.vectors.adjoint();
  est.diagnostics.stages.push_back({"phase", kNoGap, detail::seconds_since(t1), 0});
  est.diagnostics.unitarity_defect = unitarity_defect(est.matrix);
  est.diagnostics.seconds = detail::seconds_since(t0);
  return est;
}

}  // namespace eqpt
