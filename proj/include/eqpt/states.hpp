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

// Input states for the estimators and their propagation through a unitary process.
//
// All constructed densities are diagonal. Their diagonal values are equally spaced
// multiples of a common step (zero excluded), which maximizes the gap between adjacent
// eigenvalues for a given number of distinct values.

#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eqpt/linalg.hpp"

namespace eqpt {

/// Which structured input a density matrix is (or was propagated from).
struct Layout {
  enum class Kind { SingleStage, TwoStageFirst, TwoStageSecond, MultiStage, External };

  Kind kind = Kind::External;
  std::size_t level = 0;  ///< MultiStage only

  static constexpr Layout single_stage() { return {Kind::SingleStage, 0}; }
  static constexpr Layout two_stage_first() { return {Kind::TwoStageFirst, 0}; }
  static constexpr Layout two_stage_second() { return {Kind::TwoStageSecond, 0}; }
  static constexpr Layout multi_stage(std::size_t level) { return {Kind::MultiStage, level}; }
  static constexpr Layout external() { return {Kind::External, 0}; }

  friend bool operator==(const Layout&, const Layout&) = default;
};

inline std::string to_string(const Layout& layout) {
  switch (layout.kind) {
    case Layout::Kind::SingleStage: return "single-stage";
    case Layout::Kind::TwoStageFirst: return "two-stage-first";
    case Layout::Kind::TwoStageSecond: return "two-stage-second";
    case Layout::Kind::MultiStage: return "multi-stage[" + std::to_string(layout.level) + "]";
    case Layout::Kind::External: return "external";
  }
  return "unknown";
}

/// Density operator plus structural metadata.
///
/// `layout` describes this matrix itself. `source` records the constructed input layout a
/// propagated (External) matrix descends from, so estimators can check that each stage was
/// fed the right probe.
struct DensityMatrix {
  ComplexMatrix matrix;
  Layout layout = Layout::external();
  std::optional<Layout> source;

  std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
};

struct Ket {
  ComplexVector amplitudes;

  std::size_t dim() const { return static_cast<std::size_t>(amplitudes.size()); }
  double norm() const { return amplitudes.norm(); }
};

/// Equally spaced decreasing values 2(n - k + 1) / (d (n + 1)), k = 1..n.
inline std::vector<double> uniform_gap_values(std::size_t n, std::size_t d) {
  std::vector<double> values(n);
  const double denom = static_cast<double>(d) * static_cast<double>(n + 1);
  for (std::size_t k = 1; k <= n; ++k) values[k - 1] = 2.0 * static_cast<double>(n - k + 1) / denom;
  return values;
}

namespace detail {

inline DensityMatrix diagonal_density(const std::vector<double>& diag, Layout layout) {
  const auto n = static_cast<Eigen::Index>(diag.size());
  DensityMatrix rho;
  rho.matrix = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) rho.matrix(k, k) = diag[static_cast<std::size_t>(k)];
  rho.layout = layout;
  return rho;
}

inline bool is_power_of_two(std::size_t x) { return x != 0 && std::has_single_bit(x); }

}  // namespace detail

/// Single-stage input: d distinct eigenvalues, strictly decreasing along the diagonal.
inline DensityMatrix single_stage_density(std::size_t d) {
  if (d < 2) throw ArgumentError("single_stage_density: dimension must be at least 2");
  return detail::diagonal_density(uniform_gap_values(d, d), Layout::single_stage());
}

/// Two-stage inputs with d = m1 * n2: first = diag(r) (x) I_m1, second = I_m1 (x) diag(r).
///
/// The estimator requires m1 <= n2; larger multiplicities are only warned about here since
/// the same construction is reused elsewhere.
inline std::pair<DensityMatrix, DensityMatrix> two_stage_densities(std::size_t m1, std::size_t n2) {
  if (m1 < 1) throw ArgumentError("two_stage_densities: multiplicity must be at least 1");
  if (n2 < 2) throw ArgumentError("two_stage_densities: need at least 2 distinct values");
  if (m1 > n2)
    std::cerr << "warning: two_stage_densities: multiplicity " << m1 << " exceeds distinct-value count "
              << n2 << "; two-stage intersections will not cover every column\n";
  const std::size_t d = m1 * n2;
  const std::vector<double> r = uniform_gap_values(n2, d);
  std::vector<double> first(d), second(d);
  for (std::size_t i = 0; i < n2; ++i)
    for (std::size_t j = 0; j < m1; ++j) {
      first[i * m1 + j] = r[i];
      second[j * n2 + i] = r[i];
    }
  return {detail::diagonal_density(first, Layout::two_stage_first()),
          detail::diagonal_density(second, Layout::two_stage_second())};
}

/// Number of multi-stage levels for dimension d (levels 0 .. log2(d/2)).
inline std::size_t multi_stage_level_count(std::size_t d) {
  return static_cast<std::size_t>(std::bit_width(d / 2));
}

/// Dichotomic multi-stage input I_{2^level} (x) diag(g1, g2) (x) I_{d / 2^(level+1)}.
inline DensityMatrix multi_stage_density(std::size_t d, std::size_t level) {
  if (!detail::is_power_of_two(d) || d < 8)
    throw ArgumentError("multi_stage_density: dimension must be a power of two, at least 8");
  if (level >= multi_stage_level_count(d))
    throw ArgumentError("multi_stage_density: level " + std::to_string(level) + " out of range");
  const std::vector<double> gamma = uniform_gap_values(2, d);
  const std::size_t blocks = std::size_t{1} << level;
  const std::size_t block_size = (d / 2) / blocks;
  std::vector<double> diag;
  diag.reserve(d);
  for (std::size_t b = 0; b < blocks; ++b)
    for (double g : gamma) diag.insert(diag.end(), block_size, g);
  return detail::diagonal_density(diag, Layout::multi_stage(level));
}

/// 1-based column indices of U tied to eigen-subspace `half` (1 = larger eigenvalue,
/// 2 = smaller) at the given dichotomic level. Equivalently: the indices whose 0-based
/// binary representation has bit (log2(d/2) - level) equal to half - 1.
inline std::vector<std::size_t> multi_stage_column_subset(std::size_t d, std::size_t level,
                                                          std::size_t half) {
  if (half != 1 && half != 2) throw ArgumentError("multi_stage_column_subset: half must be 1 or 2");
  const DensityMatrix rho = multi_stage_density(d, level);
  const double target = uniform_gap_values(2, d)[half - 1];
  std::vector<std::size_t> cols;
  for (std::size_t c = 0; c < d; ++c)
    if (rho.matrix(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c)).real() == target)
      cols.push_back(c + 1);
  return cols;
}

/// Probe ket with all amplitudes 1/sqrt(d).
inline Ket probe_ket(std::size_t d) {
  if (d < 1) throw ArgumentError("probe_ket: dimension must be at least 1");
  const auto n = static_cast<Eigen::Index>(d);
  return {ComplexVector::Constant(n, Complex(1.0 / std::sqrt(static_cast<double>(d)), 0.0))};
}

/// U rho U^H. The result is External; its `source` remembers the constructed layout.
inline DensityMatrix apply_process_density(const ComplexMatrix& u, const DensityMatrix& rho) {
  detail::require_square(u, "apply_process_density");
  if (u.rows() != rho.matrix.rows() || rho.matrix.rows() != rho.matrix.cols())
    throw DimensionError("apply_process_density: process and density dimensions differ");
  DensityMatrix out;
  if (rho.matrix.isDiagonal(0.0)) {
    // U diag(p) U^H without the full triple product.
    ComplexMatrix scaled = u;
    for (Eigen::Index k = 0; k < u.cols(); ++k) scaled.col(k) *= rho.matrix(k, k);
    out.matrix.noalias() = scaled * u.adjoint();
  } else {
    out.matrix.noalias() = u * rho.matrix * u.adjoint();
  }
  out.layout = Layout::external();
  out.source = rho.layout.kind == Layout::Kind::External ? rho.source : std::optional<Layout>(rho.layout);
  return out;
}

inline Ket apply_process_ket(const ComplexMatrix& u, const Ket& psi) {
  detail::require_square(u, "apply_process_ket");
  if (u.cols() != psi.amplitudes.size())
    throw DimensionError("apply_process_ket: process and ket dimensions differ");
  return {u * psi.amplitudes};
}

}  // namespace eqpt
