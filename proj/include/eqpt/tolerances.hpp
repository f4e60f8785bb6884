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

#pragma once

namespace eqpt {

/// Numerical thresholds shared across the library. Every contract check reads from here.
struct Tolerances {
  /// Relative eigen/SVD reconstruction residual, scaled by ||A||_F.
  double reconstruction = 1e-10;
  /// Unitarity of generated or projected matrices.
  double unitarity = 1e-12;
  /// Relative anti-Hermitian part accepted as "Hermitian" by the eigensolver.
  double hermitian_asymmetry = 1e-12;
  /// Below this, norms and traces count as zero.
  double zero_norm = 1e-12;
  /// Below this, entries of a probe ket (or of a phase-reference row) count as zero.
  double zero_component = 1e-12;
  /// sigma_min / sigma_max below this flags a rank-deficient matrix.
  double rank_ratio = 1e-14;
  /// Gram defect of an eigen-block that triggers re-orthonormalization.
  double block_gram_defect = 1e-8;
  /// Eigenvalues of a known input density closer than this are "repeated".
  double repeated_eigenvalue = 1e-10;
};

inline constexpr Tolerances kTolerances{};

}  // namespace eqpt
