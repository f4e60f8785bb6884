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


// Shared fixtures for the unit tests.

#pragma once

#include <cstdint>

#include "eqpt/eqpt.hpp"

namespace eqpt::test {

inline ComplexMatrix basis(std::size_t d, std::size_t k) {
  ComplexMatrix e = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), 1);
  e(static_cast<Eigen::Index>(k), 0) = 1.0;
  return e;
}

/// Entries with independent standard normal real and imaginary parts.
inline ComplexMatrix random_complex(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  rng::SequentialStream s(seed);
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double re = s.normal();
      m(r, c) = Complex(re, s.normal());
    }
  return m;
}

inline ComplexMatrix random_hermitian(std::size_t d, std::uint64_t seed) {
  const ComplexMatrix a = random_complex(d, d, seed);
  return 0.5 * (a + a.adjoint());
}

inline ComplexMatrix permutation_matrix(const std::vector<std::size_t>& perm) {
  const auto n = static_cast<Eigen::Index>(perm.size());
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  for (Eigen::Index c = 0; c < n; ++c) p(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(c)]), c) = 1.0;
  return p;
}

/// Noiseless inputs for one estimator run, built directly from U.
struct Exact {
  ComplexMatrix u;
  std::size_t d;

  Ket phi2() const { return apply_process_ket(u, probe_ket(d)); }
  DensityMatrix out(const DensityMatrix& in) const { return hermitian_unit_trace(apply_process_density(u, in)); }
};

}  // namespace eqpt::test
