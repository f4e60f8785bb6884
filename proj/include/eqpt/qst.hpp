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

// State-tomography error model and the preprocessing that restores known structure.
//
// Noise is entry-wise and keyed: the fluctuation of entry (k, l) is drawn from its own
// counter stream, so (input, NoiseSpec) fully determines the output.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

#include "eqpt/states.hpp"

namespace eqpt {

/// Real and imaginary fluctuations are each uniform on [-width/2, width/2]
/// (variance width^2 / 12).
struct NoiseSpec {
  double width = 0.0;
  std::uint64_t seed = 0;
};

namespace detail {

inline void check_noise(const NoiseSpec& noise) {
  if (!(noise.width >= 0.0) || !std::isfinite(noise.width))
    throw ArgumentError("noise width must be finite and nonnegative");
}

// Counter layout per entry: 0 -> real part, 1 -> imaginary part.
inline std::pair<double, double> entry_fluctuation(const rng::CounterStream& s, std::uint64_t entry,
                                                   double half_width) {
  return {s.uniform(entry, 0, -half_width, half_width), s.uniform(entry, 1, -half_width, half_width)};
}

}  // namespace detail

/// Adds independent complex fluctuations to every amplitude. Not renormalized.
inline Ket noisy_ket(const Ket& psi, const NoiseSpec& noise) {
  detail::check_noise(noise);
  if (noise.width == 0.0) return psi;
  const rng::CounterStream stream(noise.seed);
  const double half = noise.width / 2.0;
  Ket out = psi;
  for (Eigen::Index k = 0; k < out.amplitudes.size(); ++k) {
    const auto [re, im] = detail::entry_fluctuation(stream, static_cast<std::uint64_t>(k), half);
    out.amplitudes(k) += Complex(re, im);
  }
  return out;
}

/// Entry-wise density estimate model:
///   rho_kl + 2 sqrt|rho_kl| eR + eR^2 + i (2 sqrt|rho_kl| eI + eI^2).
/// Entries (k, l) and (l, k) fluctuate independently, so the result is generally neither
/// Hermitian nor unit-trace.
inline ComplexMatrix noisy_density(const DensityMatrix& rho, const NoiseSpec& noise) {
  detail::check_noise(noise);
  if (noise.width == 0.0) return rho.matrix;
  const rng::CounterStream stream(noise.seed);
  const double half = noise.width / 2.0;
  const Eigen::Index n = rho.matrix.rows();
  ComplexMatrix out = rho.matrix;
  for (Eigen::Index c = 0; c < rho.matrix.cols(); ++c)
    for (Eigen::Index r = 0; r < n; ++r) {
      const auto entry = static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(rho.matrix.cols()) +
                         static_cast<std::uint64_t>(c);
      const auto [er, ei] = detail::entry_fluctuation(stream, entry, half);
      const double root = 2.0 * std::sqrt(std::abs(rho.matrix(r, c)));
      out(r, c) += Complex(root * er + er * er, root * ei + ei * ei);
    }
  return out;
}

/// (A + A^H)/2 divided by its trace. `source` is carried over for stage validation.
inline DensityMatrix hermitian_unit_trace(const ComplexMatrix& rho_hat,
                                          std::optional<Layout> source = std::nullopt,
                                          const Tolerances& tol = kTolerances) {
  detail::require_square(rho_hat, "hermitian_unit_trace");
  ComplexMatrix herm = 0.5 * (rho_hat + rho_hat.adjoint());
  const double trace = herm.trace().real();
  if (!(std::abs(trace) > tol.zero_norm))
    throw NumericalError("hermitian_unit_trace: trace of the Hermitian part is numerically zero");
  herm /= trace;
  // Diagonal of a Hermitian matrix is real; drop rounding residue.
  for (Eigen::Index k = 0; k < herm.rows(); ++k) herm(k, k) = herm(k, k).real();
  DensityMatrix out;
  out.matrix = std::move(herm);
  out.layout = Layout::external();
  out.source = source;
  return out;
}

inline DensityMatrix hermitian_unit_trace(const DensityMatrix& rho_hat, const Tolerances& tol = kTolerances) {
  return hermitian_unit_trace(rho_hat.matrix, rho_hat.source, tol);
}

inline Ket normalize_ket(const Ket& psi_hat, const Tolerances& tol = kTolerances) {
  const double n = psi_hat.norm();
  if (!(n > tol.zero_norm)) throw NumericalError("normalize_ket: norm is numerically zero");
  return {psi_hat.amplitudes / n};
}

}  // namespace eqpt
