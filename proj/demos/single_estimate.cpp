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


// Simulates single-stage tomography of a random 3-qubit process and prints the error.

#include <cstdio>

#include "eqpt/eqpt.hpp"

int main() {
  using namespace eqpt;
  const std::size_t d = 8;
  const ComplexMatrix u = random_unitary(d, 2024);

  const double w = 1e-3;
  const DensityMatrix rho2 = hermitian_unit_trace(
      noisy_density(apply_process_density(u, single_stage_density(d)), {w, 1}),
      Layout::single_stage());
  const Ket phi2 = normalize_ket(noisy_ket(apply_process_ket(u, probe_ket(d)), {w, 2}));

  const ProcessEstimate est = eqpt1(rho2, phi2, d);
  std::printf("d = %zu, w = %g\n", d, w);
  std::printf("NRMSE            %.3e\n", nrmse(u, est.matrix));
  std::printf("smallest gap     %.3e\n", est.diagnostics.min_gap());
  std::printf("unitarity defect %.3e\n", est.diagnostics.unitarity_defect);
}
