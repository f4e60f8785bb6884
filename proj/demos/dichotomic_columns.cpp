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


// Shows which columns of U each dichotomic stage separates for d = 8, and checks that the
// recursion recovers every column in place.

#include <cstdio>

#include "eqpt/eqpt.hpp"

int main() {
  using namespace eqpt;
  const std::size_t d = 8;
  for (std::size_t l = 0; l < multi_stage_level_count(d); ++l) {
    std::printf("level %zu:", l);
    for (std::size_t half : {1, 2}) {
      std::printf("  {");
      const auto cols = multi_stage_column_subset(d, l, half);
      for (std::size_t i = 0; i < cols.size(); ++i) std::printf(i ? ",%zu" : "%zu", cols[i]);
      std::printf("}");
    }
    std::printf("\n");
  }

  const ComplexMatrix u = random_unitary(d, 99, UnitaryMode::ComplexGinibre);
  std::vector<DensityMatrix> stages;
  for (std::size_t l = 0; l < multi_stage_level_count(d); ++l)
    stages.push_back(hermitian_unit_trace(apply_process_density(u, multi_stage_density(d, l))));
  const ComplexMatrix cols = dichotomic_columns(stages, d);
  for (Eigen::Index c = 0; c < cols.cols(); ++c)
    std::printf("column %ld: |<estimate, U>| = %.15f\n", static_cast<long>(c + 1), std::abs(cols.col(c).dot(u.col(c))));
}
