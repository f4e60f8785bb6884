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


// Paired comparison of the single-stage and two-stage estimators over a few noise levels.

#include <cstdio>

#include "eqpt/eqpt.hpp"

int main() {
  using namespace eqpt;
  SweepConfig config;
  config.methods = {Method::EQPT1, Method::EQPT2, Method::EQPT3, Method::EQPT4};
  config.qubits = {4, 6};
  config.widths = {1e-4, 1e-3, 1e-2};
  config.trials = 20;
  config.base_seed = 7;
  config.timing = false;

  const auto cells = sweep(config);
  std::printf("%-8s %6s %8s %12s\n", "method", "qubits", "width", "mean NRMSE");
  for (const auto& c : cells)
    std::printf("%-8s %6zu %8g %12.4e\n", std::string(to_string(c.method)).c_str(), c.qubits, c.width, c.mean_nrmse);
}
