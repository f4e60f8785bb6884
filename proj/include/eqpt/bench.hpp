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

// Accuracy metrics, simulated trials and parameter sweeps.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "eqpt/estimators.hpp"
#include "eqpt/qst.hpp"
#include "eqpt/states.hpp"

namespace eqpt {

/// Phase-minimized normalized squared error:
///   min_theta ||U - e^{i theta} U_hat||_F^2 / (2d)
///   = (||U||_F^2 + ||U_hat||_F^2 - 2 |Tr(U^H U_hat)|) / (2d).
/// Evaluated as the norm of the phase-aligned difference, which avoids the cancellation
/// of the expanded form near zero.
inline double nmse(const ComplexMatrix& u, const ComplexMatrix& u_hat) {
  if (u.rows() != u_hat.rows() || u.cols() != u_hat.cols())
    throw DimensionError("nmse: matrix dimensions differ");
  const double d = static_cast<double>(u.rows());
  const Complex overlap = (u.conjugate().cwiseProduct(u_hat)).sum();
  const double mag = std::abs(overlap);
  const Complex align = mag > 0.0 ? std::conj(overlap) / mag : Complex(1.0, 0.0);
  return (u - align * u_hat).squaredNorm() / (2.0 * d);
}

inline double nrmse(const ComplexMatrix& u, const ComplexMatrix& u_hat) {
  return std::sqrt(nmse(u, u_hat));
}

/// Parses "eqpt1".."eqpt5", "variant-g", "variant-h" (case-sensitive).
inline std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::EQPT1, Method::EQPT2, Method::EQPT3, Method::EQPT4, Method::EQPT5, Method::VariantG,
                   Method::VariantH})
    if (to_string(m) == name) return m;
  return std::nullopt;
}

/// Empty when (method, qubits) is a valid combination, otherwise the reason it is not.
inline std::string method_dimension_problem(Method method, std::size_t qubits) {
  if (qubits < 1) return "at least one qubit is required";
  if (qubits > 30) return "qubit count too large";
  switch (method) {
    case Method::EQPT2:
    case Method::EQPT3:
    case Method::EQPT4:
      if (qubits % 2 != 0) return std::string(to_string(method)) + " needs an even qubit count (d = m^2)";
      break;
    case Method::EQPT5:
      if (qubits < 3) return "eqpt5 needs at least 3 qubits";
      break;
    default:
      break;
  }
  return {};
}

struct TrialRecord {
  Method method = Method::EQPT1;
  std::size_t qubits = 0;
  std::size_t dimension = 0;
  double width = 0.0;
  std::uint64_t seed = 0;
  double nrmse = 0.0;
  double wall_time = 0.0;   ///< estimator only
  double total_time = 0.0;  ///< data generation + estimator
  Diagnostics diagnostics;
};

/// Known mixed probe used by the mixed-state phase variant: half uniform superposition,
/// half maximally mixed. Every entry of its first row is nonzero.
inline DensityMatrix mixed_phase_probe(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  DensityMatrix rho;
  const double inv = 1.0 / static_cast<double>(d);
  rho.matrix = 0.5 * ComplexMatrix::Constant(n, n, Complex(inv, 0.0)) +
               0.5 * inv * ComplexMatrix::Identity(n, n);
  rho.layout = Layout::external();
  return rho;
}

/// Known non-diagonal input for the general-input variant: V diag(r) V^H with the
/// single-stage spectrum r and a random unitary V.
inline DensityMatrix general_input_density(std::size_t d, std::uint64_t seed) {
  const DensityMatrix diag = single_stage_density(d);
  DensityMatrix rho = apply_process_density(random_unitary(d, seed), diag);
  rho.source.reset();
  return rho;
}

namespace detail {

// Noise stream tags; each noisy estimate in a trial draws from its own child seed.
enum NoiseTag : std::uint64_t {
  kKetNoise = 1,
  kDensityNoise = 2,
  kInputRotation = 3,
};

inline std::uint64_t child_seed(std::uint64_t seed, NoiseTag tag, std::uint64_t index = 0) {
  return rng::hash_combine({seed, static_cast<std::uint64_t>(tag), index});
}

inline DensityMatrix observe_density(const ComplexMatrix& u, const DensityMatrix& input, double width,
                                     std::uint64_t seed, std::uint64_t index) {
  const DensityMatrix exact = apply_process_density(u, input);
  return hermitian_unit_trace(noisy_density(exact, {width, child_seed(seed, kDensityNoise, index)}),
                              exact.source);
}

inline std::size_t integer_sqrt(std::size_t x) {
  auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(x)));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

}  // namespace detail

/// Simulates one tomography experiment: draws U from `seed`, builds the method's inputs,
/// propagates them, applies the noise model and preprocessing, then runs the estimator.
/// `unitary` overrides the drawn process when given; `estimate` receives U_hat.
inline TrialRecord run_trial(Method method, std::size_t qubits, double width, std::uint64_t seed,
                             const ComplexMatrix* unitary = nullptr, ComplexMatrix* estimate = nullptr) {
  if (const std::string problem = method_dimension_problem(method, qubits); !problem.empty())
    throw ArgumentError("run_trial: " + problem);
  if (!(width >= 0.0) || !std::isfinite(width)) throw ArgumentError("run_trial: noise width must be >= 0");
  const auto t0 = detail::Clock::now();
  const std::size_t d = std::size_t{1} << qubits;

  TrialRecord rec;
  rec.method = method;
  rec.qubits = qubits;
  rec.dimension = d;
  rec.width = width;
  rec.seed = seed;

  ComplexMatrix u;
  if (unitary != nullptr) {
    detail::expect_dim(static_cast<std::size_t>(unitary->rows()), d, "run_trial (process)");
    u = *unitary;
  } else {
    u = random_unitary(d, seed);
  }

  const Ket phi2_hat = normalize_ket(
      noisy_ket(apply_process_ket(u, probe_ket(d)), {width, detail::child_seed(seed, detail::kKetNoise)}));

  ProcessEstimate est;
  double estimator_seconds = 0.0;
  auto timed = [&](auto&& run) {
    const auto ts = detail::Clock::now();
    est = run();
    estimator_seconds = detail::seconds_since(ts);
  };

  switch (method) {
    case Method::EQPT1: {
      const DensityMatrix rho2 = detail::observe_density(u, single_stage_density(d), width, seed, 0);
      timed([&] { return eqpt1(rho2, phi2_hat, d); });
      break;
    }
    case Method::EQPT2:
    case Method::EQPT3:
    case Method::EQPT4: {
      const std::size_t m = detail::integer_sqrt(d);
      const auto [first, second] = two_stage_densities(m, m);
      const DensityMatrix rho2 = detail::observe_density(u, first, width, seed, 0);
      const DensityMatrix rho6 = detail::observe_density(u, second, width, seed, 1);
      const Unitarization mode = method == Method::EQPT2   ? Unitarization::None
                                 : method == Method::EQPT3 ? Unitarization::BeforePhase
                                                           : Unitarization::AfterPhase;
      timed([&] { return eqpt_two_stage(rho2, rho6, phi2_hat, m, m, mode); });
      break;
    }
    case Method::EQPT5: {
      std::vector<DensityMatrix> stages;
      for (std::size_t l = 0; l < multi_stage_level_count(d); ++l)
        stages.push_back(detail::observe_density(u, multi_stage_density(d, l), width, seed, l));
      timed([&] { return eqpt5(stages, phi2_hat, d); });
      break;
    }
    case Method::VariantG: {
      const DensityMatrix rho1 = general_input_density(d, detail::child_seed(seed, detail::kInputRotation));
      const DensityMatrix rho2 = detail::observe_density(u, rho1, width, seed, 0);
      timed([&] { return eqpt1_general_input(rho1, rho2, phi2_hat); });
      break;
    }
    case Method::VariantH: {
      const DensityMatrix rho2 = detail::observe_density(u, single_stage_density(d), width, seed, 0);
      const DensityMatrix rho5 = mixed_phase_probe(d);
      const DensityMatrix rho8 = detail::observe_density(u, rho5, width, seed, 1);
      timed([&] { return eqpt1_mixed_phase(rho2, rho5, rho8); });
      break;
    }
  }

  rec.nrmse = nrmse(u, est.matrix);
  rec.wall_time = estimator_seconds;
  rec.diagnostics = std::move(est.diagnostics);
  if (estimate != nullptr) *estimate = std::move(est.matrix);
  rec.total_time = detail::seconds_since(t0);
  return rec;
}

struct SweepConfig {
  std::vector<Method> methods;
  std::vector<std::size_t> qubits;
  std::vector<double> widths;
  std::size_t trials = 1;
  std::uint64_t base_seed = 0;
  std::size_t jobs = 1;
  bool timing = true;  ///< false: wall time is not reported (fully reproducible output)
};

struct SweepCell {
  Method method = Method::EQPT1;
  std::size_t qubits = 0;
  std::size_t dimension = 0;
  double width = 0.0;
  std::size_t trials = 0;
  double mean_nrmse = 0.0;
  double std_nrmse = 0.0;  ///< sample standard deviation (0 for a single trial)
  double mean_time = 0.0;
  double median_time = 0.0;
  double p90_time = 0.0;
  std::vector<TrialRecord> records;  ///< in trial order
};

/// Seed of trial `trial` in the (qubits, width-index) cell. The method is deliberately not
/// part of the key, so every method sees the same processes and trials are paired.
inline std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t qubits, std::size_t width_index,
                                std::size_t trial) {
  return rng::hash_combine({base_seed, 0x51ULL, qubits, width_index, trial});
}

inline double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

/// Nearest-rank percentile, p in [0, 100].
inline double percentile_of(std::vector<double> xs, double p) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(xs.size())));
  return xs[std::clamp<std::size_t>(rank, 1, xs.size()) - 1];
}

inline void summarize(SweepCell& cell) {
  std::vector<double> errs, times;
  for (const auto& r : cell.records) {
    errs.push_back(r.nrmse);
    times.push_back(r.wall_time);
  }
  cell.trials = cell.records.size();
  cell.mean_nrmse = mean_of(errs);
  double ss = 0.0;
  for (double e : errs) ss += (e - cell.mean_nrmse) * (e - cell.mean_nrmse);
  cell.std_nrmse = errs.size() > 1 ? std::sqrt(ss / static_cast<double>(errs.size() - 1)) : 0.0;
  cell.mean_time = mean_of(times);
  cell.median_time = percentile_of(times, 50.0);
  cell.p90_time = percentile_of(times, 90.0);
}

/// Runs every (method, qubits, width) cell. Trials run on `jobs` threads; results are
/// stored by index and reduced in trial order, so the output does not depend on `jobs`.
inline std::vector<SweepCell> sweep(const SweepConfig& config) {
  if (config.trials < 1) throw ArgumentError("sweep: trials must be at least 1");
  for (Method m : config.methods)
    for (std::size_t q : config.qubits)
      if (const std::string problem = method_dimension_problem(m, q); !problem.empty())
        throw ArgumentError("sweep: " + std::string(to_string(m)) + " at " + std::to_string(q) +
                            " qubits: " + problem);

  struct Task {
    std::size_t cell;
    std::size_t trial;
    std::uint64_t seed;
  };
  std::vector<SweepCell> cells;
  std::vector<Task> tasks;
  for (Method m : config.methods)
    for (std::size_t q : config.qubits)
      for (std::size_t wi = 0; wi < config.widths.size(); ++wi) {
        SweepCell cell;
        cell.method = m;
        cell.qubits = q;
        cell.dimension = std::size_t{1} << q;
        cell.width = config.widths[wi];
        cell.records.resize(config.trials);
        for (std::size_t t = 0; t < config.trials; ++t)
          tasks.push_back({cells.size(), t, trial_seed(config.base_seed, q, wi, t)});
        cells.push_back(std::move(cell));
      }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& task = tasks[i];
      SweepCell& cell = cells[task.cell];
      try {
        cell.records[task.trial] = run_trial(cell.method, cell.qubits, cell.width, task.seed);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = tasks.size();
      }
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(config.jobs, tasks.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (auto& cell : cells) {
    if (!config.timing)
      for (auto& r : cell.records) r.wall_time = r.total_time = 0.0;
    summarize(cell);
  }
  return cells;
}

/// One-sided exact binomial sign test: P(X >= wins) for X ~ Bin(n, 1/2).
inline double sign_test_p_value(std::size_t wins, std::size_t n) {
  // log-space to stay finite for large n
  double p = 0.0;
  for (std::size_t k = wins; k <= n; ++k) {
    const double log_term = std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
                            std::lgamma(static_cast<double>(n - k) + 1.0) - static_cast<double>(n) * std::log(2.0);
    p += std::exp(log_term);
  }
  return std::min(1.0, p);
}

}  // namespace eqpt
