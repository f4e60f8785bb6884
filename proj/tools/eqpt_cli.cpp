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

// eqpt: single estimations, benchmark sweeps and a short demo.
//
//   eqpt estimate --method eqpt2 --qubits 4 --width 1e-3 --seed 7 --output u.txt
//   eqpt bench --config sweep.cfg --csv out.csv --svg out.svg --jobs 4
//   eqpt demo

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "eqpt/eqpt.hpp"
#include "eqpt/manifest.hpp"

namespace {

enum ExitCode : int { kOk = 0, kUsage = 2, kParse = 3, kNumerical = 4, kIo = 5 };

struct UsageError : eqpt::Error {
  using eqpt::Error::Error;
};

eqpt::Method require_method(const std::string& name) {
  const auto m = eqpt::parse_method(name);
  if (!m) throw UsageError("unknown method '" + name + "' (expected eqpt1..eqpt5, variant-g, variant-h)");
  return *m;
}

std::string command_line(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) s += (i ? " " : "") + std::string(argv[i]);
  return s;
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* env = std::getenv("EQPT_SEED");
  if (env == nullptr || *env == '\0') return fallback;
  std::uint64_t value = 0;
  const std::string s(env);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw UsageError("EQPT_SEED must be an unsigned integer, got '" + s + "'");
  return value;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw eqpt::IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw eqpt::IoError("failed writing '" + path + "'");
}

struct EstimateArgs {
  std::string method;
  std::size_t qubits = 0;
  double width = 0.0;
  std::uint64_t seed = 0;
  std::string unitary;
  std::string output;
};

int run_estimate(const EstimateArgs& a, const std::string& command) {
  const eqpt::Method method = require_method(a.method);
  if (const std::string problem = eqpt::method_dimension_problem(method, a.qubits); !problem.empty())
    throw UsageError(problem);
  const std::uint64_t seed = seed_from_env(a.seed);

  eqpt::ComplexMatrix u;
  const eqpt::ComplexMatrix* given = nullptr;
  if (!a.unitary.empty()) {
    u = eqpt::io::load_matrix(a.unitary);
    if (static_cast<std::size_t>(u.rows()) != (std::size_t{1} << a.qubits))
      throw UsageError("matrix file dimension " + std::to_string(u.rows()) + " does not match 2^" +
                       std::to_string(a.qubits));
    given = &u;
  }

  eqpt::ComplexMatrix u_hat;
  const eqpt::TrialRecord rec = eqpt::run_trial(method, a.qubits, a.width, seed, given, &u_hat);

  std::cout << "method " << eqpt::to_string(method) << "  qubits " << a.qubits << "  width "
            << eqpt::io::format_number(a.width, 10) << "  seed " << seed << "\n";
  std::cout << "nrmse " << eqpt::io::format_number(rec.nrmse, 10) << "  estimator time "
            << eqpt::io::format_number(rec.wall_time, 4) << " s\n";

  if (!a.output.empty()) {
    eqpt::io::save_matrix(a.output, u_hat);
    nlohmann::json result{{"method", std::string(eqpt::to_string(method))},
                          {"qubits", a.qubits},
                          {"dimension", rec.dimension},
                          {"width", a.width},
                          {"seed", seed},
                          {"nrmse", rec.nrmse},
                          {"wall_time_s", rec.wall_time},
                          {"diagnostics", eqpt::to_json(rec.diagnostics)}};
    eqpt::save_json(a.output + ".json", result);
    eqpt::RunManifest manifest{command,
                               {{"method", a.method},
                                {"qubits", a.qubits},
                                {"width", a.width},
                                {"seed", seed},
                                {"unitary", a.unitary}},
                               std::string(eqpt::kVersion),
                               seed,
                               eqpt::utc_timestamp()};
    eqpt::save_json(a.output + ".manifest.json", eqpt::to_json(manifest));
  }
  return kOk;
}

struct BenchArgs {
  std::string config;
  std::vector<std::string> methods;
  std::vector<std::size_t> qubits;
  std::vector<double> widths;
  std::size_t trials = 0;
  std::size_t jobs = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string timing;
  std::string csv;
  std::string svg;
};

void print_table(const std::vector<eqpt::SweepCell>& cells, bool timing) {
  std::cout << std::left << std::setw(10) << "method" << std::right << std::setw(7) << "qubits" << std::setw(12)
            << "width" << std::setw(8) << "trials" << std::setw(16) << "mean_nrmse" << std::setw(16)
            << "std_nrmse";
  if (timing) std::cout << std::setw(14) << "mean_time_s";
  std::cout << '\n';
  for (const auto& c : cells) {
    std::cout << std::left << std::setw(10) << eqpt::to_string(c.method) << std::right << std::setw(7) << c.qubits
              << std::setw(12) << eqpt::io::format_number(c.width, 4) << std::setw(8) << c.trials << std::setw(16)
              << eqpt::io::format_number(c.mean_nrmse, 6) << std::setw(16)
              << eqpt::io::format_number(c.std_nrmse, 6);
    if (timing) std::cout << std::setw(14) << eqpt::io::format_number(c.mean_time, 4);
    std::cout << '\n';
  }
}

void emit_outputs(const std::vector<eqpt::SweepCell>& cells, const eqpt::SweepConfig& config,
                  const std::string& csv, const std::string& svg, const std::string& command) {
  if (!csv.empty()) {
    std::ostringstream out;
    eqpt::io::write_csv(out, cells, config.timing);
    write_text(csv, out.str());
    eqpt::RunManifest manifest{command, eqpt::to_json(config), std::string(eqpt::kVersion), config.base_seed,
                               eqpt::utc_timestamp()};
    eqpt::save_json(csv + ".manifest.json", eqpt::to_json(manifest));
  }
  if (!svg.empty()) {
    std::ostringstream out;
    eqpt::io::write_svg(out, cells);
    write_text(svg, out.str());
  }
}

int run_bench(const BenchArgs& a, const std::string& command) {
  eqpt::SweepConfig config;
  config.methods = {eqpt::Method::EQPT1, eqpt::Method::EQPT2};
  config.qubits = {2, 4, 6};
  config.widths = {1e-4, 1e-3, 1e-2};
  config.trials = 20;
  if (!a.config.empty()) eqpt::io::load_sweep_config(a.config, config);
  if (!a.methods.empty()) {
    config.methods.clear();
    for (const auto& m : a.methods) config.methods.push_back(require_method(m));
  }
  if (!a.qubits.empty()) config.qubits = a.qubits;
  if (!a.widths.empty()) config.widths = a.widths;
  if (a.trials != 0) config.trials = a.trials;
  if (a.jobs != 0) config.jobs = a.jobs;
  if (a.seed_given) config.base_seed = a.seed;
  if (a.timing == "on") config.timing = true;
  if (a.timing == "off") config.timing = false;
  config.base_seed = seed_from_env(config.base_seed);

  for (eqpt::Method m : config.methods)
    for (std::size_t q : config.qubits)
      if (const std::string problem = eqpt::method_dimension_problem(m, q); !problem.empty())
        throw UsageError(std::string(eqpt::to_string(m)) + " at " + std::to_string(q) + " qubits: " + problem);
  for (double w : config.widths)
    if (!(w >= 0.0) || !std::isfinite(w)) throw UsageError("noise widths must be finite and nonnegative");
  if (config.trials < 1) throw UsageError("trials must be at least 1");

  const auto cells = eqpt::sweep(config);
  print_table(cells, config.timing);
  emit_outputs(cells, config, a.csv, a.svg, command);
  return kOk;
}

int run_demo(const std::string& csv, const std::string& svg, std::size_t jobs, const std::string& command) {
  eqpt::SweepConfig config;
  config.methods = {eqpt::Method::EQPT1, eqpt::Method::EQPT2, eqpt::Method::EQPT3, eqpt::Method::EQPT4};
  config.qubits = {2, 4, 6, 8};
  config.widths = {0.0, 1e-4, 1e-3};
  config.trials = 10;
  config.base_seed = seed_from_env(20190101);
  config.jobs = jobs == 0 ? 1 : jobs;

  std::cout << "demo sweep: eqpt1..eqpt4, q = 2..8, w in {0, 1e-4, 1e-3}, " << config.trials
            << " trials per cell\n\n";
  const auto cells = eqpt::sweep(config);
  print_table(cells, true);
  emit_outputs(cells, config, csv, svg, command);

  bool ok = true;
  for (const auto& c : cells)
    if (c.width == 0.0)
      for (const auto& r : c.records)
        if (!(r.nrmse < 1e-8)) {
          std::cerr << "error: noiseless " << eqpt::to_string(c.method) << " at q=" << c.qubits
                    << " has nrmse " << r.nrmse << '\n';
          ok = false;
        }

  auto mean_at = [&](eqpt::Method m, std::size_t q, double w) {
    for (const auto& c : cells)
      if (c.method == m && c.qubits == q && c.width == w) return c.mean_nrmse;
    return 0.0;
  };
  std::cout << "\nAt q = 8, w = 1e-3:\n"
            << "  single-stage   " << eqpt::io::format_number(mean_at(eqpt::Method::EQPT1, 8, 1e-3), 4) << '\n'
            << "  two-stage      " << eqpt::io::format_number(mean_at(eqpt::Method::EQPT2, 8, 1e-3), 4) << '\n'
            << "  unitarized     " << eqpt::io::format_number(mean_at(eqpt::Method::EQPT3, 8, 1e-3), 4) << " / "
            << eqpt::io::format_number(mean_at(eqpt::Method::EQPT4, 8, 1e-3), 4) << '\n';
  if (!(mean_at(eqpt::Method::EQPT2, 8, 1e-3) < mean_at(eqpt::Method::EQPT1, 8, 1e-3))) {
    std::cerr << "error: two-stage estimate is not better than single-stage at q=8, w=1e-3\n";
    ok = false;
  }
  std::cout << (ok ? "demo ok\n" : "demo FAILED\n");
  return ok ? kOk : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eigenanalysis-based quantum process tomography"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(eqpt::kVersion));

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate one process from simulated tomography data");
  estimate->add_option("--method", est.method, "eqpt1..eqpt5, variant-g, variant-h")->required();
  estimate->add_option("--qubits", est.qubits, "Number of qubits (d = 2^q)")->required();
  estimate->add_option("--width", est.width, "Noise width w (0 = noiseless)");
  estimate->add_option("--seed", est.seed, "Seed for the process and the noise");
  estimate->add_option("--unitary", est.unitary, "Matrix file holding the true process");
  estimate->add_option("--output", est.output, "Write the estimate here (plus .json and .manifest.json)");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark sweep");
  bench_cmd->add_option("--config", bench.config, "key = value sweep config file");
  bench_cmd->add_option("--methods", bench.methods, "Methods")->delimiter(',');
  bench_cmd->add_option("--qubits", bench.qubits, "Qubit counts")->delimiter(',');
  bench_cmd->add_option("--widths", bench.widths, "Noise widths")->delimiter(',');
  bench_cmd->add_option("--trials", bench.trials, "Trials per cell");
  bench_cmd->add_option("--jobs", bench.jobs, "Worker threads");
  bench_cmd->add_option("--seed", bench.seed, "Base seed");
  bench_cmd->add_option("--timing", bench.timing, "on or off")->check(CLI::IsMember({"on", "off"}));
  bench_cmd->add_option("--csv", bench.csv, "CSV output path");
  bench_cmd->add_option("--svg", bench.svg, "SVG plot output path");

  std::string demo_csv, demo_svg;
  std::size_t demo_jobs = 1;
  auto* demo = app.add_subcommand("demo", "Small fixed sweep comparing the estimators");
  demo->add_option("--csv", demo_csv, "CSV output path");
  demo->add_option("--svg", demo_svg, "SVG plot output path");
  demo->add_option("--jobs", demo_jobs, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  bench.seed_given = bench_cmd->count("--seed") > 0;

  const std::string command = command_line(argc, argv);
  try {
    if (*estimate) return run_estimate(est, command);
    if (*bench_cmd) return run_bench(bench, command);
    if (*demo) return run_demo(demo_csv, demo_svg, demo_jobs, command);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const eqpt::ParseError& e) {
    std::cerr << "parse error at line " << e.line() << ", column " << e.column() << ": " << e.what() << '\n';
    return kParse;
  } catch (const eqpt::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const eqpt::ArgumentError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const eqpt::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}
