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


#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "eqpt/eqpt.hpp"

namespace {

namespace fs = std::filesystem;

const fs::path kWork = EQPT_WORK_DIR;

int run(const std::string& args, const std::string& env = "") {
  fs::create_directories(kWork);
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" + EQPT_CLI_PATH + "\" " + args + " > \"" +
                          (kWork / "stdout.txt").string() + "\" 2> \"" + (kWork / "stderr.txt").string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string path(const std::string& name) { return (kWork / name).string(); }

void write(const std::string& name, const std::string& text) {
  fs::create_directories(kWork);
  std::ofstream(kWork / name, std::ios::binary) << text;
}

TEST(Cli, EstimateNoiseless) {
  ASSERT_EQ(run("estimate --method eqpt1 --qubits 3 --width 0 --seed 5 --output " + path("u5.txt")), 0)
      << slurp(kWork / "stderr.txt");
  const auto result = nlohmann::json::parse(slurp(kWork / "u5.txt.json"));
  EXPECT_LT(result["nrmse"].get<double>(), 1e-10);
  EXPECT_EQ(result["method"], "eqpt1");
  EXPECT_TRUE(result["diagnostics"].contains("stages"));
  const eqpt::ComplexMatrix u_hat = eqpt::io::load_matrix(path("u5.txt"));
  EXPECT_LT(eqpt::nrmse(eqpt::random_unitary(8, 5), u_hat), 1e-10);
  const auto manifest = nlohmann::json::parse(slurp(kWork / "u5.txt.manifest.json"));
  for (const char* key : {"command", "config", "version", "base_seed", "timestamp"})
    EXPECT_TRUE(manifest.contains(key)) << key;
}

TEST(Cli, EstimateFromMatrixFile) {
  const eqpt::ComplexMatrix u = eqpt::random_unitary(16, 77, eqpt::UnitaryMode::ComplexGinibre);
  eqpt::io::save_matrix(path("truth.txt"), u);
  ASSERT_EQ(run("estimate --method eqpt5 --qubits 4 --width 0 --unitary " + path("truth.txt") + " --output " +
                path("est.txt")),
            0)
      << slurp(kWork / "stderr.txt");
  EXPECT_LT(eqpt::nrmse(u, eqpt::io::load_matrix(path("est.txt"))), 1e-8);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("estimate --method eqpt2 --qubits 3 --width 1e-3"), 2);
  EXPECT_EQ(run("estimate --method eqpt9 --qubits 2"), 2);
  EXPECT_EQ(run("estimate --qubits 2"), 2);
  EXPECT_EQ(run(""), 2);
  write("bad.txt", "2\n1 1 1 0\n1 2 oops 0\n");
  EXPECT_EQ(run("estimate --method eqpt1 --qubits 1 --unitary " + path("bad.txt")), 3);
  EXPECT_NE(slurp(kWork / "stderr.txt").find("line 3, column 5"), std::string::npos) << slurp(kWork / "stderr.txt");
  eqpt::io::save_matrix(path("i4.txt"), eqpt::ComplexMatrix::Identity(4, 4));
  EXPECT_EQ(run("estimate --method eqpt1 --qubits 3 --unitary " + path("i4.txt")), 2);
  EXPECT_EQ(run("estimate --method eqpt1 --qubits 2 --unitary " + path("missing.txt")), 5);
  EXPECT_EQ(run("estimate --method eqpt1 --qubits 2 --output /nonexistent/dir/u.txt"), 5);
  EXPECT_EQ(run("--version"), 0);
}

TEST(Cli, BenchOneCell) {
  write("one.cfg", "methods = eqpt2\nqubits = 4\nwidths = 1e-3\ntrials = 5\nseed = 3\ntiming = off\n");
  ASSERT_EQ(run("bench --config " + path("one.cfg") + " --csv " + path("one.csv") + " --svg " + path("one.svg")), 0)
      << slurp(kWork / "stderr.txt");
  const std::string csv = slurp(kWork / "one.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  EXPECT_EQ(csv.rfind("method,qubits,dimension,width,trials,mean_nrmse,std_nrmse,mean_time_s\neqpt2,4,16,0.001,5,", 0),
            0u);
  EXPECT_NE(slurp(kWork / "one.svg").find("<polyline"), std::string::npos);
  const auto manifest = nlohmann::json::parse(slurp(kWork / "one.csv.manifest.json"));
  EXPECT_EQ(manifest["config"]["trials"], 5);
  EXPECT_EQ(manifest["base_seed"], 3);
}

TEST(Cli, BenchIsDeterministic) {
  ASSERT_EQ(run("bench --methods eqpt1,eqpt3 --qubits 2,4 --widths 1e-4,1e-2 --trials 6 "
                "--seed 11 --timing off --jobs 1 --csv " + path("a.csv")),
            0);
  ASSERT_EQ(run("bench --methods eqpt1,eqpt3 --qubits 2,4 --widths 1e-4,1e-2 --trials 6 --seed 11 --timing off "
                "--jobs 8 --csv " + path("b.csv")),
            0);
  ASSERT_EQ(run("bench --methods eqpt1,eqpt3 --qubits 2,4 --widths 1e-4,1e-2 --trials 6 --seed 11 --timing off "
                "--jobs 1 --csv " + path("c.csv")),
            0);
  EXPECT_EQ(slurp(kWork / "a.csv"), slurp(kWork / "b.csv"));
  EXPECT_EQ(slurp(kWork / "a.csv"), slurp(kWork / "c.csv"));
  EXPECT_EQ(run("bench --methods eqpt5 --qubits 3 --trials 2 --timing off --csv " + path("d.csv"), "EQPT_SEED=12"), 0);
  EXPECT_EQ(run("bench --methods eqpt5 --qubits 3 --trials 2 --timing off --csv " + path("e.csv"), "EQPT_SEED=13"), 0);
  EXPECT_NE(slurp(kWork / "d.csv"), slurp(kWork / "e.csv"));
  EXPECT_EQ(nlohmann::json::parse(slurp(kWork / "d.csv.manifest.json"))["base_seed"], 12);
}

TEST(Cli, BenchErrors) {
  write("broken.cfg", "trials = 5\nqubits = two\n");
  EXPECT_EQ(run("bench --config " + path("broken.cfg")), 3);
  EXPECT_EQ(run("bench --config " + path("nope.cfg")), 5);
  EXPECT_EQ(run("bench --methods eqpt2 --qubits 3 --trials 1"), 2);
  EXPECT_EQ(run("bench --methods eqpt1 --qubits 2 --trials 1 --csv /nonexistent/dir/x.csv"), 5);
  EXPECT_EQ(run("bench --methods eqpt1 --qubits 2 --trials 1", "EQPT_SEED=abc"), 2);
}

TEST(Cli, Demo) {
  ASSERT_EQ(run("demo --csv " + path("demo.csv")), 0) << slurp(kWork / "stderr.txt");
  const std::string out = slurp(kWork / "stdout.txt");
  EXPECT_NE(out.find("demo ok"), std::string::npos);
  const std::string csv = slurp(kWork / "demo.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 4 * 4 * 3);
}

}  // namespace
