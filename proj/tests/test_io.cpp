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

#include <clocale>
#include <cstring>
#include <sstream>

#include "eqpt/eqpt.hpp"
#include "test_util.hpp"

namespace eqpt {
namespace {

ComplexMatrix round_trip(const ComplexMatrix& m) {
  std::stringstream ss;
  io::write_matrix(ss, m);
  return io::read_matrix(ss);
}

void expect_parse_error(const std::string& text, std::size_t line, std::size_t column) {
  std::istringstream in(text);
  try {
    io::read_matrix(in);
    FAIL() << "no error for:\n" << text;
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), line) << e.what();
    EXPECT_EQ(e.column(), column) << e.what();
  }
}

TEST(MatrixFile, BitExactRoundTrip) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    ComplexMatrix m = random_unitary(1 + s, s, UnitaryMode::ComplexGinibre);
    if (s == 3) m(0, 0) = Complex(1e-310, -0.0);
    if (s == 4) m(1, 2) = Complex(std::numeric_limits<double>::max(), std::numeric_limits<double>::min());
    const ComplexMatrix back = round_trip(m);
    ASSERT_EQ(back.rows(), m.rows());
    EXPECT_EQ(0, std::memcmp(back.data(), m.data(), sizeof(Complex) * static_cast<std::size_t>(m.size())));
  }
}

TEST(MatrixFile, Layout) {
  ComplexMatrix m(2, 2);
  m << Complex(1, 0), Complex(0, 0.5), Complex(-0.25, 0), Complex(1e20, 3);
  std::stringstream ss;
  io::write_matrix(ss, m);
  EXPECT_EQ(ss.str(), "2\n1 1 1 0\n1 2 0 0.5\n2 1 -0.25 0\n2 2 1e+20 3\n");
}

TEST(MatrixFile, AnyEntryOrderAndBlankLines) {
  std::istringstream in("2\n\n2 2 4 0\n1 1 1 0\n2 1 3 0\n1 2 2 0\n");
  const ComplexMatrix m = io::read_matrix(in);
  EXPECT_EQ(m(0, 1), Complex(2, 0));
  EXPECT_EQ(m(1, 0), Complex(3, 0));
}

TEST(MatrixFile, ParseErrorsCarryPosition) {
  expect_parse_error("", 1, 1);
  expect_parse_error("x\n", 1, 1);
  expect_parse_error("2 3\n", 1, 3);
  expect_parse_error("1\n1 1 abc 0\n", 2, 5);
  expect_parse_error("1\n1 1 1\n", 2, 6);
  expect_parse_error("1\n1 2 1 0\n", 2, 1);
  expect_parse_error("2\n1 1 1 0\n1 1 1 0\n", 3, 1);
  expect_parse_error("2\n1 1 1 0\n", 3, 1);
  expect_parse_error("1\n1 1 1 0 7\n", 2, 9);
  expect_parse_error("1\n1 1 1 0\n1 1 1 0\n", 3, 1);
  expect_parse_error("1\n1 1 nan 0\n", 2, 1);
}

TEST(MatrixFile, FileErrors) {
  EXPECT_THROW(io::load_matrix("/nonexistent/dir/u.txt"), IoError);
  EXPECT_THROW(io::save_matrix("/nonexistent/dir/u.txt", ComplexMatrix::Identity(2, 2)), IoError);
}

TEST(Config, ParsesAllKeys) {
  std::istringstream in(
      "# demo\n"
      "methods = eqpt1, eqpt3 ,variant-h\n"
      "qubits = 2,4\n"
      "widths = 1e-4, 0.01   # trailing comment\n"
      "trials = 12\n"
      "seed = 18446744073709551615\n"
      "jobs = 3\n"
      "timing = off\n");
  SweepConfig c;
  io::read_sweep_config(in, c);
  EXPECT_EQ(c.methods, (std::vector<Method>{Method::EQPT1, Method::EQPT3, Method::VariantH}));
  EXPECT_EQ(c.qubits, (std::vector<std::size_t>{2, 4}));
  EXPECT_EQ(c.widths, (std::vector<double>{1e-4, 0.01}));
  EXPECT_EQ(c.trials, 12u);
  EXPECT_EQ(c.base_seed, 18446744073709551615ULL);
  EXPECT_EQ(c.jobs, 3u);
  EXPECT_FALSE(c.timing);
}

TEST(Config, WriteThenReadIsIdentity) {
  const SweepConfig c{{Method::EQPT5, Method::VariantG}, {3, 5}, {0.1, 1.0 / 3.0}, 9, 77, 2, true};
  std::stringstream ss;
  io::write_sweep_config(ss, c);
  SweepConfig back;
  io::read_sweep_config(ss, back);
  EXPECT_EQ(back.methods, c.methods);
  EXPECT_EQ(back.qubits, c.qubits);
  EXPECT_EQ(back.widths, c.widths);
  EXPECT_EQ(back.trials, c.trials);
  EXPECT_EQ(back.base_seed, c.base_seed);
  EXPECT_EQ(back.jobs, c.jobs);
  EXPECT_EQ(back.timing, c.timing);
}

TEST(Config, Errors) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    SweepConfig c;
    io::read_sweep_config(in, c);
  };
  EXPECT_THROW(parse("methods = eqpt9\n"), ParseError);
  EXPECT_THROW(parse("trials = many\n"), ParseError);
  EXPECT_THROW(parse("qubits = 2,,4\n"), ParseError);
  EXPECT_THROW(parse("colour = blue\n"), ParseError);
  EXPECT_THROW(parse("just words\n"), ParseError);
  EXPECT_THROW(parse("timing = maybe\n"), ParseError);
  try {
    parse("trials = 3\n\nseed = -1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

std::vector<SweepCell> sample_cells() {
  SweepCell a;
  a.method = Method::EQPT1;
  a.qubits = 4;
  a.dimension = 16;
  a.width = 1e-3;
  a.trials = 50;
  a.mean_nrmse = 0.0123456789012345;
  a.std_nrmse = 1.5e-3;
  a.mean_time = 1234.5;
  SweepCell b = a;
  b.method = Method::EQPT2;
  b.mean_nrmse = 2.5e-4;
  b.qubits = 6;
  b.dimension = 64;
  return {a, b};
}

TEST(Csv, SchemaAndFormatting) {
  std::ostringstream out;
  io::write_csv(out, sample_cells(), true);
  EXPECT_EQ(out.str(),
            "method,qubits,dimension,width,trials,mean_nrmse,std_nrmse,mean_time_s\n"
            "eqpt1,4,16,0.001,50,0.0123456789,0.0015,1234.5\n"
            "eqpt2,6,64,0.001,50,0.00025,0.0015,1234.5\n");
  std::ostringstream untimed;
  io::write_csv(untimed, {sample_cells()[0]}, false);
  EXPECT_EQ(untimed.str().substr(untimed.str().rfind(',') + 1), "NA\n");
  std::ostringstream empty;
  io::write_csv(empty, {}, true);
  EXPECT_EQ(empty.str(), std::string(io::kCsvHeader) + "\n");
}

TEST(Csv, LocaleIndependent) {
  const char* previous = std::setlocale(LC_NUMERIC, nullptr);
  const std::string saved = previous ? previous : "C";
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") == nullptr) std::setlocale(LC_NUMERIC, "fr_FR.UTF-8");
  std::ostringstream out;
  io::write_csv(out, sample_cells(), true);
  std::setlocale(LC_NUMERIC, saved.c_str());
  EXPECT_NE(out.str().find("0.0123456789"), std::string::npos);
}

TEST(Svg, OneSeriesPerMethodAndWidth) {
  auto cells = sample_cells();
  SweepCell c = cells[0];
  c.width = 1e-2;
  cells.push_back(c);
  std::ostringstream out;
  io::write_svg(out, cells);
  const std::string svg = out.str();
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  std::size_t series = 0;
  for (std::size_t p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) ++series;
  EXPECT_EQ(series, 3u);
  EXPECT_NE(svg.find("eqpt2 w=0.001"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Numbers, Formatting) {
  EXPECT_EQ(io::format_number(0.1, 17), "0.10000000000000001");
  EXPECT_EQ(io::format_number(1e-300, 10), "1e-300");
  EXPECT_EQ(io::format_number(123456789012.0, 10), "1.23456789e+11");
}

}  // namespace
}  // namespace eqpt
