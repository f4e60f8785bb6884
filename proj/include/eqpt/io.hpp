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

// Text formats: matrix files, sweep config files, result CSV and SVG plots.
//
// Numbers are written with std::to_chars and read with std::from_chars, which are
// locale-independent.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "eqpt/bench.hpp"

namespace eqpt::io {

/// Shortest-general formatting with a fixed number of significant digits.
inline std::string format_number(double value, int significant) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, significant);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Matrix files: first line `d`, then d*d lines `row col re im` (1-based indices,
// 17 significant digits, so binary64 values round-trip exactly).

inline void write_matrix(std::ostream& out, const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("write_matrix: matrix must be square");
  out << m.rows() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      out << (r + 1) << ' ' << (c + 1) << ' ' << format_number(m(r, c).real(), 17) << ' '
          << format_number(m(r, c).imag(), 17) << '\n';
}

namespace detail {

struct LineCursor {
  std::string_view text;
  std::size_t line;
  std::size_t pos = 0;

  void skip_spaces() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\r')) ++pos;
  }
  bool at_end() {
    skip_spaces();
    return pos >= text.size();
  }
  std::size_t column() const { return pos + 1; }

  template <typename T>
  T read(const char* what) {
    skip_spaces();
    if (pos >= text.size()) throw ParseError(std::string("expected ") + what, line, column());
    T value{};
    const char* first = text.data() + pos;
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || (res.ptr != last && *res.ptr != ' ' && *res.ptr != '\t' && *res.ptr != '\r'))
      throw ParseError(std::string("malformed ") + what, line, column());
    pos = static_cast<std::size_t>(res.ptr - text.data());
    return value;
  }
};

}  // namespace detail

inline ComplexMatrix read_matrix(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw ParseError("empty matrix file", 1, 1);
  detail::LineCursor header{line, line_no};
  const auto d = header.read<long long>("dimension");
  if (d < 1 || d > (1LL << 15)) throw ParseError("dimension out of range", line_no, 1);
  if (!header.at_end()) throw ParseError("trailing characters after dimension", line_no, header.column());

  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix m(n, n);
  std::vector<char> seen(static_cast<std::size_t>(n * n), 0);
  for (long long k = 0; k < d * d; ++k) {
    if (!next_line()) throw ParseError("unexpected end of file: " + std::to_string(k) + " of " +
                                           std::to_string(d * d) + " entries read",
                                       line_no + 1, 1);
    detail::LineCursor cur{line, line_no};
    const std::size_t row_col = cur.column();
    const auto r = cur.read<long long>("row index");
    const auto c = cur.read<long long>("column index");
    if (r < 1 || r > d || c < 1 || c > d) throw ParseError("index out of range", line_no, row_col);
    const double re = cur.read<double>("real part");
    const double im = cur.read<double>("imaginary part");
    if (!cur.at_end()) throw ParseError("trailing characters", line_no, cur.column());
    if (!std::isfinite(re) || !std::isfinite(im)) throw ParseError("non-finite entry", line_no, row_col);
    auto& flag = seen[static_cast<std::size_t>((r - 1) * d + (c - 1))];
    if (flag) throw ParseError("duplicate entry", line_no, row_col);
    flag = 1;
    m(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c - 1)) = Complex(re, im);
  }
  if (next_line()) throw ParseError("extra content after the last entry", line_no, 1);
  return m;
}

inline void save_matrix(const std::string& path, const ComplexMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_matrix(out, m);
  if (!out) throw IoError("failed writing '" + path + "'");
}

inline ComplexMatrix load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return read_matrix(in);
}

// ---------------------------------------------------------------------------
// Sweep config: flat `key = value` lines, `#` comments. Lists are comma separated.
//   methods = eqpt1, eqpt2
//   qubits  = 4, 6, 8
//   widths  = 1e-4, 1e-3
//   trials  = 50
//   seed    = 12345
//   jobs    = 4
//   timing  = on

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto end = comma == std::string_view::npos ? s.size() : comma;
    out.push_back(trim(s.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_scalar(const std::string& token, std::size_t line, std::size_t column, const char* what) {
  T value{};
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || res.ec != std::errc() || res.ptr != token.data() + token.size())
    throw ParseError(std::string("malformed ") + what + " '" + token + "'", line, column);
  return value;
}

}  // namespace detail

/// Applies the assignments found in `in` on top of `config`.
inline void read_sweep_config(std::istream& in, SweepConfig& config) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = detail::trim(std::string_view(line).substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no, 1);
    const std::string key = detail::trim(std::string_view(body).substr(0, eq));
    const std::string value = detail::trim(std::string_view(body).substr(eq + 1));
    const std::size_t col = line.find('=') + 2;
    if (key == "methods") {
      config.methods.clear();
      for (const auto& tok : detail::split_list(value)) {
        const auto m = parse_method(tok);
        if (!m) throw ParseError("unknown method '" + tok + "'", line_no, col);
        config.methods.push_back(*m);
      }
    } else if (key == "qubits") {
      config.qubits.clear();
      for (const auto& tok : detail::split_list(value))
        config.qubits.push_back(detail::parse_scalar<std::size_t>(tok, line_no, col, "qubit count"));
    } else if (key == "widths") {
      config.widths.clear();
      for (const auto& tok : detail::split_list(value))
        config.widths.push_back(detail::parse_scalar<double>(tok, line_no, col, "width"));
    } else if (key == "trials") {
      config.trials = detail::parse_scalar<std::size_t>(value, line_no, col, "trial count");
    } else if (key == "seed") {
      config.base_seed = detail::parse_scalar<std::uint64_t>(value, line_no, col, "seed");
    } else if (key == "jobs") {
      config.jobs = detail::parse_scalar<std::size_t>(value, line_no, col, "job count");
    } else if (key == "timing") {
      if (value == "on" || value == "true" || value == "1") config.timing = true;
      else if (value == "off" || value == "false" || value == "0") config.timing = false;
      else throw ParseError("timing must be on or off", line_no, col);
    } else {
      throw ParseError("unknown key '" + key + "'", line_no, 1);
    }
  }
}

inline void load_sweep_config(const std::string& path, SweepConfig& config) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  read_sweep_config(in, config);
}

inline void write_sweep_config(std::ostream& out, const SweepConfig& config) {
  auto join = [&](const auto& xs, auto fmt) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + fmt(xs[i]);
    return s;
  };
  out << "methods = " << join(config.methods, [](Method m) { return std::string(to_string(m)); }) << '\n';
  out << "qubits = " << join(config.qubits, [](std::size_t q) { return std::to_string(q); }) << '\n';
  out << "widths = " << join(config.widths, [](double w) { return format_number(w, 17); }) << '\n';
  out << "trials = " << config.trials << '\n';
  out << "seed = " << config.base_seed << '\n';
  out << "jobs = " << config.jobs << '\n';
  out << "timing = " << (config.timing ? "on" : "off") << '\n';
}

// ---------------------------------------------------------------------------
// Results CSV.

inline constexpr std::string_view kCsvHeader = "method,qubits,dimension,width,trials,mean_nrmse,std_nrmse,mean_time_s";

inline void write_csv(std::ostream& out, const std::vector<SweepCell>& cells, bool timing) {
  out << kCsvHeader << '\n';
  for (const auto& c : cells) {
    out << to_string(c.method) << ',' << c.qubits << ',' << c.dimension << ',' << format_number(c.width, 10) << ','
        << c.trials << ',' << format_number(c.mean_nrmse, 10) << ',' << format_number(c.std_nrmse, 10) << ','
        << (timing ? format_number(c.mean_time, 10) : std::string("NA")) << '\n';
  }
}

// ---------------------------------------------------------------------------
// SVG: log10(mean NRMSE) against qubit count, one polyline per (method, width).

inline void write_svg(std::ostream& out, const std::vector<SweepCell>& cells) {
  constexpr double width = 720, height = 480, left = 70, right = 200, top = 30, bottom = 50;
  const double plot_w = width - left - right, plot_h = height - top - bottom;

  std::map<std::pair<std::string, double>, std::vector<std::pair<double, double>>> series;
  double qmin = 1e300, qmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& c : cells) {
    const double y = std::log10(std::max(c.mean_nrmse, 1e-300));
    const double q = static_cast<double>(c.qubits);
    series[{std::string(to_string(c.method)), c.width}].push_back({q, y});
    qmin = std::min(qmin, q);
    qmax = std::max(qmax, q);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  if (cells.empty()) qmin = ymin = 0, qmax = ymax = 1;
  ymin = std::floor(ymin);
  ymax = std::ceil(ymax);
  if (ymax <= ymin) ymax = ymin + 1;
  if (qmax <= qmin) qmin -= 1, qmax += 1;
  auto px = [&](double q) { return left + (q - qmin) / (qmax - qmin) * plot_w; };
  auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * plot_h; };

  static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                            "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
      << top + plot_h << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
      << "\" stroke=\"black\"/>\n";
  for (double q = std::ceil(qmin); q <= qmax; q += 1) {
    out << "<text x=\"" << px(q) << "\" y=\"" << top + plot_h + 18 << "\" font-size=\"12\" text-anchor=\"middle\">"
        << q << "</text>\n";
  }
  for (double y = ymin; y <= ymax; y += 1) {
    out << "<text x=\"" << left - 8 << "\" y=\"" << py(y) + 4 << "\" font-size=\"12\" text-anchor=\"end\">1e"
        << y << "</text>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << py(y) << "\" x2=\"" << left + plot_w << "\" y2=\"" << py(y)
        << "\" stroke=\"#ddd\"/>\n";
  }
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10
      << "\" font-size=\"13\" text-anchor=\"middle\">qubits</text>\n";
  out << "<text x=\"16\" y=\"" << top + plot_h / 2 << "\" font-size=\"13\" transform=\"rotate(-90 16 "
      << top + plot_h / 2 << ")\" text-anchor=\"middle\">mean NRMSE</text>\n";

  std::size_t idx = 0;
  for (auto& [key, pts] : series) {
    std::sort(pts.begin(), pts.end());
    const char* color = palette[idx % std::size(palette)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& [q, y] : pts) out << px(q) << ',' << py(y) << ' ';
    out << "\"/>\n";
    for (const auto& [q, y] : pts)
      out << "<circle cx=\"" << px(q) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    const double ly = top + 16.0 * static_cast<double>(idx) + 10;
    out << "<text x=\"" << left + plot_w + 12 << "\" y=\"" << ly << "\" font-size=\"12\" fill=\"" << color << "\">"
        << key.first << " w=" << format_number(key.second, 3) << "</text>\n";
    ++idx;
  }
  out << "</svg>\n";
}

}  // namespace eqpt::io
