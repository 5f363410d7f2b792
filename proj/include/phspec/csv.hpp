// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "phspec/problem.hpp"

namespace phspec::io {

/// %.12g with a '.' separator regardless of the global locale; NaN and
/// infinities print as nan, inf, -inf.
inline std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(12);
  os << x;
  return os.str();
}

inline double parse_real(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::istringstream is(s);
  is.imbue(std::locale::classic());
  double x = 0.0;
  is >> x;
  if (!is || is.peek() != std::char_traits<char>::eof()) throw std::invalid_argument("not a number: '" + s + "'");
  return x;
}

/// Plain comma-separated table: no quoting, LF line endings.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) {
    if (row.size() != header.size()) throw std::invalid_argument("csv row has the wrong number of fields");
    rows.push_back(std::move(row));
  }
};

inline std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cell);
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  out.push_back(cell);
  return out;
}

inline void write_table(std::ostream& os, const Table& t) {
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      os << cells[i];
    }
    os << '\n';
  };
  emit(t.header);
  for (const auto& r : t.rows) emit(r);
}

inline Table read_table(std::istream& is) {
  Table t;
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("csv: empty input");
  if (!line.empty() && line.back() == '\r') throw std::invalid_argument("csv: CRLF line endings");
  t.header = split_line(line);
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') throw std::invalid_argument("csv: CRLF line endings");
    if (line.empty()) continue;
    t.add(split_line(line));
  }
  return t;
}

inline const std::vector<std::string>& eigenvalue_header() {
  static const std::vector<std::string> h{"method", "epsilon", "n", "re_lambda", "im_lambda", "residual"};
  return h;
}

inline Table eigenvalue_table(const std::vector<EigenvalueRecord>& records) {
  Table t{eigenvalue_header(), {}};
  for (const auto& r : records) {
    t.add({to_string(r.method), format_real(r.epsilon), std::to_string(r.index), format_real(r.lambda.real()),
           format_real(r.lambda.imag()), format_real(r.residual)});
  }
  return t;
}

inline void write_eigenvalues(std::ostream& os, const std::vector<EigenvalueRecord>& records) {
  write_table(os, eigenvalue_table(records));
}

inline Method parse_method(const std::string& s) {
  if (s == "shooting") return Method::shooting;
  if (s == "spectral") return Method::spectral;
  if (s == "wkb") return Method::wkb;
  throw std::invalid_argument("unknown method '" + s + "'");
}

inline std::vector<EigenvalueRecord> read_eigenvalues(std::istream& is) {
  const Table t = read_table(is);
  if (t.header != eigenvalue_header()) throw std::invalid_argument("csv: not an eigenvalue table");
  std::vector<EigenvalueRecord> out;
  for (const auto& r : t.rows) {
    EigenvalueRecord rec;
    rec.method = parse_method(r[0]);
    rec.epsilon = parse_real(r[1]);
    rec.index = std::stoi(r[2]);
    rec.lambda = {parse_real(r[3]), parse_real(r[4])};
    rec.residual = parse_real(r[5]);
    out.push_back(rec);
  }
  return out;
}

}  // namespace phspec::io
