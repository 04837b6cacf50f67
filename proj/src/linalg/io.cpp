// Copyright 2026 The jnr Authors
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

#include "jnr/linalg/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "jnr/errors.hpp"

namespace jnr::linalg {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_real(std::string_view s, std::string_view whole) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw ParseError("malformed complex literal '" + std::string(whole) + "'");
  }
  return value;
}

template <typename T>
T parse_count(std::string_view s, std::string_view what) {
  T value{};
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError("malformed " + std::string(what) + " '" + std::string(s) + "'");
  }
  return value;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

}  // namespace

Complex parse_complex(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw ParseError("empty complex literal");
  if (s.back() != 'i') return {parse_real(s, s), 0.0};
  const std::string_view body = s.substr(0, s.size() - 1);
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  std::string_view re_part;
  std::string_view im_part = body;
  if (split != std::string_view::npos) {
    re_part = body.substr(0, split);
    im_part = body.substr(split);
  }
  double im = 0.0;
  if (im_part.empty() || im_part == "+") {
    im = 1.0;
  } else if (im_part == "-") {
    im = -1.0;
  } else {
    im = parse_real(im_part, s);
  }
  const double re = re_part.empty() ? 0.0 : parse_real(re_part, s);
  return {re, im};
}

std::vector<Complex> parse_complex_list(std::string_view text) {
  std::vector<Complex> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    out.push_back(parse_complex(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string format_real(double x) {
  if (x == 0.0) return "0";  // folds -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_complex(Complex z) {
  const double im = z.imag() == 0.0 ? 0.0 : z.imag();
  std::string out = format_real(z.real());
  if (im < 0.0 || std::signbit(im)) {
    out += format_real(im);
  } else {
    out += "+" + format_real(im);
  }
  return out + "i";
}

bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    return true;
  }
  return false;
}

ComplexMatrix read_matrix(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line)) throw ParseError("missing matrix header 'rows cols'");
  const auto header = split_ws(line);
  if (header.size() != 2) throw ParseError("matrix header must be 'rows cols', got '" + line + "'");
  const auto rows = parse_count<long>(header[0], "row count");
  const auto cols = parse_count<long>(header[1], "column count");
  if (rows < 0 || cols < 0) throw ParseError("negative matrix dimension");
  ComplexMatrix m(rows, cols);
  for (long r = 0; r < rows; ++r) {
    if (!next_content_line(in, line)) {
      throw ParseError("matrix ended after " + std::to_string(r) + " of " + std::to_string(rows) +
                       " rows");
    }
    const auto toks = split_ws(line);
    if (static_cast<long>(toks.size()) != cols) {
      throw ParseError("matrix row " + std::to_string(r) + " has " + std::to_string(toks.size()) +
                       " entries, expected " + std::to_string(cols));
    }
    for (long c = 0; c < cols; ++c) m(r, c) = parse_complex(toks[static_cast<std::size_t>(c)]);
  }
  if (!all_finite(m)) throw ParseError("matrix has non-finite entries");
  return m;
}

void write_matrix(std::ostream& out, const ComplexMatrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << format_complex(m(r, c));
    }
    out << '\n';
  }
}

SparseOperator read_sparse(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line)) throw ParseError("missing sparse header 'dim nnz hermitian:{0|1}'");
  const auto header = split_ws(line);
  if (header.size() != 3 || header[2].rfind("hermitian:", 0) != 0) {
    throw ParseError("sparse header must be 'dim nnz hermitian:{0|1}', got '" + line + "'");
  }
  const auto dim = parse_count<long>(header[0], "dimension");
  const auto nnz = parse_count<long>(header[1], "nonzero count");
  const auto flag = header[2].substr(10);
  if (flag != "0" && flag != "1") throw ParseError("hermitian flag must be 0 or 1");
  std::vector<Triplet> triplets;
  for (long k = 0; k < nnz; ++k) {
    if (!next_content_line(in, line)) throw ParseError("sparse file ended early");
    const auto toks = split_ws(line);
    if (toks.size() != 3) throw ParseError("sparse triplet must be 'row col value'");
    triplets.push_back({parse_count<long>(toks[0], "row"), parse_count<long>(toks[1], "column"),
                        parse_complex(toks[2])});
  }
  return SparseOperator(dim, triplets, flag == "1");
}

void write_sparse(std::ostream& out, const SparseOperator& s) {
  out << s.dim() << ' ' << s.nnz() << " hermitian:" << (s.hermitian() ? 1 : 0) << '\n';
  for (const auto& t : s.triplets()) out << t.row << ' ' << t.col << ' ' << format_complex(t.value) << '\n';
}

std::vector<ComplexMatrix> read_tuple(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line)) throw ParseError("missing tuple header 'd p'");
  const auto header = split_ws(line);
  if (header.size() != 2) throw ParseError("tuple header must be 'd p', got '" + line + "'");
  const auto d = parse_count<long>(header[0], "tuple length");
  const auto p = parse_count<long>(header[1], "tuple dimension");
  if (d < 1 || p < 1) throw ParseError("tuple needs d >= 1 and p >= 1");
  std::vector<ComplexMatrix> tuple;
  for (long i = 0; i < d; ++i) {
    auto m = read_matrix(in);
    if (m.rows() != p || m.cols() != p) {
      throw ShapeError("tuple entry " + std::to_string(i) + " is " + std::to_string(m.rows()) + "x" +
                       std::to_string(m.cols()) + ", expected " + std::to_string(p) + "x" +
                       std::to_string(p));
    }
    tuple.push_back(std::move(m));
  }
  return tuple;
}

void write_tuple(std::ostream& out, const std::vector<ComplexMatrix>& tuple) {
  out << tuple.size() << ' ' << (tuple.empty() ? 0 : tuple.front().rows()) << '\n';
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (i) out << '\n';
    write_matrix(out, tuple[i]);
  }
}

namespace {
std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open input file '" + path + "'");
  return in;
}
}  // namespace

ComplexMatrix read_matrix_file(const std::string& path) {
  auto in = open_input(path);
  return read_matrix(in);
}

std::vector<ComplexMatrix> read_tuple_file(const std::string& path) {
  auto in = open_input(path);
  return read_tuple(in);
}

}  // namespace jnr::linalg
