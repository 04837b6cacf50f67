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

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "jnr/linalg/matrix.hpp"
#include "jnr/linalg/sparse.hpp"

namespace jnr::linalg {

// Matrix text format: a `rows cols` line, then rows of whitespace separated
// complex literals (`0.5-1.25i`, `3`, `-i`). Lines starting with `#` are
// comments. Sparse format: `dim nnz hermitian:{0|1}` then `row col value`.

/// Parses a complex literal; throws ParseError.
Complex parse_complex(std::string_view text);

/// Comma separated complex literals, e.g. "1,1" or "i,-1".
std::vector<Complex> parse_complex_list(std::string_view text);

/// 17 significant digits, lowercase exponent.
std::string format_real(double x);
std::string format_complex(Complex z);

/// Reads one matrix; blank and comment lines before the header are skipped.
ComplexMatrix read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const ComplexMatrix& m);

SparseOperator read_sparse(std::istream& in);
void write_sparse(std::ostream& out, const SparseOperator& s);

/// Tuple file: header `d p`, then d matrices (p x p) separated by blank lines.
std::vector<ComplexMatrix> read_tuple(std::istream& in);
void write_tuple(std::ostream& out, const std::vector<ComplexMatrix>& tuple);

ComplexMatrix read_matrix_file(const std::string& path);
std::vector<ComplexMatrix> read_tuple_file(const std::string& path);

/// Next line that is neither blank nor a `#` comment; false at EOF.
bool next_content_line(std::istream& in, std::string& line);

}  // namespace jnr::linalg
