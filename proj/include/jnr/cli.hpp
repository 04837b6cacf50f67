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
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "jnr/linalg/matrix.hpp"

namespace jnr::cli {

inline constexpr int kSchemaVersion = 1;

/// Plain-text report: `key: value` lines in insertion order after the schema
/// and command lines and the sorted config block. A matrix is a `key: matrix`
/// line followed by the matrix in the linalg text format.
class Report {
 public:
  explicit Report(std::string command);

  void config(const std::string& key, const std::string& value);
  void text(const std::string& key, const std::string& value);
  void real(const std::string& key, double value);
  void integer(const std::string& key, long long value);
  void boolean(const std::string& key, bool value);
  void matrix(const std::string& key, const linalg::ComplexMatrix& m);
  /// `<prefix>.op` and `<prefix>.tol` for the values that follow.
  void claim(const std::string& prefix, const std::string& op, double tol);

  std::string str() const;

 private:
  struct Line {
    std::string key;
    std::string value;
    bool is_matrix = false;
    linalg::ComplexMatrix m;
  };
  std::string command_;
  std::map<std::string, std::string> config_;
  std::vector<Line> lines_;
};

struct ParsedReport {
  std::map<std::string, std::string> values;
  std::map<std::string, linalg::ComplexMatrix> matrices;
};

/// Inverse of Report::str; throws ParseError.
ParsedReport parse_report(std::istream& in);

/// Runs one command. Exit 0 on a computed result (any status), 2 on input
/// errors, 1 on internal faults. The report goes to --out or to `out`.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace jnr::cli
