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


#include <istream>
#include <sstream>

#include "jnr/cli.hpp"
#include "jnr/errors.hpp"
#include "jnr/linalg/io.hpp"

namespace jnr::cli {

Report::Report(std::string command) : command_(std::move(command)) {}

void Report::config(const std::string& key, const std::string& value) { config_["config." + key] = value; }

void Report::text(const std::string& key, const std::string& value) {
  if (value.find('\n') != std::string::npos) throw InputError("report value for '" + key + "' spans lines");
  lines_.push_back({key, value, false, {}});
}

void Report::real(const std::string& key, double value) { text(key, linalg::format_real(value)); }
void Report::integer(const std::string& key, long long value) { text(key, std::to_string(value)); }
void Report::boolean(const std::string& key, bool value) { text(key, value ? "true" : "false"); }

void Report::matrix(const std::string& key, const linalg::ComplexMatrix& m) {
  lines_.push_back({key, "matrix", true, m});
}

void Report::claim(const std::string& prefix, const std::string& op, double tol) {
  text(prefix + ".op", op);
  real(prefix + ".tol", tol);
}

std::string Report::str() const {
  std::ostringstream out;
  out << "schema_version: " << kSchemaVersion << '\n';
  out << "command: " << command_ << '\n';
  for (const auto& [k, v] : config_) out << k << ": " << v << '\n';
  for (const auto& l : lines_) {
    out << l.key << ": " << l.value << '\n';
    if (l.is_matrix) linalg::write_matrix(out, l.m);
  }
  return out.str();
}

ParsedReport parse_report(std::istream& in) {
  ParsedReport out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto colon = line.find(": ");
    if (colon == std::string::npos) throw ParseError("report line without 'key: value': " + line);
    std::string key = line.substr(0, colon), value = line.substr(colon + 2);
    if (value == "matrix")
      out.matrices[key] = linalg::read_matrix(in);
    else
      out.values[key] = std::move(value);
  }
  if (!out.values.count("schema_version")) throw ParseError("report has no schema_version");
  return out;
}

}  // namespace jnr::cli
