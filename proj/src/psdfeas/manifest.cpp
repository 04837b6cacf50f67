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


#include <fstream>
#include <sstream>

#include "jnr/errors.hpp"
#include "jnr/linalg/io.hpp"
#include "jnr/psdfeas.hpp"

namespace jnr::psdfeas {

namespace {

std::vector<std::string> split(const std::string& s, const std::string& sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) return out;
    start = pos + sep.size();
  }
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

long parse_index(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    throw ParseError("bad " + what + " '" + s + "'");
  }
  if (used != s.size() || v < 0) throw ParseError("bad " + what + " '" + s + "'");
  return v;
}

std::vector<std::vector<Cell>> parse_grid(const FeasibilityProblem& p, std::string text) {
  std::erase_if(text, [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
  if (text.size() < 4 || text.rfind("[[", 0) != 0 || text.substr(text.size() - 2) != "]]")
    throw ParseError("psd pattern must look like [[P, A],[A*, Q]]");
  std::vector<std::vector<Cell>> grid;
  for (const auto& row : split(text.substr(2, text.size() - 4), "],[")) {
    std::vector<Cell> cells;
    for (std::string tok : split(row, ",")) {
      if (tok == "0") {
        cells.push_back(Cell::zero());
        continue;
      }
      bool adjoint = false;
      if (!tok.empty() && tok.back() == '*') {
        adjoint = true;
        tok.pop_back();
      }
      if (const int v = p.variable_id(tok); v >= 0) {
        cells.push_back(Cell::var(v, adjoint));
      } else if (const int c = p.constant_id(tok); c >= 0) {
        cells.push_back(Cell::constant(c, adjoint));
      } else {
        throw ParseError("unknown block name '" + tok + "' in psd pattern");
      }
    }
    grid.push_back(std::move(cells));
  }
  return grid;
}

}  // namespace

FeasibilityProblem parse_manifest(std::istream& in) {
  FeasibilityProblem p;
  std::string line;
  int lineno = 0;
  const auto fail = [&](const std::string& msg) {
    throw ParseError("manifest: " + msg + " (statement " + std::to_string(lineno) + ")");
  };
  while (linalg::next_content_line(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string keyword;
    ls >> keyword;
    try {
      if (keyword == "var") {
        std::string name, kind, dim, extra;
        if (!(ls >> name >> kind >> dim) || (ls >> extra)) fail("expected 'var NAME herm|diag DIM'");
        if (kind != "herm" && kind != "diag") fail("variable kind must be herm or diag");
        p.add_variable(name, kind == "herm" ? VarKind::Hermitian : VarKind::Diagonal, parse_index(dim, "dimension"));
      } else if (keyword == "const") {
        std::string name, extra;
        if (!(ls >> name) || (ls >> extra)) fail("expected 'const NAME' followed by a matrix");
        p.add_constant(name, linalg::read_matrix(in));
      } else if (keyword == "psd") {
        std::string rest;
        std::getline(ls, rest);
        p.add_psd(parse_grid(p, rest));
      } else if (keyword == "affine") {
        std::string rest;
        std::getline(ls, rest);
        const auto parts = split(rest, "|");
        if (parts.size() < 2) fail("expected 'affine TARGET | NAME ROW COL COEFF | ...'");
        const Complex target = linalg::parse_complex(trim(parts[0]));
        std::vector<EntryTerm> terms;
        for (std::size_t i = 1; i < parts.size(); ++i) {
          std::istringstream ts(parts[i]);
          std::string name, row, col, coeff, extra;
          if (!(ts >> name >> row >> col >> coeff) || (ts >> extra)) fail("affine term must be 'NAME ROW COL COEFF'");
          const int v = p.variable_id(name);
          if (v < 0) fail("unknown variable '" + name + "'");
          terms.push_back({v, parse_index(row, "row"), parse_index(col, "column"), linalg::parse_complex(coeff)});
        }
        p.add_affine(terms, target);
      } else if (keyword == "tol") {
        std::string v;
        if (!(ls >> v)) fail("expected 'tol VALUE'");
        p.tol = linalg::parse_complex(v).real();
        if (!(p.tol > 0.0)) fail("tol must be positive");
      } else if (keyword == "iters") {
        std::string v;
        if (!(ls >> v)) fail("expected 'iters COUNT'");
        p.max_iterations = static_cast<int>(parse_index(v, "iteration count"));
      } else {
        fail("unknown statement '" + keyword + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const IllPosedError&) {
      throw;
    } catch (const InputError& e) {
      fail(e.what());
    }
  }
  return p;
}

FeasibilityProblem read_manifest_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open manifest '" + path + "'");
  return parse_manifest(in);
}

}  // namespace jnr::psdfeas
