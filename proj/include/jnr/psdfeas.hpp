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

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Sparse>

#include "jnr/linalg/matrix.hpp"
#include "jnr/linalg/sparse.hpp"

namespace jnr::psdfeas {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::Index;
using linalg::RealVector;
using SparseComplex = Eigen::SparseMatrix<Complex>;

enum class VarKind { Hermitian, Diagonal };

/// A matrix variable. Hermitian blocks of dimension q carry q^2 real
/// parameters (q diagonal entries, then Re/Im of each upper entry in
/// row-major order); diagonal blocks carry q.
struct Variable {
  std::string name;
  VarKind kind = VarKind::Hermitian;
  Index dim = 0;
  Index offset = 0;  // first parameter
  Index params() const { return kind == VarKind::Hermitian ? dim * dim : dim; }
};

struct Cell {
  enum Kind { Zero, Var, Const };
  Kind kind = Zero;
  int id = -1;           // variable or constant index
  bool adjoint = false;  // X^* instead of X
  static Cell zero() { return {}; }
  static Cell var(int id, bool adjoint = false) { return {Var, id, adjoint}; }
  static Cell constant(int id, bool adjoint = false) { return {Const, id, adjoint}; }
};

/// sum coeff * X(row, col) over the terms equals target.
struct EntryTerm {
  int var = 0;
  Index row = 0;
  Index col = 0;
  Complex coeff = 1.0;
};

/// Variables, PSD block patterns and affine equalities in the variable
/// entries. Each PSD pattern is a square grid of cells; the engine reads the
/// diagonal and upper triangle and checks that the lower triangle holds the
/// adjoints.
class FeasibilityProblem {
 public:
  int add_variable(std::string name, VarKind kind, Index dim);
  int add_constant(std::string name, const ComplexMatrix& value);
  int add_constant(std::string name, SparseComplex value);
  void add_psd(std::vector<std::vector<Cell>> grid);
  /// Complex equality; contributes its real and imaginary parts as real rows.
  void add_affine(const std::vector<EntryTerm>& terms, Complex target);
  /// Shorthand: X == value entrywise.
  void fix_variable(int var, const ComplexMatrix& value);

  int variable_id(std::string_view name) const;
  int constant_id(std::string_view name) const;

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<SparseComplex>& constants() const { return constants_; }
  const std::vector<std::string>& constant_names() const { return constant_names_; }
  const std::vector<std::vector<std::vector<Cell>>>& patterns() const { return patterns_; }
  Index param_count() const { return params_; }

  struct RealRow {
    std::vector<std::pair<Index, double>> coeffs;
    double target = 0.0;
  };
  const std::vector<RealRow>& affine_rows() const { return rows_; }

  /// Matrix value of a variable from a parameter vector.
  ComplexMatrix value(int var, const RealVector& x) const;
  /// Parameter vector from matrix values (Hermitian part / diagonal taken).
  RealVector params_from(const std::vector<ComplexMatrix>& values) const;
  /// Block sizes of pattern `k`.
  const std::vector<Index>& block_sizes(std::size_t k) const { return sizes_[k]; }
  /// Dense assembly of pattern `k` at parameters x.
  ComplexMatrix assemble(std::size_t k, const RealVector& x) const;
  /// Entries of pattern `k` (both triangles, identically zero ones omitted).
  std::vector<linalg::Triplet> pattern_triplets(std::size_t k, const RealVector& x) const;

  double tol = 1e-7;
  int max_iterations = 50000;

 private:
  std::vector<Variable> variables_;
  std::vector<SparseComplex> constants_;
  std::vector<std::string> constant_names_;
  std::vector<std::vector<std::vector<Cell>>> patterns_;
  std::vector<RealRow> rows_;
  std::vector<std::vector<Index>> sizes_;
  Index params_ = 0;
};

enum class Status { Feasible, Unknown };
std::string_view to_string(Status s);

struct SolveOptions {
  std::uint64_t seed = 0;   // 0: start from zero; otherwise a seeded Gaussian start
  bool dykstra = false;
  int stagnation_window = 2000;
  double stagnation_ratio = 0.99;  // best residual must shrink by this factor per window
  RealVector warm_start;    // overrides the seeded start when sized to param_count
};

struct FeasibilityResult {
  Status status = Status::Unknown;
  RealVector x;               // final iterate (a witness when feasible)
  double psd_residual = 0.0;  // max(0, -lambda_min) over PSD blocks
  double affine_residual = 0.0;
  int iterations = 0;
  int components = 0;
  std::string stop_reason;
};

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clipped).
linalg::HermitianMatrix project_psd(const linalg::HermitianMatrix& h);

/// Alternating projections between the PSD blocks and the affine set. Never
/// claims infeasibility; FEASIBLE only after an independent re-check of every
/// constraint at `problem.tol`. Throws IllPosedError for inconsistent
/// equalities.
FeasibilityResult solve(const FeasibilityProblem& problem, const SolveOptions& options = {});

/// Independent check of a parameter vector.
struct Verification {
  bool ok = false;
  double min_eigenvalue = 0.0;
  double affine_residual = 0.0;
};
Verification verify(const FeasibilityProblem& problem, const RealVector& x, double tol);

enum class OracleVerdict { Feasible, Infeasible, Inconclusive };
std::string_view to_string(OracleVerdict v);

struct OracleOptions {
  double box_radius = 10.0;
  double margin = 1e-6;  // INFEASIBLE needs lambda_min < -margin everywhere
  int max_cells = 200000;
};

struct OracleResult {
  OracleVerdict verdict = OracleVerdict::Inconclusive;
  int parameters = 0;     // after affine elimination
  double best_value = 0.0;  // best lambda_min found
  double upper_bound = 0.0; // certified bound on lambda_min when infeasible
  RealVector x;           // best point
  int cells = 0;
};

/// Exhaustive branch-and-bound on lambda_min over the affine solution set,
/// for problems with at most 3 free real parameters (PreconditionError
/// otherwise). lambda_min along the solution set is concave, so a box
/// enclosure whose boundary lies below an interior value bounds it globally.
OracleResult brute_force_oracle(const FeasibilityProblem& problem, const OracleOptions& options = {});

/// Text manifest:
///   var NAME herm|diag DIM
///   const NAME            (followed by a matrix in the shared text format)
///   psd [[P1, A],[A*, Q1]]   (0 for a zero block)
///   affine TARGET | NAME ROW COL COEFF | ...
///   tol VALUE
///   iters COUNT
FeasibilityProblem parse_manifest(std::istream& in);
FeasibilityProblem read_manifest_file(const std::string& path);

}  // namespace jnr::psdfeas
