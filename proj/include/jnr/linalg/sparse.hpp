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
#include <vector>

#include "jnr/linalg/matrix.hpp"

namespace jnr::linalg {

struct Triplet {
  Index row = 0;
  Index col = 0;
  Complex value;
};

/// Square sparse operator stored as CSR. Duplicate triplets are summed.
/// When `hermitian` is set the triplet set must be closed under
/// (i, j, v) -> (j, i, conj v); this is checked at construction.
class SparseOperator {
 public:
  SparseOperator() = default;
  SparseOperator(Index dim, const std::vector<Triplet>& triplets, bool hermitian);

  Index dim() const { return dim_; }
  Index nnz() const { return static_cast<Index>(values_.size()); }
  bool hermitian() const { return hermitian_; }

  const std::vector<Index>& row_ptr() const { return row_ptr_; }
  const std::vector<Index>& col_index() const { return col_index_; }
  const std::vector<Complex>& values() const { return values_; }

  std::vector<Triplet> triplets() const;
  ComplexMatrix to_dense() const;

  /// Max absolute row sum; an upper bound for the operator norm when the
  /// operator is Hermitian.
  double abs_row_sum_norm() const;

 private:
  Index dim_ = 0;
  bool hermitian_ = false;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> col_index_;
  std::vector<Complex> values_;
};

enum class Extreme { Max, Min };

struct SparseEigenOptions {
  double tol = kIterativeTol;  // residual target relative to abs_row_sum_norm
  std::uint64_t seed = 0;
  int krylov_dim = 80;
  int max_restarts = 100;
  int power_iterations = 20000;  // fallback budget
  ComplexVector start;           // initial vector; random when empty
};

struct SparseEigenResult {
  double value = 0.0;        // Rayleigh quotient of `vector`
  ComplexVector vector;      // unit vector
  double residual = 0.0;     // ||S v - value v||
  double residual_bound = 0.0;  // tol * abs_row_sum_norm
  bool converged = false;
  int matvecs = 0;
  bool used_power_fallback = false;
};

/// Extreme eigenvalue of a Hermitian sparse operator by restarted Lanczos
/// with full reorthogonalization, falling back to shifted power iteration.
/// The returned value is the Rayleigh quotient of a unit vector, so for
/// Extreme::Max it never exceeds the true lambda_max (up to rounding).
SparseEigenResult sparse_extreme_eigen(const SparseOperator& s, Extreme which,
                                       const SparseEigenOptions& options = {});

}  // namespace jnr::linalg
