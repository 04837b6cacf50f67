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

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace jnr::linalg {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;
using Rng = std::mt19937_64;

// Tolerance ladder: structure, dense eigen residuals, iterative residuals.
inline constexpr double kStructuralTol = 1e-12;
inline constexpr double kDenseEigenTol = 1e-10;
inline constexpr double kIterativeTol = 1e-7;

/// Square matrix equal to its adjoint. Construction checks the defect
/// against `tol * max(1, max|entry|)` and then symmetrizes exactly, so the
/// stored matrix is Hermitian to the last bit with a real diagonal.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& m, double tol = kStructuralTol);

  /// Symmetrizes without checking. For matrices that are Hermitian by
  /// construction (real parts, Gram matrices) up to rounding.
  static HermitianMatrix symmetrized(const ComplexMatrix& m);

  Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  struct Trusted {};
  HermitianMatrix(Trusted, ComplexMatrix m) : m_(std::move(m)) {}

  ComplexMatrix m_;
};

/// max |M - M^*| entrywise.
double hermiticity_defect(const ComplexMatrix& m);

bool all_finite(const ComplexMatrix& m);

/// Largest singular value.
double operator_norm(const ComplexMatrix& m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Matrix unit E_ij of the given shape (zero-indexed).
ComplexMatrix matrix_unit(Index rows, Index cols, Index i, Index j);

/// (T + T^*)/2.
HermitianMatrix real_part(const ComplexMatrix& t);

bool is_unitary(const ComplexMatrix& u, double tol);

/// Unitary polar factor of a square matrix (U in M = U|M|).
ComplexMatrix polar_unitary(const ComplexMatrix& m);

/// |M| = (M^* M)^{1/2}.
ComplexMatrix abs_matrix(const ComplexMatrix& m);

/// Normalized trace tr(M)/dim.
Complex normalized_trace(const ComplexMatrix& m);

ComplexMatrix random_ginibre(Index rows, Index cols, Rng& rng);
ComplexMatrix random_unitary(Index dim, Rng& rng);
HermitianMatrix random_hermitian(Index dim, Rng& rng);
ComplexVector random_unit_vector(Index dim, Rng& rng);

}  // namespace jnr::linalg
