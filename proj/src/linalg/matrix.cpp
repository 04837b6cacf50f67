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

#include "jnr/linalg/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "jnr/errors.hpp"
#include "jnr/linalg/eigen.hpp"

namespace jnr::linalg {

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) {
    throw ShapeError("Hermitian matrix must be square, got " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()));
  }
  if (!all_finite(m)) throw SymmetryError("Hermitian matrix has non-finite entries");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double defect = hermiticity_defect(m);
  if (defect > tol * scale) {
    throw SymmetryError("matrix is not Hermitian: max |H - H*| = " + std::to_string(defect));
  }
  m_ = (m + m.adjoint()) * 0.5;
}

HermitianMatrix HermitianMatrix::symmetrized(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw ShapeError("Hermitian matrix must be square");
  return HermitianMatrix(Trusted{}, (m + m.adjoint()) * 0.5);
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool all_finite(const ComplexMatrix& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

double operator_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix matrix_unit(Index rows, Index cols, Index i, Index j) {
  ComplexMatrix e = ComplexMatrix::Zero(rows, cols);
  e(i, j) = 1.0;
  return e;
}

HermitianMatrix real_part(const ComplexMatrix& t) {
  if (t.rows() != t.cols()) throw ShapeError("real part needs a square matrix");
  return HermitianMatrix::symmetrized(t);
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  const ComplexMatrix defect = u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols());
  return defect.cwiseAbs().maxCoeff() <= tol;
}

ComplexMatrix polar_unitary(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw ShapeError("polar factor needs a square matrix");
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

ComplexMatrix abs_matrix(const ComplexMatrix& m) {
  const auto gram = HermitianMatrix::symmetrized(m.adjoint() * m);
  const auto eig = hermitian_eigen(gram);
  RealVector roots = eig.values.cwiseMax(0.0).cwiseSqrt();
  return eig.vectors * roots.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

Complex normalized_trace(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw ShapeError("trace needs a nonempty square matrix");
  return m.trace() / static_cast<double>(m.rows());
}

ComplexMatrix random_ginibre(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) g(i, j) = Complex(gauss(rng), gauss(rng)) / std::sqrt(2.0);
  return g;
}

ComplexMatrix random_unitary(Index dim, Rng& rng) {
  const ComplexMatrix g = random_ginibre(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix column phases so the distribution is Haar.
  for (Index j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

HermitianMatrix random_hermitian(Index dim, Rng& rng) {
  const ComplexMatrix g = random_ginibre(dim, dim, rng);
  return HermitianMatrix::symmetrized(g);
}

ComplexVector random_unit_vector(Index dim, Rng& rng) {
  ComplexVector v = random_ginibre(dim, 1, rng).col(0);
  return v / v.norm();
}

}  // namespace jnr::linalg
