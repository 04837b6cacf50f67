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

#include "jnr/linalg/eigen.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace jnr::linalg {

EigenDecomposition hermitian_eigen(const HermitianMatrix& h) {
  EigenDecomposition out;
  if (h.dim() == 0) return out;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolver failed");
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  const ComplexMatrix rebuilt =
      out.vectors * out.values.cast<Complex>().asDiagonal() * out.vectors.adjoint();
  out.residual = (h.matrix() - rebuilt).norm();
  const double scale = std::max(1.0, out.values.cwiseAbs().maxCoeff());
  if (out.residual > kDenseEigenTol * scale * std::max<double>(1.0, h.dim() / 16.0)) {
    throw std::runtime_error("Hermitian eigensolver residual too large: " +
                             std::to_string(out.residual));
  }
  return out;
}

RealVector hermitian_eigenvalues(const HermitianMatrix& h) {
  if (h.dim() == 0) return {};
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolver failed");
  return solver.eigenvalues();
}

ExtremePair lambda_max(const HermitianMatrix& h) {
  const auto eig = hermitian_eigen(h);
  const Index last = eig.values.size() - 1;
  return {eig.values(last), eig.vectors.col(last)};
}

ExtremePair lambda_min(const HermitianMatrix& h) {
  const auto eig = hermitian_eigen(h);
  return {eig.values(0), eig.vectors.col(0)};
}

PsdResult psd_check(const HermitianMatrix& h, double tol) {
  PsdResult out;
  if (h.dim() == 0) return out;
  const auto low = lambda_min(h);
  out.min_eigenvalue = low.value;
  out.psd = low.value >= -tol;
  if (!out.psd) out.witness = low.vector;
  return out;
}

}  // namespace jnr::linalg
