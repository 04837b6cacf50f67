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

#include "jnr/linalg/matrix.hpp"

namespace jnr::linalg {

struct EigenDecomposition {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // orthonormal columns, matching `values`
  double residual = 0.0;  // ||H - V diag(values) V^*||_F
};

/// Full decomposition with a reconstruction post-check; throws
/// std::runtime_error if the residual exceeds 1e-10 * max(1, ||H||).
EigenDecomposition hermitian_eigen(const HermitianMatrix& h);

/// Eigenvalues only, ascending.
RealVector hermitian_eigenvalues(const HermitianMatrix& h);

struct ExtremePair {
  double value = 0.0;
  ComplexVector vector;
};

ExtremePair lambda_max(const HermitianMatrix& h);
ExtremePair lambda_min(const HermitianMatrix& h);

struct PsdResult {
  bool psd = true;
  double min_eigenvalue = 0.0;
  ComplexVector witness;  // unit vector with <Hv,v> < -tol when !psd
};

/// PSD iff lambda_min >= -tol.
PsdResult psd_check(const HermitianMatrix& h, double tol);

}  // namespace jnr::linalg
