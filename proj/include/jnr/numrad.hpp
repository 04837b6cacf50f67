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

#include <limits>
#include <string_view>

#include "jnr/linalg/matrix.hpp"

namespace jnr {

/// Where a bound came from.
enum class BoundMethod { Sweep, Ascent, Krylov, DenseEigen, TreePivot, Certificate, ClosedForm, Unbounded };

std::string_view to_string(BoundMethod m);

/// Certified interval [lower, upper] for a radius-type quantity. An upper
/// bound of +inf (method Unbounded) means no certificate is available.
struct RadiusEstimate {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  BoundMethod lower_method = BoundMethod::Sweep;
  BoundMethod upper_method = BoundMethod::Unbounded;
  int iterations = 0;

  bool has_upper() const { return upper < std::numeric_limits<double>::infinity(); }
  double width() const { return upper - lower; }
};

}  // namespace jnr

namespace jnr::numrad {

using linalg::ComplexMatrix;
using linalg::ComplexVector;

struct NumericalRadius {
  RadiusEstimate estimate;
  /// Angle and unit vector attaining the lower bound:
  /// Re <e^{-i theta} T h, h> = estimate.lower.
  double theta = 0.0;
  ComplexVector vector;
};

struct SweepOptions {
  int initial_samples = 64;
  int refine_best = 3;
  int max_rounds = 60;
  int max_evaluations = 200000;
};

/// w(T) = max over theta of lambda_max(Re(e^{-i theta} T)). The upper bound
/// is the smaller of the Lipschitz bound (slack ||T|| h / 2 per sector) and
/// the circumscribed polygon bound from supporting lines at adjacent sample
/// angles. Sectors are bisected until upper - lower <= tol.
NumericalRadius numerical_radius(const ComplexMatrix& t, double tol,
                                 const SweepOptions& options = {});

/// lambda_max(Re(e^{-i theta} T)).
double support_value(const ComplexMatrix& t, double theta);

/// (T + T^*)/2.
linalg::HermitianMatrix real_part(const ComplexMatrix& t);

}  // namespace jnr::numrad
