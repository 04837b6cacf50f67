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
#include <optional>
#include <vector>

#include "jnr/linalg/matrix.hpp"
#include "jnr/numrad.hpp"

namespace jnr::jointrad {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::HermitianMatrix;
using linalg::Index;

/// Nonempty tuple of p x p complex matrices with finite entries.
class OperatorTuple {
 public:
  explicit OperatorTuple(std::vector<ComplexMatrix> matrices);

  std::size_t size() const { return m_.size(); }
  Index dim() const { return m_.front().rows(); }
  const ComplexMatrix& operator[](std::size_t i) const { return m_[i]; }
  const std::vector<ComplexMatrix>& matrices() const { return m_; }

  /// sqrt(sum_i ||x_i||_F^2); every routine works on the tuple divided by
  /// this scale, so tolerances are relative to it.
  double scale() const;
  OperatorTuple scaled(Complex c) const;

 private:
  std::vector<ComplexMatrix> m_;
};

/// sum_i U_i (x) x_i for k x k matrices U_i; index a * p + r.
ComplexMatrix pencil(const OperatorTuple& t, const std::vector<ComplexMatrix>& u);

/// The generator tuple of U_n: E_12 in the i-th of n orthogonal 2 x 2 diagonal blocks.
OperatorTuple un_generators(int n);

struct W1Options {
  double tol = 1e-6;  // relative to the tuple scale
  int grid = 16;      // initial samples per angle
  int max_evaluations = 200000;  // eigenvalue solves
  std::uint64_t seed = 0;
};

struct W1Result {
  RadiusEstimate estimate;
  /// Phases with w(sum_i e^{i phi_i} x_i) = estimate.lower (phi_0 = 0), and the
  /// angle and unit vector attaining it.
  std::vector<double> phases;
  double theta = 0.0;
  ComplexVector vector;
  int evaluations = 0;
};

/// w_1 = max over unimodular scalars of w(sum_i c_i x_i). For 2 or 3
/// matrices: branch and bound over one angle per matrix with a second-order
/// cell bound, stopping at width tol or at the evaluation budget (flat
/// objectives exhaust it; the enclosure is then wider than tol). For more
/// matrices: phase ascent for the lower bound and sum_i w(x_i) above.
W1Result w1(const OperatorTuple& t, const W1Options& options = {});

struct WkOptions {
  int restarts = 16;
  std::uint64_t seed = 0;
  double tol = 1e-9;  // stop once a sweep gains less, relative to the tuple scale
  int max_sweeps = 200;
  /// Diagonal phase start; computed with w1 when empty.
  std::vector<double> phases;
};

struct WkResult {
  RadiusEstimate estimate;  // upper stays +inf: ascent never certifies
  std::vector<ComplexMatrix> unitaries;
  double theta = 0.0;
  ComplexVector vector;  // attains estimate.lower for pencil(t, unitaries)
  int best_restart = 0;
  int sweeps = 0;
};

/// Lower bound for w_k by block-coordinate ascent over unitary k-tuples.
/// Restart 0 starts from the w1 phases; restarts 1.. from Haar unitaries.
WkResult wk_lower(const OperatorTuple& t, int k, const WkOptions& options = {});

/// Tridiagonal block matrix with diagonal P_1..P_{n+1} and off-diagonal
/// blocks c_i x_i at (i, i+1) (adjoints below).
struct TridiagonalCertificate {
  std::vector<HermitianMatrix> diagonal;
  std::vector<ComplexMatrix> off_diagonal;

  static TridiagonalCertificate from(const OperatorTuple& t, std::vector<HermitianMatrix> diagonal,
                                     const std::vector<Complex>& coeffs = {});
  ComplexMatrix assemble() const;
};

struct CertificateCheck {
  bool valid = false;
  double diag_sum_norm = 0.0;  // ||sum P_i||
  double min_eigenvalue = 0.0;
};

CertificateCheck verify_tridiagonal_certificate(const TridiagonalCertificate& c, double tol);

/// Normalisation between the certificate and w_cb: w_cb <= kappa * ||sum P_i||.
inline constexpr double kKappa = 0.5;

enum class WcbRoute { Barrier, Bisection };

struct WcbOptions {
  WcbRoute route = WcbRoute::Barrier;
  int bisection_steps = 12;
  int solver_iterations = 4000;
  double tol = 1e-6;  // relative to the tuple scale
  std::uint64_t seed = 0;
};

struct WcbResult {
  RadiusEstimate estimate;  // upper = kappa * diag_sum_norm when certified
  double diag_sum_norm = std::numeric_limits<double>::infinity();
  double kappa = kKappa;
  std::optional<TridiagonalCertificate> certificate;
  int feasibility_solves = 0;
  int newton_steps = 0;
};

/// Smallest certified ||sum P_i|| found. Starts from an analytic seed built
/// from |x_i| and |x_i^*|, then either minimizes with a log-barrier method
/// (default) or bisects on the target with PSD feasibility solves. Every
/// candidate is repaired by a diagonal shift and re-verified before use.
WcbResult wcb_upper_search(const OperatorTuple& t, const WcbOptions& options = {});

/// Index sets supporting each x_i (rows and columns), if they are pairwise
/// disjoint; nullopt otherwise.
std::optional<std::vector<std::vector<Index>>> detect_block_supports(const OperatorTuple& t,
                                                                     double tol = 0.0);

/// Exact w_cb = max_i w(x_i) for matrices living in orthogonal diagonal
/// blocks; ShapeError/PreconditionError when the declared supports are not
/// disjoint or do not contain the matrices.
RadiusEstimate block_orthogonal_wcb(const OperatorTuple& t,
                                    const std::vector<std::vector<Index>>& supports,
                                    double tol = 1e-9);
RadiusEstimate block_orthogonal_wcb(const OperatorTuple& t, double tol = 1e-9);

}  // namespace jnr::jointrad
