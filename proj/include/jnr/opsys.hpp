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
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "jnr/jointrad.hpp"
#include "jnr/linalg/matrix.hpp"
#include "jnr/psdfeas.hpp"

namespace jnr::opsys {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::HermitianMatrix;
using linalg::Index;
using jointrad::OperatorTuple;

/// A_0 (x) I + sum_i A_i (x) E_12,i + A_i^* (x) E_21,i in M_p (x) U_n, where
/// E_12,i is the matrix unit of the i-th 2 x 2 diagonal block of M_2n.
/// Entry (a * 2n + r, b * 2n + s) of the assembled matrix is A(a, b) E(r, s).
class UnElement {
 public:
  UnElement(HermitianMatrix a0, std::vector<ComplexMatrix> a);

  int n() const { return static_cast<int>(a_.size()); }
  Index dim() const { return a0_.dim(); }
  const HermitianMatrix& a0() const { return a0_; }
  const ComplexMatrix& a(int i) const { return a_[static_cast<std::size_t>(i - 1)]; }  // 1-based

  HermitianMatrix assemble() const;

 private:
  HermitianMatrix a0_;
  std::vector<ComplexMatrix> a_;
};

/// File: header `n p`, then A_0 and A_1..A_n in the matrix text format.
UnElement read_un_element(std::istream& in);
UnElement read_un_element_file(const std::string& path);

struct UnPositivity {
  bool psd = true;
  int block = 0;  // first violating i (1-based), 0 when PSD
  double min_eigenvalue = 0.0;  // over all blocks
  ComplexVector witness;        // in C^p (+) C^p for the violating block
};

/// PSD iff every [[A_0, A_i], [A_i^*, A_0]] passes psd_check at tol.
UnPositivity un_positivity(const UnElement& e, double tol);

double un_element_norm(const UnElement& e);

/// (id (x) phi)(X) for the unital map phi: E_12,i -> x_i from U_n to M_p.
HermitianMatrix apply_assignment(const OperatorTuple& x, const UnElement& e);

enum class KposVerdict { PositiveRefuted, Consistent };
std::string_view to_string(KposVerdict v);

struct KposOptions {
  int restarts = 16;
  std::uint64_t seed = 0;
  double tol = 1e-7;
};

struct KposResult {
  KposVerdict verdict = KposVerdict::Consistent;
  int k = 1;
  RadiusEstimate bounds;  // on w_k
  /// When refuted: a positive X in M_k (x) U_n and a unit vector with
  /// <(id (x) phi)(X) xi, xi> = 1 - 2 w < 0.
  std::optional<UnElement> witness;
  ComplexVector witness_vector;
  double witness_value = 0.0;
  bool cross_validated = false;  // X passes un_positivity and the image value is negative
};

KposResult kpos_check(const OperatorTuple& x, int k, const KposOptions& options = {});

enum class UcpVerdict { Certified, Refuted, Undecided };
std::string_view to_string(UcpVerdict v);

struct UcpOptions {
  int max_k = 3;
  int restarts = 16;
  std::uint64_t seed = 0;
  double tol = 1e-7;
};

struct UcpResult {
  UcpVerdict verdict = UcpVerdict::Undecided;
  double lower = 0.0;  // on w_cb
  double upper = std::numeric_limits<double>::infinity();
  std::string upper_source;  // "block-orthogonal", "tridiagonal", or empty
  std::optional<KposResult> refutation;
  std::optional<jointrad::TridiagonalCertificate> certificate;
};

/// UCP of phi iff w_cb(x) <= 1/2; never guesses inside the bound gap.
UcpResult ucp_check(const OperatorTuple& x, const UcpOptions& options = {});

struct ChoiBlockPair {
  HermitianMatrix p;
  ComplexMatrix x;
  HermitianMatrix q;
  ComplexMatrix assemble() const;
};

struct TraceBound {
  double tau_p = 0.0;
  double tau_q = 0.0;
  double conjugated[2][2] = {{0, 0}, {0, 0}};  // tau applied blockwise
  double entry_sum = 0.0;
  double bound = 0.0;  // 1 / w
  double slack = 0.0;  // tau(P + Q) - 1 / w
  bool holds = false;  // slack >= -tol
};

/// Conjugates [[P, x], [x^*, Q]] by diag(-u, 1), applies the normalized
/// trace blockwise and reads off tau(P + Q) >= 1/w from the entry sum.
/// PreconditionError names the failing precondition.
TraceBound choi_block_trace_bound(const ChoiBlockPair& b, const ComplexMatrix& u, double w,
                                  double tol);

/// Unitary close to m: a permutation completion when m is a partial
/// permutation matrix, otherwise the polar factor.
struct Reunitarized {
  ComplexMatrix u;
  double perturbation = 0.0;  // ||u - m||
  bool permutation = false;
};
Reunitarized reunitarize(const ComplexMatrix& m);

/// Sparse variant for partial permutation matrices only (PreconditionError
/// otherwise), e.g. truncated regular representations of group elements.
struct SparseReunitarized {
  psdfeas::SparseComplex u;
  double perturbation = 0.0;
  bool permutation = true;
};
SparseReunitarized reunitarize(const psdfeas::SparseComplex& m);

struct ObstructionOptions {
  /// Upper bound on w_cb used in the chain; computed with wcb_upper_search
  /// when empty.
  std::optional<double> w;
  std::string w_source = "supplied";
  int budget = 50000;
  std::uint64_t seed = 0;
  double tol = 1e-7;
  Index hermitian_limit = 48;  // larger p uses diagonal P_j, Q_j
  Index dense_search_limit = 64;
};

struct ObstructionReport {
  bool applicable = false;
  int n = 0;
  Index p = 0;
  double w = 0.0;
  std::string w_source;
  double ratio = 0.0;  // n / w
  std::vector<std::string> chain;
  std::string ansatz;  // "hermitian" or "diagonal"
  psdfeas::Status solver_status = psdfeas::Status::Unknown;
  int solver_iterations = 0;
  std::string stop_reason;
  double psd_residual = 0.0;
  double affine_residual = 0.0;
  bool discrepancy = false;  // solver produced a verified witness
};

/// For unitaries u_j and a certified w < n: the trace chain
/// sum_j tau(P_j + Q_j) >= n / w > 1 = tau(I) rules out every completion
/// [[P_j, u_j / (2w)], [., Q_j]] >= 0 with sum_j (P_j + Q_j) = I; the same
/// completion problem is then handed to the feasibility solver.
ObstructionReport lp_obstruction_demo(const OperatorTuple& u, const ObstructionOptions& options = {});
/// Sparse unitaries of any size. Without options.w, dimensions above
/// options.dense_search_limit report NOT_APPLICABLE (no certificate search).
ObstructionReport lp_obstruction_demo(const std::vector<psdfeas::SparseComplex>& u,
                                      const ObstructionOptions& options = {});

struct BoundValue {
  std::string id;
  double value = 0.0;
};

struct BoundVerdict {
  std::string relation;
  bool holds = false;
};

struct BoundReport {
  int n = 0;
  std::vector<BoundValue> values;  // d_inf_un_lower, kesten_w, hausdorff_lower, hausdorff_floor, dinf_sn_lower
  double value(std::string_view id) const;
  /// Recomputed from the values on every call.
  std::vector<BoundVerdict> verdicts() const;
};

double d_inf_un_lower(double n);
double kesten_w(double n);
double hausdorff_lower(double n);
double hausdorff_floor(double n);
double dinf_sn_lower(double n);

/// n >= 2, else InputError.
BoundReport bound_calculators(int n);

}  // namespace jnr::opsys
