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
#include <string>
#include <string_view>
#include <vector>

#include "jnr/jointrad.hpp"
#include "jnr/linalg/matrix.hpp"
#include "jnr/opsys.hpp"

namespace jnr::ranges {

using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::Index;
using jointrad::OperatorTuple;

enum class MembershipStatus { In, Out, Undecided };
std::string_view to_string(MembershipStatus s);

/// Which re-checkable object backs a verdict.
enum class Evidence { Norms, NormWitness, Tridiagonal, BlockOrthogonal, PositivityWitness, Choi, Interval };
std::string_view to_string(Evidence e);

struct MembershipVerdict {
  MembershipStatus status = MembershipStatus::Undecided;
  Evidence evidence = Evidence::Interval;
  /// Bounds on the tested quantity: max_i ||B_i|| for S_d, w_cb or w_k for U_d.
  double lower = 0.0;
  double upper = 0.0;
  int k = 0;  // level for k-max membership, 0 otherwise

  // Norm witness: ||B_slot x|| > 1 + tol.
  Index slot = -1;
  ComplexVector vector;

  std::optional<jointrad::TridiagonalCertificate> certificate;
  std::optional<std::vector<std::vector<Index>>> supports;
  std::optional<opsys::KposResult> witness;
  std::optional<ComplexMatrix> choi;

  /// Set by membership_W when the U_d cross-check proves B lies outside.
  bool out_flag = false;
  std::vector<std::string> assumptions;
  std::string note;
};

struct MembershipOptions {
  double tol = 1e-7;
  int budget = 16;  // ascent restarts, or solver iterations / 1000 for membership_W
  int max_k = 3;
  std::uint64_t seed = 0;
};

/// Product of closed unit balls; always decisive.
MembershipVerdict membership_Sn(const OperatorTuple& b, double tol = 1e-9);

/// w_cb(A) <= 1/2.
MembershipVerdict membership_Un(const OperatorTuple& a, const MembershipOptions& options = {});

/// w_k(A) <= 1/2.
MembershipVerdict membership_kmax_Un(const OperatorTuple& a, int k,
                                     const MembershipOptions& options = {});

/// B in W^n(T) through a Choi matrix of a unital CP map M_m -> M_n. Only IN
/// or UNDECIDED.
MembershipVerdict membership_W(const OperatorTuple& t, const OperatorTuple& b,
                               const MembershipOptions& options = {});

/// Re-checks the evidence of an IN or OUT verdict for the tuple it was issued
/// for, without the search that produced it. UNDECIDED verdicts never verify.
bool verify_membership(const MembershipVerdict& v, const OperatorTuple& b, double tol);

/// Vectorized Choi matrix check: PSD, partial trace I, phi(T_i) = B_i.
bool verify_choi(const ComplexMatrix& choi, const OperatorTuple& t, const OperatorTuple& b,
                 double tol);

enum class RefuteStatus { Refuted, NoWitnessFound };
std::string_view to_string(RefuteStatus s);

struct RefuteResult {
  RefuteStatus status = RefuteStatus::NoWitnessFound;
  int k = 1;
  std::string family;  // "block-orthogonal" or "scalar"
  std::optional<OperatorTuple> witness;  // A with w_cb(A) <= 1/2
  double witness_wcb = 0.0;  // certified upper bound on w_cb(A)
  double value = 0.0;        // w(sum_i B_i (x) A_i)
  int candidates = 0;
};

/// Looks for A with an exactly certified w_cb(A) <= 1/2 and
/// w(sum_i B_i (x) A_i) > 1/2 + tol.
RefuteResult omin_refute(const OperatorTuple& b, int k, const MembershipOptions& options = {});

struct GapSample {
  int trial = 0;
  double wk_upper = 0.0;   // certified upper bound on w_k of the unitary tuple
  double wcb_upper = 0.0;  // certificate for the rescaled tuple
  double distance = 0.0;
};

struct GapEstimate {
  double estimate = 0.0;
  double reference = 0.0;  // closed-form bound from bound_calculators
  int best_trial = -1;
  std::vector<GapSample> trace;
};

/// Searches Haar unitary p x p n-tuples u, rescaled to A = u / (2 W) with W a
/// certified upper bound on w_k(u), and reports the largest
/// sum_i ||A_i - A_i / (2 r)|| with r a certified upper bound on w_cb(A).
/// Only k = 1 has a certified w_k upper bound short of w_cb; other levels
/// fall back to the w_cb bound and the estimate collapses to about 0.
GapEstimate hausdorff_gap_estimate(int n, int k, Index p, int budget, std::uint64_t seed = 0);

}  // namespace jnr::ranges
