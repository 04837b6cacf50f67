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
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "jnr/linalg/sparse.hpp"
#include "jnr/numrad.hpp"

namespace jnr::groups {

using linalg::Complex;
using linalg::Index;
using linalg::SparseOperator;

enum class GroupKind { Free, FreeAbelian, Cyclic };

/// Free(n), FreeAbelian(d) = Z^d or Cyclic(m) = Z/m, each with its standard
/// generators. `order` is n, d or m.
struct GroupSpec {
  GroupKind kind = GroupKind::Free;
  int order = 1;

  static GroupSpec free(int n);
  static GroupSpec abelian(int d);
  static GroupSpec cyclic(int m);

  int generators() const { return kind == GroupKind::Cyclic ? 1 : order; }
  std::string to_string() const;
  bool operator==(const GroupSpec&) const = default;
};

/// Parses "free:n", "abelian:d" or "cyclic:m".
GroupSpec parse_group_spec(std::string_view text);

/// Signed generator indices: +i for g_i, -i for its inverse (i is 1-based).
struct Word {
  std::vector<int> letters;
  bool operator==(const Word&) const = default;
};

/// Normal form. Free: no adjacent cancelling pair. FreeAbelian: letters
/// sorted by generator with a single signed run each. Cyclic: e copies of +1
/// with 0 <= e < m.
Word reduce(const GroupSpec& spec, const std::vector<int>& letters);

inline constexpr Index kDefaultBallCap = 5'000'000;

/// Number of elements of word length <= radius (as a double, no overflow).
double projected_ball_size(const GroupSpec& spec, int radius);

/// Breadth-first ball of the Cayley graph. Letter order is +1..+k then
/// -1..-k; element 0 is the identity.
class BallIndex {
 public:
  BallIndex(const GroupSpec& spec, int radius, Index cap = kDefaultBallCap);

  const GroupSpec& spec() const { return spec_; }
  int radius() const { return radius_; }
  Index size() const { return static_cast<Index>(length_.size()); }
  int letter_count() const { return letters_; }

  /// Position of letter * element, or -1 when outside the ball. Letter slots
  /// are 0..k-1 for +1..+k and k..2k-1 for the inverses.
  std::int32_t neighbor(Index element, int slot) const {
    return neighbors_[static_cast<std::size_t>(element) * letters_ + slot];
  }
  int length(Index element) const { return length_[element]; }
  Word word(Index element) const;
  /// Position of a word (reduced first), or -1 when outside the ball.
  Index find(const Word& w) const;

 private:
  GroupSpec spec_;
  int radius_;
  int letters_;
  std::vector<std::int32_t> neighbors_;
  std::vector<std::int32_t> parent_;   // element with the first letter removed
  std::vector<std::int8_t> first_;     // slot of the first letter
  std::vector<int> length_;
  std::vector<int> exponents_;  // abelian and cyclic only
  std::unordered_map<std::string, std::int32_t> lookup_;
};

/// Compression of A = sum_i coeffs_i lambda(g_i) to l^2(ball):
/// entry (h, g) = coeffs_i when h = g_i g.
SparseOperator rep_operator(const GroupSpec& spec, const std::vector<Complex>& coeffs, int radius,
                            Index cap = kDefaultBallCap);
SparseOperator rep_operator(const BallIndex& ball, const std::vector<Complex>& coeffs);

/// Compression of Re A = (A + A^*)/2, flagged Hermitian.
SparseOperator real_rep_operator(const GroupSpec& spec, const std::vector<Complex>& coeffs,
                                 int radius, Index cap = kDefaultBallCap);
SparseOperator real_rep_operator(const BallIndex& ball, const std::vector<Complex>& coeffs);

enum class ReNormRoute {
  Auto,       // tree pivots for free groups, Krylov otherwise
  TreePivot,  // free groups only
  Krylov,     // explicit ball
};

struct ReNormOptions {
  double tol = 1e-10;
  std::uint64_t seed = 0;
  ReNormRoute route = ReNormRoute::Auto;
  Index cap = kDefaultBallCap;
  Index dense_limit = 600;  // explicit balls up to this size use a dense solver
};

/// lambda_max of the compressed Re A for nonnegative coefficients. This is a
/// lower bound for ||Re A||; the upper field is sum(coeffs).
RadiusEstimate re_norm_lower(const GroupSpec& spec, const std::vector<double>& coeffs, int radius,
                             const ReNormOptions& options = {});

/// lambda_max of Re A compressed to the free-group ball, computed by
/// bisection on the signs of the leaf-to-root LDL^T pivots of lambda - Re A.
/// Returns [lo, hi] with lo <= lambda_max <= hi and hi - lo <= tol.
struct PivotBracket {
  double lo = 0.0;
  double hi = 0.0;
  int iterations = 0;
};
PivotBracket free_ball_lambda_max(int n, const std::vector<double>& coeffs, int radius, double tol);

/// True when lambda * I - Re A on the free-group ball is positive definite.
bool free_ball_shift_is_pd(int n, const std::vector<double>& coeffs, int radius, double lambda);

enum class AmenabilityHint { AmenableConsistent, NonamenableConsistent, Inconclusive };
std::string_view to_string(AmenabilityHint h);

struct AmenabilityOptions {
  ReNormOptions norm;
  double gap_threshold = 0.05;   // relative to sum(coeffs)
  double stable_fraction = 0.1;  // last increment / current gap
};

struct AmenabilityReport {
  std::vector<int> radii;
  std::vector<RadiusEstimate> estimates;
  double coeff_sum = 0.0;
  double gap = 0.0;  // coeff_sum - best lower bound, clamped at 0
  AmenabilityHint hint = AmenabilityHint::Inconclusive;
  bool heuristic = true;
};

AmenabilityReport amenability_gap(const GroupSpec& spec, const std::vector<double>& coeffs,
                                  const std::vector<int>& schedule,
                                  const AmenabilityOptions& options = {});

struct W1GroupReport {
  double phase_optimized = 0.0;  // max over phases of lambda_max(Re sum e^{i psi_j} a_j P l_j P)
  std::vector<double> phases;
  double modulus_value = 0.0;    // re_norm_lower with |coeffs| on the same ball
  double difference = 0.0;
  bool agree = false;            // difference <= 1e-6
  int evaluations = 0;
};

W1GroupReport w1_group_check(const GroupSpec& spec, const std::vector<Complex>& coeffs, int radius,
                             const ReNormOptions& options = {});

}  // namespace jnr::groups
