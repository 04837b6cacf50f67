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


#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "jnr/errors.hpp"
#include "jnr/groups.hpp"
#include "jnr/linalg/eigen.hpp"

namespace jnr::groups {

namespace {

void check_nonnegative(const GroupSpec& spec, const std::vector<double>& coeffs, bool strict) {
  if (coeffs.size() != static_cast<std::size_t>(spec.generators()))
    throw ShapeError(spec.to_string() + " has " + std::to_string(spec.generators()) +
                     " generators but " + std::to_string(coeffs.size()) + " coefficients were given");
  for (double a : coeffs)
    if (!std::isfinite(a) || a < 0.0 || (strict && a == 0.0))
      throw PreconditionError(strict ? "coefficients must be positive" : "coefficients must be nonnegative");
}

std::vector<Complex> as_complex(const std::vector<double>& a) { return {a.begin(), a.end()}; }

struct Extremal {
  double value;
  linalg::ComplexVector vector;
  BoundMethod method;
};

Extremal top_eigen(const SparseOperator& s, const ReNormOptions& options,
                   const linalg::ComplexVector& start = {}) {
  if (s.dim() <= options.dense_limit) {
    const auto top = linalg::lambda_max(linalg::HermitianMatrix(s.to_dense()));
    return {top.value, top.vector, BoundMethod::DenseEigen};
  }
  linalg::SparseEigenOptions eo;
  eo.tol = options.tol;
  eo.seed = options.seed;
  eo.start = start;
  auto r = linalg::sparse_extreme_eigen(s, linalg::Extreme::Max, eo);
  return {r.value, std::move(r.vector), BoundMethod::Krylov};
}

}  // namespace

// Re A on the free-group ball is a weighted tree: g -- g_i^{+-1} g with weight
// a_i / 2. Eliminating leaves first, the pivot of a vertex depends only on the
// generator of its first letter and its remaining depth.
bool free_ball_shift_is_pd(int n, const std::vector<double>& coeffs, int radius, double lambda) {
  std::vector<double> w2(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) w2[i] = 0.25 * coeffs[i] * coeffs[i];
  std::vector<double> d(static_cast<std::size_t>(n), lambda);
  if (radius == 0) return lambda > 0.0;
  if (lambda <= 0.0) return false;
  for (int h = 1; h < radius; ++h) {
    double all = 0.0;
    for (int j = 0; j < n; ++j) all += 2.0 * w2[j] / d[j];
    std::vector<double> next(d.size());
    for (int i = 0; i < n; ++i) {
      next[i] = lambda - (all - w2[i] / d[i]);
      if (!(next[i] > 0.0)) return false;
    }
    d = std::move(next);
  }
  double root = lambda;
  for (int j = 0; j < n; ++j) root -= 2.0 * w2[j] / d[j];
  return root > 0.0;
}

PivotBracket free_ball_lambda_max(int n, const std::vector<double>& coeffs, int radius, double tol) {
  if (coeffs.size() != static_cast<std::size_t>(n)) throw ShapeError("need one coefficient per generator");
  PivotBracket b;
  if (radius == 0) return b;
  const double sum = std::accumulate(coeffs.begin(), coeffs.end(), 0.0);
  if (sum == 0.0) return b;
  b.hi = sum * (1.0 + 1e-12);
  while (!free_ball_shift_is_pd(n, coeffs, radius, b.hi)) b.hi *= 2.0;
  const double floor = std::max(tol, 4.0 * std::numeric_limits<double>::epsilon() * sum);
  while (b.hi - b.lo > floor && b.iterations < 200) {
    const double mid = 0.5 * (b.lo + b.hi);
    if (mid <= b.lo || mid >= b.hi) break;
    (free_ball_shift_is_pd(n, coeffs, radius, mid) ? b.hi : b.lo) = mid;
    ++b.iterations;
  }
  return b;
}

RadiusEstimate re_norm_lower(const GroupSpec& spec, const std::vector<double>& coeffs, int radius,
                             const ReNormOptions& options) {
  check_nonnegative(spec, coeffs, false);
  if (radius < 0) throw PreconditionError("ball radius must be nonnegative");
  if (!(options.tol > 0.0)) throw PreconditionError("tolerance must be positive");
  ReNormRoute route = options.route;
  if (route == ReNormRoute::Auto)
    route = spec.kind == GroupKind::Free ? ReNormRoute::TreePivot : ReNormRoute::Krylov;
  if (route == ReNormRoute::TreePivot && spec.kind != GroupKind::Free)
    throw PreconditionError("the tree-pivot route needs a free group");

  RadiusEstimate est;
  est.upper = std::accumulate(coeffs.begin(), coeffs.end(), 0.0);
  est.upper_method = BoundMethod::ClosedForm;
  if (route == ReNormRoute::TreePivot) {
    const PivotBracket b = free_ball_lambda_max(spec.order, coeffs, radius, options.tol);
    est.lower = b.lo;
    est.iterations = b.iterations;
    est.lower_method = BoundMethod::TreePivot;
  } else {
    const BallIndex ball(spec, radius, options.cap);
    const Extremal top = top_eigen(real_rep_operator(ball, as_complex(coeffs)), options);
    est.lower = top.value;
    est.lower_method = top.method;
  }
  est.lower = std::clamp(est.lower, 0.0, est.upper);
  return est;
}

std::string_view to_string(AmenabilityHint h) {
  switch (h) {
    case AmenabilityHint::AmenableConsistent: return "AMENABLE-CONSISTENT";
    case AmenabilityHint::NonamenableConsistent: return "NONAMENABLE-CONSISTENT";
    case AmenabilityHint::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

AmenabilityReport amenability_gap(const GroupSpec& spec, const std::vector<double>& coeffs,
                                  const std::vector<int>& schedule,
                                  const AmenabilityOptions& options) {
  check_nonnegative(spec, coeffs, true);
  if (schedule.empty()) throw PreconditionError("radius schedule is empty");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i] <= schedule[i - 1]) throw PreconditionError("radius schedule must be increasing");

  AmenabilityReport rep;
  rep.coeff_sum = std::accumulate(coeffs.begin(), coeffs.end(), 0.0);
  double best = 0.0;
  double previous_best = 0.0;
  for (int r : schedule) {
    rep.radii.push_back(r);
    rep.estimates.push_back(re_norm_lower(spec, coeffs, r, options.norm));
    previous_best = best;
    // Balls are nested, so the best lower bound so far is still valid.
    best = std::max(best, rep.estimates.back().lower);
  }
  rep.gap = std::max(0.0, rep.coeff_sum - best);
  if (rep.gap <= options.gap_threshold * rep.coeff_sum) {
    rep.hint = AmenabilityHint::AmenableConsistent;
  } else if (schedule.size() >= 2) {
    const double step = schedule.back() - schedule[schedule.size() - 2];
    if ((best - previous_best) / step <= options.stable_fraction * rep.gap)
      rep.hint = AmenabilityHint::NonamenableConsistent;
  }
  return rep;
}

W1GroupReport w1_group_check(const GroupSpec& spec, const std::vector<Complex>& coeffs, int radius,
                             const ReNormOptions& options) {
  if (coeffs.size() != static_cast<std::size_t>(spec.generators()))
    throw ShapeError(spec.to_string() + " has " + std::to_string(spec.generators()) +
                     " generators but " + std::to_string(coeffs.size()) + " coefficients were given");
  const int k = spec.generators();
  const BallIndex ball(spec, radius, options.cap);
  W1GroupReport rep;
  rep.phases.assign(static_cast<std::size_t>(k), 0.0);
  linalg::ComplexVector warm;

  // With v the top eigenvector at phases psi, Re sum_j c_j e^{i d_j} with
  // c_j = <v, e^{i psi_j} a_j P l_j P v> minorizes the objective at psi + d;
  // setting d_j = -arg c_j never decreases it.
  ReNormOptions inner = options;
  inner.tol = std::max(options.tol, 1e-8);
  std::vector<double> psi(static_cast<std::size_t>(k), 0.0);
  double best = -std::numeric_limits<double>::infinity();
  for (int it = 0; it < 500; ++it) {
    std::vector<Complex> c(coeffs.size());
    for (int j = 0; j < k; ++j) c[j] = std::polar(1.0, psi[j]) * coeffs[j];
    Extremal top = top_eigen(real_rep_operator(ball, c), inner, warm);
    ++rep.evaluations;
    warm = std::move(top.vector);
    const double gain = top.value - best;
    best = std::max(best, top.value);
    if (it > 0 && gain <= 1e-13 * std::max(1.0, std::abs(best))) break;
    for (int j = 0; j < k; ++j) {
      Complex sum = 0.0;
      for (Index g = 0; g < ball.size(); ++g)
        if (const Index h = ball.neighbor(g, j); h >= 0) sum += std::conj(warm(h)) * warm(g);
      const Complex cj = c[j] * sum;
      if (std::abs(cj) > 0.0) psi[j] = std::remainder(psi[j] - std::arg(cj), 2.0 * std::numbers::pi);
    }
  }
  {
    std::vector<Complex> c(coeffs.size());
    for (int j = 0; j < k; ++j) c[j] = std::polar(1.0, psi[j]) * coeffs[j];
    best = std::max(best, top_eigen(real_rep_operator(ball, c), options, warm).value);
    ++rep.evaluations;
  }
  rep.phase_optimized = best;
  rep.phases = psi;

  std::vector<double> moduli(coeffs.size());
  for (std::size_t j = 0; j < coeffs.size(); ++j) moduli[j] = std::abs(coeffs[j]);
  rep.modulus_value = re_norm_lower(spec, moduli, radius, options).lower;
  rep.difference = std::abs(rep.phase_optimized - rep.modulus_value);
  rep.agree = rep.difference <= 1e-6;
  return rep;
}

}  // namespace jnr::groups
