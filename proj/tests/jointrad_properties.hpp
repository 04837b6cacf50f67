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


// Randomized invariance suite for the joint radius bounds, shared by the
// unit tests and the acceptance binary.

#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "jnr/jointrad.hpp"
#include "jnr/linalg.hpp"

namespace jnr::testing {

struct TupleBounds {
  double w1_lower = 0, w1_upper = 0;
  std::vector<double> wk;  // k = 1, 2, 3
  double wcb = 0;
};

inline TupleBounds tuple_bounds(const jointrad::OperatorTuple& t, int restarts) {
  TupleBounds b;
  const auto a = jointrad::w1(t);
  b.w1_lower = a.estimate.lower;
  b.w1_upper = a.estimate.upper;
  jointrad::WkOptions o;
  for (int k = 1; k <= 3; ++k) {
    o.restarts = restarts << (k - 1);
    b.wk.push_back(jointrad::wk_lower(t, k, o).estimate.lower);
  }
  b.wcb = jointrad::wcb_upper_search(t).estimate.upper;
  return b;
}

inline double max_gap(const TupleBounds& a, const TupleBounds& b, double scale_b = 1.0) {
  double g = std::max({std::abs(a.w1_lower * scale_b - b.w1_lower),
                       std::abs(a.w1_upper * scale_b - b.w1_upper),
                       std::abs(a.wcb * scale_b - b.wcb)});
  for (std::size_t k = 0; k < a.wk.size(); ++k)
    g = std::max(g, std::abs(a.wk[k] * scale_b - b.wk[k]));
  return g;
}

struct PropertyReport {
  int tuples = 0;
  int homogeneity = 0, exact_scaling = 0, phase = 0, permutation = 0, monotone = 0, sandwich = 0;
  double worst_homogeneity = 0, worst_exact = 0, worst_phase = 0, worst_permutation = 0,
         worst_monotone = 0, worst_sandwich = 0;
  double tol = 0;

  int violations() const {
    return homogeneity + exact_scaling + phase + permutation + monotone + sandwich;
  }
  std::string summary() const {
    std::ostringstream o;
    o << "tuples " << tuples << " tol " << tol << " | homogeneity " << homogeneity << " ("
      << worst_homogeneity << ") exact " << exact_scaling << " (" << worst_exact << ") phase "
      << phase << " (" << worst_phase << ") permutation " << permutation << " ("
      << worst_permutation << ") monotone " << monotone << " (" << worst_monotone
      << ") sandwich " << sandwich << " (" << worst_sandwich << ")";
    return o.str();
  }
};

// Tolerances are relative to the Frobenius scale of the tuple: w1 encloses to
// 1e-6 of it, so every comparison allows tol = 1e-6 * scale. Scaling by a
// power of two must reproduce every bound exactly.
inline PropertyReport run_property_suite(int tuples, std::uint64_t seed, int restarts = 16) {
  PropertyReport r;
  r.tuples = tuples;
  r.tol = 1e-6;
  linalg::Rng rng(seed);
  std::uniform_int_distribution<int> dd(1, 3), pp(2, 3);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.141592653589793);
  auto note = [](int& count, double& worst, double dev, double limit) {
    worst = std::max(worst, dev);
    if (dev > limit) ++count;
  };
  for (int i = 0; i < tuples; ++i) {
    const int d = dd(rng), p = pp(rng);
    std::vector<linalg::ComplexMatrix> x;
    for (int j = 0; j < d; ++j) x.push_back(linalg::random_ginibre(p, p, rng));
    const jointrad::OperatorTuple t(x);
    const double s = t.scale();
    const double tol = r.tol * s;

    const auto b = tuple_bounds(t, restarts);

    const auto b4 = tuple_bounds(t.scaled(4.0), restarts);
    note(r.exact_scaling, r.worst_exact, max_gap(b, b4, 4.0) / s, 0.0);

    const linalg::Complex c = std::polar(0.37, angle(rng));
    note(r.homogeneity, r.worst_homogeneity,
         max_gap(b, tuple_bounds(t.scaled(c), restarts), std::abs(c)) / s,
         r.tol * std::abs(c));

    std::vector<linalg::ComplexMatrix> ph;
    for (const auto& m : x) ph.push_back(std::polar(1.0, angle(rng)) * m);
    note(r.phase, r.worst_phase, max_gap(b, tuple_bounds(jointrad::OperatorTuple(ph), restarts)) / s,
         r.tol);

    std::vector<linalg::ComplexMatrix> perm = x;
    std::shuffle(perm.begin(), perm.end(), rng);
    if (perm.size() > 1 && perm == x) std::reverse(perm.begin(), perm.end());
    note(r.permutation, r.worst_permutation,
         max_gap(b, tuple_bounds(jointrad::OperatorTuple(perm), restarts)) / s, r.tol);

    for (std::size_t k = 0; k + 1 < b.wk.size(); ++k)
      note(r.monotone, r.worst_monotone, (b.wk[k] - b.wk[k + 1]) / s, r.tol);

    double sand = b.w1_lower - tol - b.wk[0];
    for (double v : b.wk) sand = std::max({sand, b.w1_lower - tol - v, v - b.wcb - tol});
    note(r.sandwich, r.worst_sandwich, sand / s + r.tol, r.tol);
  }
  return r;
}

}  // namespace jnr::testing
