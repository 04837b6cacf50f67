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


// Random instance families shared by the unit tests and the acceptance binary.

#pragma once

#include <complex>
#include <random>
#include <vector>

#include "jnr/linalg.hpp"
#include "jnr/psdfeas.hpp"

namespace jnr::testing {

inline linalg::SparseOperator random_sparse_hermitian(linalg::Index dim, double density, linalg::Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::bernoulli_distribution keep(density);
  std::vector<linalg::Triplet> t;
  for (linalg::Index i = 0; i < dim; ++i) {
    t.push_back({i, i, u(rng)});
    for (linalg::Index j = i + 1; j < dim; ++j) {
      if (!keep(rng)) continue;
      const linalg::Complex v(u(rng), u(rng));
      t.push_back({i, j, v});
      t.push_back({j, i, std::conj(v)});
    }
  }
  return linalg::SparseOperator(dim, t, true);
}

// 3x3 scalar pattern with two real unknowns a, b, sometimes tied by an equality.
inline psdfeas::FeasibilityProblem random_tiny(std::mt19937_64& rng) {
  using psdfeas::Cell;
  auto scalar = [](linalg::Complex z) { return linalg::ComplexMatrix::Constant(1, 1, z); };
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  psdfeas::FeasibilityProblem p;
  const int a = p.add_variable("a", psdfeas::VarKind::Hermitian, 1);
  const int b = p.add_variable("b", psdfeas::VarKind::Hermitian, 1);
  const int d1 = p.add_constant("d1", scalar(0.5 + 0.6 * u(rng)));
  const int d2 = p.add_constant("d2", scalar(0.5 + 0.6 * u(rng)));
  const int d3 = p.add_constant("d3", scalar(0.5 + 0.6 * u(rng)));
  const int o = p.add_constant("o", scalar(0.7 * linalg::Complex(u(rng), u(rng))));
  p.add_psd({{Cell::constant(d1), Cell::var(a), Cell::constant(o)},
             {Cell::var(a), Cell::constant(d2), Cell::var(b)},
             {Cell::constant(o, true), Cell::var(b), Cell::constant(d3)}});
  if (rng() % 2) p.add_affine({{a, 0, 0, 1.0}, {b, 0, 0, u(rng)}}, 2.0 * u(rng));
  return p;
}

}  // namespace jnr::testing
