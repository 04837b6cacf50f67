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

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "jnr/errors.hpp"
#include "jnr/linalg.hpp"
#include "jnr/numrad.hpp"

using namespace jnr;
using namespace jnr::linalg;

TEST_CASE("numerical_radius: closed cases") {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = 1.0;
  h(1, 1) = -2.0;
  auto r = numrad::numerical_radius(h, 1e-10).estimate;
  CHECK(r.lower <= 2.0 + 1e-12);
  CHECK(r.upper >= 2.0 - 1e-12);
  CHECK(r.width() <= 1e-10);

  // Re(e^{-i theta} E12) has eigenvalues +-1/2 for every theta.
  const auto e12 = matrix_unit(2, 2, 0, 1);
  for (double theta : {0.0, 0.4, 2.0, 5.5}) {
    CHECK(numrad::support_value(e12, theta) == doctest::Approx(0.5).epsilon(1e-13));
  }
  r = numrad::numerical_radius(e12, 1e-10).estimate;
  CHECK(std::abs(r.lower - 0.5) <= 1e-8);
  CHECK(std::abs(r.upper - 0.5) <= 1e-8);

  Rng rng(8);
  for (int k = 0; k < 5; ++k) {
    const auto u = random_unitary(3 + k, rng);
    const auto ru = numrad::numerical_radius(u, 1e-9).estimate;
    CHECK(ru.lower <= 1.0 + 1e-12);
    CHECK(ru.upper >= 1.0 - 1e-9);
    CHECK(ru.width() <= 1e-9);
  }
  CHECK_THROWS_AS(numrad::numerical_radius(e12, 0.0), PreconditionError);
  CHECK_THROWS_AS(numrad::numerical_radius(ComplexMatrix::Zero(2, 3), 1e-3), ShapeError);
}

TEST_CASE("numerical_radius: maximizing vector attains the lower bound") {
  Rng rng(31);
  for (int k = 0; k < 10; ++k) {
    const ComplexMatrix t = random_ginibre(4, 4, rng);
    const auto nr = numrad::numerical_radius(t, 1e-9);
    const Complex q = nr.vector.dot(t * nr.vector);  // <T h, h>
    CHECK(std::abs(q) >= nr.estimate.lower - 1e-10);
    CHECK((std::polar(1.0, -nr.theta) * q).real() == doctest::Approx(nr.estimate.lower).epsilon(1e-10));
  }
}

TEST_CASE("real_part") {
  Rng rng(4);
  const auto h = random_hermitian(3, rng);
  CHECK((numrad::real_part(h.matrix()).matrix() - h.matrix()).cwiseAbs().maxCoeff() < 1e-15);
  const ComplexMatrix g = random_ginibre(3, 3, rng);
  const ComplexMatrix skew = g - g.adjoint();
  CHECK(numrad::real_part(skew).matrix().cwiseAbs().maxCoeff() < 1e-15);
  ComplexMatrix half_x(2, 2);
  half_x << 0.0, 0.5, 0.5, 0.0;
  CHECK((numrad::real_part(matrix_unit(2, 2, 0, 1)).matrix() - half_x).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("properties: norm sandwich, rotation invariance, subadditivity") {
  Rng rng(2024);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const double tol = 1e-9;
  for (int k = 0; k < 40; ++k) {
    const Index n = 1 + k % 5;
    const ComplexMatrix s = random_ginibre(n, n, rng);
    const ComplexMatrix t = random_ginibre(n, n, rng);
    const auto wt = numrad::numerical_radius(t, tol).estimate;
    const double nt = operator_norm(t);
    CHECK(wt.upper >= nt / 2.0 - 1e-12);
    CHECK(wt.lower <= nt + 1e-12);
    const auto wrot = numrad::numerical_radius(std::polar(1.0, angle(rng)) * t, tol).estimate;
    CHECK(std::abs(wrot.lower - wt.lower) <= 2 * tol);
    const auto ws = numrad::numerical_radius(s, tol).estimate;
    const auto wsum = numrad::numerical_radius(s + t, tol).estimate;
    CHECK(wsum.lower <= ws.upper + wt.upper + 2 * tol);
  }
}
