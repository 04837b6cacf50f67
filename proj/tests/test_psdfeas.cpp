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
#include <random>
#include <sstream>

#include "doctest.h"
#include "jnr/errors.hpp"
#include "jnr/linalg.hpp"
#include "jnr/psdfeas.hpp"
#include "instances.hpp"

using namespace jnr;
using namespace jnr::psdfeas;
using linalg::ComplexMatrix;
using linalg::HermitianMatrix;
using jnr::testing::random_tiny;

namespace {

ComplexMatrix scalar(Complex z) { return ComplexMatrix::Constant(1, 1, z); }

}  // namespace

TEST_CASE("project_psd") {
  linalg::Rng rng(3);
  const HermitianMatrix id(ComplexMatrix::Identity(3, 3));
  CHECK((project_psd(id).matrix() - id.matrix()).norm() == 0.0);
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -2.0;
  const auto pd = project_psd(HermitianMatrix(d)).matrix();
  CHECK(std::abs(pd(0, 0) - 1.0) < 1e-14);
  CHECK(std::abs(pd(1, 1)) < 1e-14);

  for (int trial = 0; trial < 20; ++trial) {
    const auto h = linalg::random_hermitian(6, rng);
    const auto p = project_psd(h);
    CHECK(linalg::psd_check(p, 1e-12).psd);
    const auto ev = linalg::hermitian_eigenvalues(h);
    double neg = 0.0;
    for (int i = 0; i < ev.size(); ++i) neg += ev(i) < 0 ? ev(i) * ev(i) : 0.0;
    CHECK((h.matrix() - p.matrix()).norm() == doctest::Approx(std::sqrt(neg)).epsilon(1e-10));
    CHECK((project_psd(p).matrix() - p.matrix()).norm() <= 1e-12);
    for (int s = 0; s < 5; ++s) {
      const ComplexMatrix g = linalg::random_ginibre(6, 6, rng);
      const ComplexMatrix q = g * g.adjoint();
      const double ip = ((h.matrix() - p.matrix()).adjoint() * (q - p.matrix())).trace().real();
      CHECK(ip <= 1e-9);
    }
  }
}

TEST_CASE("problem construction") {
  FeasibilityProblem p;
  const int x = p.add_variable("X", VarKind::Hermitian, 3);
  const int y = p.add_variable("Y", VarKind::Diagonal, 2);
  CHECK(p.param_count() == 11);
  CHECK_THROWS_AS(p.add_variable("X", VarKind::Diagonal, 1), PreconditionError);
  CHECK_THROWS_AS(p.add_variable("Z", VarKind::Diagonal, 0), ShapeError);
  linalg::Rng rng(1);
  const ComplexMatrix hx = linalg::random_hermitian(3, rng).matrix();
  ComplexMatrix hy = ComplexMatrix::Zero(2, 2);
  hy(0, 0) = 0.5;
  hy(1, 1) = -1.5;
  const auto params = p.params_from({hx, hy});
  CHECK((p.value(x, params) - hx).norm() <= 1e-15);
  CHECK((p.value(y, params) - hy).norm() == 0.0);
  CHECK_THROWS_AS(p.add_affine({{y, 0, 1, 1.0}}, 0.0), ShapeError);
  CHECK_THROWS_AS(p.add_affine({{x, 3, 0, 1.0}}, 0.0), ShapeError);

  const int c = p.add_constant("C", ComplexMatrix::Ones(3, 2));
  const int sq = p.add_constant("S", ComplexMatrix::Ones(3, 3));
  CHECK_THROWS_AS(p.add_psd({{Cell::var(x), Cell::constant(sq)}, {Cell::constant(sq), Cell::var(x)}}),
                  SymmetryError);
  CHECK_THROWS_AS(p.add_psd({{Cell::var(x), Cell::var(x)}, {Cell::zero(), Cell::var(x)}}), SymmetryError);
  CHECK_THROWS_AS(p.add_psd({{Cell::var(x), Cell::constant(c, true)}, {Cell::constant(c), Cell::var(y)}}),
                  ShapeError);
  p.add_psd({{Cell::var(x), Cell::constant(c)}, {Cell::constant(c, true), Cell::var(y)}});
  const auto m = p.assemble(0, params);
  CHECK(m.rows() == 5);
  CHECK((m.topLeftCorner(3, 3) - hx).norm() <= 1e-15);
  CHECK((m.topRightCorner(3, 2) - ComplexMatrix::Ones(3, 2)).norm() == 0.0);
  CHECK(linalg::hermiticity_defect(m) == 0.0);
}

TEST_CASE("solve: small feasible and infeasible cases") {
  {
    FeasibilityProblem p;
    const int x = p.add_variable("X", VarKind::Hermitian, 2);
    p.add_psd({{Cell::var(x)}});
    p.add_affine({{x, 0, 0, 1.0}, {x, 1, 1, 1.0}}, 1.0);
    const auto r = solve(p);
    REQUIRE(r.status == Status::Feasible);
    CHECK(verify(p, r.x, p.tol).ok);
    CHECK(p.value(x, r.x).trace().real() == doctest::Approx(1.0));
  }
  {
    // [[I, A],[A^*, X]] with X = 0 and A != 0 is infeasible (Schur complement).
    FeasibilityProblem p;
    const int x = p.add_variable("X", VarKind::Hermitian, 2);
    const int i = p.add_constant("I", ComplexMatrix::Identity(2, 2));
    ComplexMatrix a = ComplexMatrix::Zero(2, 2);
    a(0, 1) = 1.0;
    const int ca = p.add_constant("A", a);
    p.add_psd({{Cell::constant(i), Cell::constant(ca)}, {Cell::constant(ca, true), Cell::var(x)}});
    p.fix_variable(x, ComplexMatrix::Zero(2, 2));
    const auto r = solve(p);
    CHECK(r.status == Status::Unknown);
    CHECK(r.psd_residual > 0.1);
    CHECK(brute_force_oracle(p).verdict == OracleVerdict::Infeasible);
  }
  {
    FeasibilityProblem p;
    const int x = p.add_variable("X", VarKind::Hermitian, 1);
    p.add_affine({{x, 0, 0, 1.0}}, 1.0);
    CHECK_THROWS_AS(p.add_affine({{x, 0, 0, 0.0}}, 1.0), IllPosedError);
    p.add_affine({{x, 0, 0, 2.0}}, 3.0);
    p.add_psd({{Cell::var(x)}});
    CHECK_THROWS_AS(solve(p), IllPosedError);
  }
}

TEST_CASE("solve: budget monotonicity and Dykstra") {
  FeasibilityProblem p;
  const int x = p.add_variable("X", VarKind::Hermitian, 3);
  const int y = p.add_variable("Y", VarKind::Hermitian, 3);
  linalg::Rng rng(8);
  const ComplexMatrix g0 = linalg::random_ginibre(3, 3, rng);
  const int g = p.add_constant("G", 0.45 * g0 / linalg::operator_norm(g0));
  p.add_psd({{Cell::var(x), Cell::constant(g)}, {Cell::constant(g, true), Cell::var(y)}});
  for (int k = 0; k < 3; ++k) p.add_affine({{x, k, k, 1.0}, {y, k, k, 1.0}}, 1.0);
  const auto base = solve(p);
  REQUIRE(base.status == Status::Feasible);
  FeasibilityProblem bigger = p;
  bigger.max_iterations = 4 * p.max_iterations;
  const auto again = solve(bigger);
  CHECK(again.status == Status::Feasible);
  CHECK(again.iterations == base.iterations);
  const auto dyk = solve(p, {.dykstra = true});
  CHECK(dyk.status == Status::Feasible);
  CHECK(verify(p, dyk.x, p.tol).ok);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto r = solve(p, {.seed = seed});
    CHECK(r.status == Status::Feasible);
  }
  // Warm start at a witness is accepted immediately.
  const auto warm = solve(p, {.warm_start = base.x});
  CHECK(warm.status == Status::Feasible);
  CHECK(warm.iterations == 0);
}

TEST_CASE("solve: diagonal variables split into small components") {
  // [[P, u/2],[u^*/2, Q]] with P, Q diagonal and u a permutation.
  const int n = 200;
  FeasibilityProblem p;
  const int pv = p.add_variable("P", VarKind::Diagonal, n);
  const int qv = p.add_variable("Q", VarKind::Diagonal, n);
  SparseComplex u(n, n);
  for (int i = 0; i < n; ++i) u.insert((i + 7) % n, i) = 0.5;
  const int c = p.add_constant("U", u);
  p.add_psd({{Cell::var(pv), Cell::constant(c)}, {Cell::constant(c, true), Cell::var(qv)}});
  for (int i = 0; i < n; ++i) p.add_affine({{pv, i, i, 1.0}, {qv, i, i, 1.0}}, 1.0);
  const auto r = solve(p);
  CHECK(r.components == n);
  REQUIRE(r.status == Status::Feasible);
  const auto v = verify(p, r.x, p.tol);
  CHECK(v.ok);
}

TEST_CASE("brute_force_oracle") {
  {
    FeasibilityProblem p;
    const int t = p.add_variable("t", VarKind::Hermitian, 1);
    const int one = p.add_constant("one", scalar(1.0));
    p.add_psd({{Cell::constant(one), Cell::var(t)}, {Cell::var(t), Cell::constant(one)}});
    const auto r = brute_force_oracle(p);
    CHECK(r.verdict == OracleVerdict::Feasible);
    CHECK(r.parameters == 1);
  }
  {
    // [[1, 2],[2, x]] PSD needs x >= 4; x <= 3 through a slack s >= 0.
    FeasibilityProblem p;
    const int x = p.add_variable("x", VarKind::Hermitian, 1);
    const int s = p.add_variable("s", VarKind::Hermitian, 1);
    const int one = p.add_constant("one", scalar(1.0));
    const int two = p.add_constant("two", scalar(2.0));
    p.add_psd({{Cell::constant(one), Cell::constant(two)}, {Cell::constant(two, true), Cell::var(x)}});
    p.add_psd({{Cell::var(s)}});
    p.add_affine({{x, 0, 0, 1.0}, {s, 0, 0, 1.0}}, 3.0);
    const auto r = brute_force_oracle(p);
    CHECK(r.verdict == OracleVerdict::Infeasible);
    CHECK(r.upper_bound < 0.0);
    CHECK(solve(p).status == Status::Unknown);
  }
  {
    FeasibilityProblem p;
    const int x = p.add_variable("X", VarKind::Hermitian, 2);
    p.add_psd({{Cell::var(x)}});
    CHECK_THROWS_AS(brute_force_oracle(p), PreconditionError);
  }
}

TEST_CASE("brute_force_oracle agrees with solve on random tiny instances") {
  std::mt19937_64 rng(2026);
  int decided = 0, feasible = 0, infeasible = 0;
  for (int trial = 0; trial < 400 && decided < 150; ++trial) {
    const FeasibilityProblem p = random_tiny(rng);
    const auto oracle = brute_force_oracle(p);
    if (oracle.verdict == OracleVerdict::Inconclusive) continue;
    ++decided;
    const auto r = solve(p);
    if (oracle.verdict == OracleVerdict::Infeasible) {
      ++infeasible;
      CHECK(r.status == Status::Unknown);
    } else {
      ++feasible;
      CHECK(r.status == Status::Feasible);
    }
  }
  MESSAGE("decided " << decided << " feasible " << feasible << " infeasible " << infeasible);
  CHECK(decided >= 100);
  CHECK(feasible >= 20);
  CHECK(infeasible >= 20);
}

TEST_CASE("manifest") {
  std::istringstream in(R"(# completion block
var P herm 2
var Q herm 2
const A
2 2
0.5 0
0 0.5i
psd [[P, A],[A*, Q]]
affine 1 | P 0 0 1 | Q 0 0 1
affine 1 | P 1 1 1 | Q 1 1 1
affine 0 | P 0 1 1 | Q 0 1 1
tol 1e-8
iters 1234
)");
  const auto p = parse_manifest(in);
  CHECK(p.variables().size() == 2);
  CHECK(p.patterns().size() == 1);
  CHECK(p.tol == 1e-8);
  CHECK(p.max_iterations == 1234);
  CHECK(p.affine_rows().size() == 4);  // Im parts of diagonal rows vanish
  const auto r = solve(p);
  CHECK(r.status == Status::Feasible);

  for (const char* bad : {"var X herm", "var X sym 2", "psd [[X]]", "frobnicate 3",
                          "var X herm 2\naffine 1 | Y 0 0 1", "var X herm 2\npsd [X]"}) {
    std::istringstream b(bad);
    CHECK_THROWS_AS(parse_manifest(b), ParseError);
  }
  std::istringstream ill("var X herm 1\naffine 1 | X 0 0 1\naffine 2 | X 0 0 1\npsd [[X]]\n");
  const auto q = parse_manifest(ill);
  CHECK_THROWS_AS(solve(q), IllPosedError);
}
