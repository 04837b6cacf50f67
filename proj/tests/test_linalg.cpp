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
#include <sstream>

#include "doctest.h"
#include "jnr/errors.hpp"
#include "jnr/linalg.hpp"
#include "instances.hpp"

using namespace jnr::linalg;
using jnr::testing::random_sparse_hermitian;

namespace {

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

SparseOperator path_graph(Index m) {
  std::vector<Triplet> t;
  for (Index i = 0; i + 1 < m; ++i) {
    t.push_back({i, i + 1, 1.0});
    t.push_back({i + 1, i, 1.0});
  }
  return SparseOperator(m, t, true);
}

}  // namespace

TEST_CASE("hermitian_eigen: diagonal and Pauli-X spectra") {
  auto d = hermitian_eigen(HermitianMatrix(mat2(3.0, 0.0, 0.0, -1.0)));
  CHECK(d.values(0) == doctest::Approx(-1.0));
  CHECK(d.values(1) == doctest::Approx(3.0));
  auto x = hermitian_eigen(HermitianMatrix(mat2(0.0, 1.0, 1.0, 0.0)));
  CHECK(x.values(0) == doctest::Approx(-1.0));
  CHECK(x.values(1) == doctest::Approx(1.0));
}

TEST_CASE("hermitian_eigen: random 2x2 matches the quadratic formula") {
  Rng rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = u(rng), dd = u(rng);
    const Complex b(u(rng), u(rng));
    const double mid = 0.5 * (a + dd);
    const double rad = std::sqrt(0.25 * (a - dd) * (a - dd) + std::norm(b));
    const auto e = hermitian_eigen(HermitianMatrix(mat2(a, b, std::conj(b), dd)));
    CHECK(e.values(0) == doctest::Approx(mid - rad).epsilon(1e-12));
    CHECK(e.values(1) == doctest::Approx(mid + rad).epsilon(1e-12));
  }
}

TEST_CASE("hermitian_eigen: reconstruction residual and ascending order") {
  Rng rng(3);
  for (Index n : {1, 2, 5, 17, 40}) {
    const auto h = random_hermitian(n, rng);
    const auto e = hermitian_eigen(h);
    const ComplexMatrix rebuilt = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    const double hn = operator_norm(h.matrix());
    CHECK(operator_norm(h.matrix() - rebuilt) <= 1e-10 * std::max(1.0, hn));
    for (Index i = 1; i < n; ++i) CHECK(e.values(i - 1) <= e.values(i));
    CHECK(operator_norm(e.vectors.adjoint() * e.vectors - ComplexMatrix::Identity(n, n)) < 1e-12);
  }
}

TEST_CASE("HermitianMatrix rejects non-Hermitian input") {
  CHECK_THROWS_AS(HermitianMatrix(mat2(1.0, 1.0, 0.0, 1.0)), jnr::SymmetryError);
  CHECK_THROWS_AS(HermitianMatrix(mat2(Complex(1.0, 0.5), 0.0, 0.0, 1.0)), jnr::SymmetryError);
  CHECK_THROWS_AS(HermitianMatrix(ComplexMatrix::Zero(2, 3)), jnr::ShapeError);
  CHECK_NOTHROW(HermitianMatrix(mat2(1.0, Complex(0, 1), Complex(0, -1), 2.0)));
}

TEST_CASE("operator_norm") {
  CHECK(operator_norm(ComplexMatrix::Identity(4, 4)) == doctest::Approx(1.0));
  CHECK(operator_norm(matrix_unit(2, 2, 0, 1)) == doctest::Approx(1.0));
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix m = random_ginibre(3, 2, rng);
    const double oracle = std::sqrt(lambda_max(HermitianMatrix::symmetrized(m.adjoint() * m)).value);
    CHECK(operator_norm(m) == doctest::Approx(oracle).epsilon(1e-12));
    ComplexMatrix dilation = ComplexMatrix::Zero(5, 5);
    dilation.block(0, 3, 3, 2) = m;
    dilation.block(3, 0, 2, 3) = m.adjoint();
    CHECK(std::abs(operator_norm(m) - lambda_max(HermitianMatrix(dilation)).value) <= 1e-10);
  }
}

TEST_CASE("kron") {
  CHECK(kron(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3)).isApprox(ComplexMatrix::Identity(6, 6)));
  Rng rng(7);
  const ComplexMatrix m = random_ginibre(3, 3, rng);
  const Complex phase = std::polar(1.0, 0.7);
  ComplexMatrix scalar(1, 1);
  scalar(0, 0) = phase;
  CHECK((kron(scalar, m) - phase * m).cwiseAbs().maxCoeff() < 1e-15);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_ginibre(2, 2, rng), b = random_ginibre(2, 2, rng);
    const auto c = random_ginibre(2, 2, rng), d = random_ginibre(2, 2, rng);
    CHECK((kron(a, b) * kron(c, d) - kron(a * c, b * d)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("sparse_extreme_eigen: diagonal and path graph") {
  std::vector<Triplet> t;
  for (Index i = 0; i < 5; ++i) t.push_back({i, i, static_cast<double>(i + 1)});
  const SparseOperator diag(5, t, true);
  auto top = sparse_extreme_eigen(diag, Extreme::Max);
  CHECK(top.converged);
  CHECK(top.value == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(sparse_extreme_eigen(diag, Extreme::Min).value == doctest::Approx(1.0).epsilon(1e-12));

  for (Index m : {3, 10, 50, 300, 1000}) {
    const auto r = sparse_extreme_eigen(path_graph(m), Extreme::Max, {.tol = 1e-10});
    const double oracle = 2.0 * std::cos(std::numbers::pi / static_cast<double>(m + 1));
    CHECK(r.value <= oracle + 1e-12);
    CHECK(r.value == doctest::Approx(oracle).epsilon(1e-8));
    CHECK(r.residual <= r.residual_bound);
  }
}

TEST_CASE("sparse_extreme_eigen agrees with dense eigen up to dim 200") {
  Rng rng(21);
  for (Index dim : {1, 2, 7, 30, 64, 120, 200}) {
    const auto s = random_sparse_hermitian(dim, 0.1, rng);
    const auto dense = hermitian_eigenvalues(HermitianMatrix(s.to_dense()));
    const auto mx = sparse_extreme_eigen(s, Extreme::Max, {.tol = 1e-10, .seed = 4});
    const auto mn = sparse_extreme_eigen(s, Extreme::Min, {.tol = 1e-10, .seed = 4});
    CHECK(std::abs(mx.value - dense(dim - 1)) <= 1e-7);
    CHECK(std::abs(mn.value - dense(0)) <= 1e-7);
  }
}

TEST_CASE("sparse_extreme_eigen is deterministic for a fixed seed") {
  Rng rng(2);
  const auto s = random_sparse_hermitian(150, 0.05, rng);
  const auto a = sparse_extreme_eigen(s, Extreme::Max, {.seed = 9});
  const auto b = sparse_extreme_eigen(s, Extreme::Max, {.seed = 9});
  CHECK(a.value == b.value);
  CHECK(a.matvecs == b.matvecs);
}

TEST_CASE("SparseOperator validates indices and the Hermitian closure") {
  CHECK_THROWS_AS(SparseOperator(2, {{0, 2, 1.0}}, false), jnr::ShapeError);
  CHECK_THROWS_AS(SparseOperator(2, {{0, 1, 1.0}}, true), jnr::SymmetryError);
  CHECK_THROWS_AS(SparseOperator(2, {{0, 1, Complex(0, 1)}, {1, 0, Complex(0, 1)}}, true), jnr::SymmetryError);
  CHECK_NOTHROW(SparseOperator(2, {{0, 1, Complex(0, 1)}, {1, 0, Complex(0, -1)}}, true));
  const SparseOperator dup(2, {{0, 0, 1.0}, {0, 0, 2.0}}, false);
  CHECK(dup.nnz() == 1);
  CHECK(dup.to_dense()(0, 0) == Complex(3.0));
  CHECK_THROWS_AS(sparse_extreme_eigen(dup, Extreme::Max), jnr::PreconditionError);
}

TEST_CASE("psd_check") {
  CHECK(psd_check(HermitianMatrix(ComplexMatrix::Identity(2, 2)), 1e-9).psd);
  const auto neg = psd_check(HermitianMatrix(mat2(1.0, 0.0, 0.0, -0.1)), 1e-9);
  CHECK_FALSE(neg.psd);
  CHECK(std::abs(neg.witness(1)) == doctest::Approx(1.0));
  CHECK(std::abs(neg.witness(0)) < 1e-12);
  for (double a : {0.5, 1.0, 1.5}) {
    const Complex z = std::polar(a, 0.3);
    const bool oracle = 1.0 - a * a >= -1e-9;  // determinant of a unit-diagonal 2x2
    CHECK(psd_check(HermitianMatrix(mat2(1.0, z, std::conj(z), 1.0)), 1e-9).psd == oracle);
  }
}

TEST_CASE("properties: norm from spectrum and the 2x2 block contraction law") {
  Rng rng(99);
  std::uniform_real_distribution<double> scale(0.2, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 1 + trial % 4;
    const auto h = random_hermitian(n, rng);
    const auto ev = hermitian_eigenvalues(h);
    CHECK(operator_norm(h.matrix()) ==
          doctest::Approx(std::max(std::abs(ev(0)), std::abs(ev(n - 1)))).epsilon(1e-12));

    ComplexMatrix a = random_ginibre(n, n, rng);
    a *= scale(rng) / operator_norm(a);
    ComplexMatrix block(2 * n, 2 * n);
    block << ComplexMatrix::Identity(n, n), a, a.adjoint(), ComplexMatrix::Identity(n, n);
    const double an = operator_norm(a);
    if (std::abs(an - 1.0) < 1e-6) continue;
    CHECK(psd_check(HermitianMatrix(block), 1e-9).psd == (an <= 1.0));
  }
}

TEST_CASE("complex literal parsing") {
  CHECK(parse_complex("0.5-1.25i") == Complex(0.5, -1.25));
  CHECK(parse_complex("3") == Complex(3, 0));
  CHECK(parse_complex("-i") == Complex(0, -1));
  CHECK(parse_complex("i") == Complex(0, 1));
  CHECK(parse_complex("2.5i") == Complex(0, 2.5));
  CHECK(parse_complex("1e-05-2e-06i") == Complex(1e-05, -2e-06));
  CHECK(parse_complex("-1.5E+2+3E-1i") == Complex(-150, 0.3));
  CHECK_THROWS_AS(parse_complex("1+"), jnr::ParseError);
  CHECK_THROWS_AS(parse_complex("abc"), jnr::ParseError);
  CHECK_THROWS_AS(parse_complex(""), jnr::ParseError);
  const auto list = parse_complex_list("i,-1,2+3i");
  REQUIRE(list.size() == 3);
  CHECK(list[1] == Complex(-1, 0));
}

TEST_CASE("matrix text format: print-parse round trip is exact") {
  Rng rng(1234);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix m = random_ginibre(1 + trial % 3, 1 + trial % 4, rng) * std::pow(10.0, trial % 7 - 3);
    std::stringstream ss;
    ss << "# comment line\n";
    write_matrix(ss, m);
    const auto back = read_matrix(ss);
    CHECK(back == m);
  }
  std::stringstream bad("2 2\n1 2\n3\n");
  CHECK_THROWS_AS(read_matrix(bad), jnr::ParseError);
  std::stringstream tuple("2 2\n2 2\n1 0\n0 1\n\n2 2\n0 1\n0 0\n");
  const auto t = read_tuple(tuple);
  CHECK(t.size() == 2);
  std::stringstream wrong("1 3\n2 2\n1 0\n0 1\n");
  CHECK_THROWS_AS(read_tuple(wrong), jnr::ShapeError);
}

TEST_CASE("sparse text format") {
  std::stringstream ss("3 4 hermitian:1\n0 1 1+1i\n1 0 1-1i\n2 2 0.5\n1 1 -2\n");
  const auto s = read_sparse(ss);
  CHECK(s.dim() == 3);
  CHECK(s.hermitian());
  std::stringstream out;
  write_sparse(out, s);
  const auto again = read_sparse(out);
  CHECK(again.to_dense() == s.to_dense());
  std::stringstream bad("3 1 herm:1\n0 0 1\n");
  CHECK_THROWS_AS(read_sparse(bad), jnr::ParseError);
}

TEST_CASE("polar factor and absolute value") {
  Rng rng(77);
  const ComplexMatrix m = random_ginibre(4, 4, rng);
  const ComplexMatrix u = polar_unitary(m);
  CHECK(is_unitary(u, 1e-12));
  CHECK((u * abs_matrix(m) - m).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(is_unitary(random_unitary(5, rng), 1e-12));
}
