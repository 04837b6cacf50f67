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
#include <random>
#include <set>

#include "doctest.h"
#include "jnr/errors.hpp"
#include "jnr/groups.hpp"
#include "jnr/linalg.hpp"

using namespace jnr;
using namespace jnr::groups;
using linalg::Complex;

namespace {

double dense_top(const linalg::SparseOperator& s) {
  return linalg::lambda_max(linalg::HermitianMatrix(s.to_dense())).value;
}

// Independent count: number of reduced words of length <= R by direct recursion.
double free_count(int n, int r) {
  double total = 1.0, level = 2.0 * n;
  for (int l = 1; l <= r; ++l, level *= 2.0 * n - 1.0) total += level;
  return total;
}

}  // namespace

TEST_CASE("parse_group_spec") {
  CHECK(parse_group_spec("free:2") == GroupSpec::free(2));
  CHECK(parse_group_spec("abelian:3") == GroupSpec::abelian(3));
  CHECK(parse_group_spec("cyclic:7") == GroupSpec::cyclic(7));
  CHECK(parse_group_spec("cyclic:7").generators() == 1);
  CHECK(GroupSpec::free(4).to_string() == "free:4");
  for (const char* bad : {"free", "free:", "free:0", "cyclic:1", "abelian:-2", "torus:2", "free:2x"})
    CHECK_THROWS_AS(parse_group_spec(bad), ParseError);
}

TEST_CASE("reduce") {
  const auto f2 = GroupSpec::free(2);
  CHECK(reduce(f2, {1, 2, -2, 1}).letters == std::vector<int>{1, 1});
  CHECK(reduce(f2, {1, 2, -2, -1}).letters.empty());
  CHECK(reduce(GroupSpec::abelian(2), {1, 2, -1}).letters == std::vector<int>{2});
  CHECK(reduce(GroupSpec::abelian(2), {2, -1, 2}).letters == std::vector<int>{-1, 2, 2});
  CHECK(reduce(GroupSpec::cyclic(3), {1, 1, 1, 1}).letters == std::vector<int>{1});
  CHECK(reduce(GroupSpec::cyclic(3), {-1}).letters == std::vector<int>{1, 1});
  CHECK_THROWS_AS(reduce(f2, {3}), PreconditionError);
  CHECK_THROWS_AS(reduce(f2, {0}), PreconditionError);

  std::mt19937_64 rng(5);
  for (const auto& spec : {GroupSpec::free(3), GroupSpec::abelian(3), GroupSpec::cyclic(5)}) {
    const int k = spec.generators();
    std::uniform_int_distribution<int> pick(1, k);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<int> w;
      for (int i = 0; i < 12; ++i) w.push_back(pick(rng) * (rng() % 2 ? 1 : -1));
      const Word r = reduce(spec, w);
      CHECK(reduce(spec, r.letters) == r);
    }
  }
}

TEST_CASE("ball_enumerate: sizes and order") {
  CHECK(BallIndex(GroupSpec::free(2), 1).size() == 5);
  CHECK(BallIndex(GroupSpec::free(2), 2).size() == 17);
  CHECK(BallIndex(GroupSpec::cyclic(5), 10).size() == 5);
  CHECK(BallIndex(GroupSpec::cyclic(6), 2).size() == 5);
  CHECK(BallIndex(GroupSpec::abelian(2), 30).size() == 1861);
  for (int n = 1; n <= 4; ++n)
    for (int r = 0; r <= 5; ++r) {
      CHECK(BallIndex(GroupSpec::free(n), r).size() == static_cast<Index>(free_count(n, r)));
      CHECK(projected_ball_size(GroupSpec::free(n), r) == doctest::Approx(free_count(n, r)));
    }
  for (int r = 0; r <= 8; ++r) {
    CHECK(BallIndex(GroupSpec::abelian(2), r).size() == 2 * r * r + 2 * r + 1);
    // Z^3: octahedral numbers (2R+1)(2R^2+2R+3)/3
    CHECK(BallIndex(GroupSpec::abelian(3), r).size() == (2 * r + 1) * (2 * r * r + 2 * r + 3) / 3);
  }

  const BallIndex b(GroupSpec::free(2), 1);
  CHECK(b.word(0).letters.empty());
  CHECK(b.word(1).letters == std::vector<int>{1});
  CHECK(b.word(2).letters == std::vector<int>{2});
  CHECK(b.word(3).letters == std::vector<int>{-1});
  CHECK(b.word(4).letters == std::vector<int>{-2});
}

TEST_CASE("ball_enumerate: structure") {
  for (const auto& spec : {GroupSpec::free(2), GroupSpec::abelian(2), GroupSpec::cyclic(7)}) {
    const BallIndex b(spec, 4);
    std::set<std::vector<int>> seen;
    int previous = 0;
    for (Index i = 0; i < b.size(); ++i) {
      const Word w = b.word(i);
      CHECK(reduce(spec, w.letters) == w);
      CHECK(b.find(w) == i);
      CHECK(b.length(i) <= 4);
      CHECK(b.length(i) >= previous);  // breadth first
      previous = b.length(i);
      CHECK(seen.insert(w.letters).second);
      for (int slot = 0; slot < b.letter_count(); ++slot) {
        const int k = spec.generators();
        const int letter = slot < k ? slot + 1 : -(slot - k + 1);
        std::vector<int> lw{letter};
        lw.insert(lw.end(), w.letters.begin(), w.letters.end());
        CHECK(b.neighbor(i, slot) == b.find(Word{lw}));
      }
    }
  }
}

TEST_CASE("ball_enumerate: cap") {
  CHECK_THROWS_AS(BallIndex(GroupSpec::free(2), 20), SizeLimitError);
  try {
    BallIndex(GroupSpec::free(2), 6, 100);
  } catch (const SizeLimitError& e) {
    CHECK(std::string(e.what()).find("1457") != std::string::npos);
  }
  CHECK_THROWS_AS(BallIndex(GroupSpec::free(2), -1), PreconditionError);
}

TEST_CASE("rep_operator") {
  // Cyclic(3): circulant shift.
  const auto c3 = rep_operator(GroupSpec::cyclic(3), {1.0}, 2).to_dense();
  linalg::ComplexMatrix shift = linalg::ComplexMatrix::Zero(3, 3);
  shift(1, 0) = shift(2, 1) = shift(0, 2) = 1.0;  // order e, g, g^2
  CHECK((c3 - shift).norm() == 0.0);

  // Free(1) = Z on the path of length 11.
  const auto z = rep_operator(GroupSpec::free(1), {1.0}, 5);
  CHECK(z.dim() == 11);
  CHECK(z.nnz() == 10);
  const double top = dense_top(real_rep_operator(GroupSpec::free(1), {1.0}, 5));
  CHECK(top == doctest::Approx(std::cos(std::numbers::pi / 12)).epsilon(1e-13));
  CHECK(2.0 * top == doctest::Approx(2.0 * std::cos(std::numbers::pi / 12)).epsilon(1e-13));

  // Free(2), R=1: a*e = a, b*e = b, a*a^-1 = e, b*b^-1 = e.
  const auto f = rep_operator(GroupSpec::free(2), {1.0, 1.0}, 1).to_dense();
  CHECK(f.cwiseAbs().sum() == 4.0);
  CHECK(f(1, 0) == Complex(1.0));
  CHECK(f(2, 0) == Complex(1.0));
  CHECK(f(0, 3) == Complex(1.0));
  CHECK(f(0, 4) == Complex(1.0));
  CHECK(f.diagonal().norm() == 0.0);

  const auto re = real_rep_operator(GroupSpec::free(2), {Complex(0, 1), 2.0}, 3);
  CHECK(re.hermitian());
  const auto a = rep_operator(GroupSpec::free(2), {Complex(0, 1), 2.0}, 3).to_dense();
  CHECK((re.to_dense() - 0.5 * (a + a.adjoint())).norm() <= 1e-15);
  CHECK_THROWS_AS(rep_operator(GroupSpec::free(2), {1.0}, 2), ShapeError);
}

TEST_CASE("re_norm_lower: tree pivots agree with the explicit ball") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int n = 1; n <= 3; ++n)
    for (int r = 0; r <= (n == 1 ? 8 : n == 2 ? 5 : 3); ++r) {
      std::vector<double> a(static_cast<std::size_t>(n));
      for (auto& x : a) x = u(rng);
      const auto spec = GroupSpec::free(n);
      const double tree = re_norm_lower(spec, a, r, {.tol = 1e-12}).lower;
      const double dense = dense_top(real_rep_operator(spec, {a.begin(), a.end()}, r));
      CHECK(tree == doctest::Approx(dense).epsilon(1e-9));
      const double krylov =
          re_norm_lower(spec, a, r, {.tol = 1e-10, .route = ReNormRoute::Krylov, .dense_limit = 0}).lower;
      CHECK(krylov == doctest::Approx(dense).epsilon(1e-9));
    }
  CHECK_THROWS_AS(re_norm_lower(GroupSpec::cyclic(3), {1.0}, 2, {.route = ReNormRoute::TreePivot}),
                  PreconditionError);
}

TEST_CASE("re_norm_lower: properties") {
  const auto f2 = GroupSpec::free(2);
  double previous = 0.0;
  for (int r = 0; r <= 20; ++r) {
    const auto e = re_norm_lower(f2, {1.0, 1.0}, r);
    CHECK(e.lower >= previous);
    CHECK(e.lower <= 2.0);
    CHECK(e.upper == 2.0);
    CHECK(e.upper_method == BoundMethod::ClosedForm);
    // Radial comparison with a weighted path.
    CHECK(e.lower >= std::sqrt(3.0) * std::cos(std::numbers::pi / (r + 2)) - 1e-9);
    previous = e.lower;
  }
  CHECK(re_norm_lower(f2, {1.0, 1.0}, 20).lower >= 0.98 * std::sqrt(3.0));
  CHECK(re_norm_lower(GroupSpec::free(3), {1.0, 1.0, 1.0}, 12).lower >= 0.97 * std::sqrt(5.0));

  // Scaling and relabelling.
  for (const auto& spec : {GroupSpec::free(3), GroupSpec::abelian(3)}) {
    const std::vector<double> a{0.3, 1.1, 0.7};
    const double base = re_norm_lower(spec, a, 4).lower;
    const double scaled = re_norm_lower(spec, {0.75, 2.75, 1.75}, 4).lower;
    CHECK(scaled == doctest::Approx(2.5 * base).epsilon(1e-9));
    const double permuted = re_norm_lower(spec, {1.1, 0.7, 0.3}, 4).lower;
    CHECK(permuted == doctest::Approx(base).epsilon(1e-9));
  }

  double z_prev = 0.0;
  for (int r : {5, 10, 20, 30}) {
    const double v = re_norm_lower(GroupSpec::abelian(2), {1.0, 1.0}, r).lower;
    CHECK(v >= z_prev);
    z_prev = v;
  }
  CHECK(z_prev >= 1.95);
  CHECK(z_prev <= 2.0);
  CHECK_THROWS_AS(re_norm_lower(f2, {1.0, -1.0}, 3), PreconditionError);
}

TEST_CASE("re_norm_lower: cyclic groups match the DFT") {
  for (int m = 2; m <= 9; ++m) {
    for (int r : {m, m + 3}) {
      CHECK(re_norm_lower(GroupSpec::cyclic(m), {1.0}, r).lower == doctest::Approx(1.0).epsilon(1e-12));
    }
    const Complex alpha(0.4, -1.3);
    const auto dense = real_rep_operator(GroupSpec::cyclic(m), {alpha}, m).to_dense();
    const auto got = linalg::hermitian_eigenvalues(linalg::HermitianMatrix(dense));
    std::vector<double> want;
    for (int j = 0; j < m; ++j)
      want.push_back((alpha * std::polar(1.0, 2.0 * std::numbers::pi * j / m)).real());
    std::sort(want.begin(), want.end());
    for (int j = 0; j < m; ++j) CHECK(got(j) == doctest::Approx(want[j]).epsilon(1e-12));
  }
}

TEST_CASE("amenability_gap") {
  std::vector<int> schedule;
  for (int r = 4; r <= 20; ++r) schedule.push_back(r);
  const auto free2 = amenability_gap(GroupSpec::free(2), {1.0, 1.0}, schedule);
  CHECK(free2.gap == doctest::Approx(2.0 - std::sqrt(3.0)).epsilon(0.1));
  CHECK(free2.hint == AmenabilityHint::NonamenableConsistent);
  CHECK(free2.heuristic);
  CHECK(free2.estimates.size() == schedule.size());

  const auto z2 = amenability_gap(GroupSpec::abelian(2), {1.0, 1.0}, {5, 10, 20, 30});
  CHECK(z2.gap < 0.05);
  CHECK(z2.hint == AmenabilityHint::AmenableConsistent);

  const auto c7 = amenability_gap(GroupSpec::cyclic(7), {2.0}, {7, 8});
  CHECK(c7.gap <= 1e-12);
  CHECK(c7.hint == AmenabilityHint::AmenableConsistent);

  CHECK_THROWS_AS(amenability_gap(GroupSpec::free(2), {1.0, 0.0}, {2}), PreconditionError);
  CHECK_THROWS_AS(amenability_gap(GroupSpec::free(2), {1.0, 1.0}, {3, 2}), PreconditionError);
  CHECK(to_string(AmenabilityHint::Inconclusive) == "INCONCLUSIVE");
}

TEST_CASE("w1_group_check: phases are absorbed") {
  const auto a = w1_group_check(GroupSpec::free(2), {Complex(0, 1), -1.0}, 8);
  CHECK(a.agree);
  CHECK(a.modulus_value == doctest::Approx(re_norm_lower(GroupSpec::free(2), {1.0, 1.0}, 8).lower));

  const auto b = w1_group_check(GroupSpec::cyclic(4), {std::polar(1.0, std::numbers::pi / 3)}, 4);
  CHECK(b.agree);
  CHECK(b.phase_optimized == doctest::Approx(1.0).epsilon(1e-10));

  const auto c = w1_group_check(GroupSpec::free(2), {2.0, Complex(0, 3)}, 6);
  CHECK(c.agree);
  CHECK(c.modulus_value == doctest::Approx(re_norm_lower(GroupSpec::free(2), {2.0, 3.0}, 6).lower));

  const auto d = w1_group_check(GroupSpec::abelian(2), {Complex(-0.5, 0.5), Complex(0, -2)}, 6);
  CHECK(d.agree);
}
