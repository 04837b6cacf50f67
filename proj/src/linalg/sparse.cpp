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

#include "jnr/linalg/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include <Eigen/Eigenvalues>

#include "jnr/errors.hpp"
#include "jnr/kernels/kernels.hpp"

namespace jnr::linalg {

SparseOperator::SparseOperator(Index dim, const std::vector<Triplet>& triplets, bool hermitian)
    : dim_(dim), hermitian_(hermitian) {
  if (dim < 0) throw ShapeError("sparse operator dimension must be nonnegative");
  std::vector<Triplet> sorted = triplets;
  for (const auto& t : sorted) {
    if (t.row < 0 || t.row >= dim || t.col < 0 || t.col >= dim) {
      throw ShapeError("sparse triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                       ") out of range for dimension " + std::to_string(dim));
    }
    if (!std::isfinite(t.value.real()) || !std::isfinite(t.value.imag())) {
      throw ShapeError("sparse triplet has a non-finite value");
    }
  }
  std::sort(sorted.begin(), sorted.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  row_ptr_.assign(static_cast<std::size_t>(dim) + 1, 0);
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (!col_index_.empty() && k > 0 && sorted[k].row == sorted[k - 1].row &&
        sorted[k].col == sorted[k - 1].col) {
      values_.back() += sorted[k].value;
      continue;
    }
    col_index_.push_back(sorted[k].col);
    values_.push_back(sorted[k].value);
    ++row_ptr_[static_cast<std::size_t>(sorted[k].row) + 1];
  }
  for (std::size_t r = 0; r < static_cast<std::size_t>(dim); ++r) row_ptr_[r + 1] += row_ptr_[r];

  if (hermitian_) {
    // Closure under (i, j, v) -> (j, i, conj v).
    double scale = 1.0;
    for (const auto& v : values_) scale = std::max(scale, std::abs(v));
    for (Index r = 0; r < dim_; ++r) {
      for (auto k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
        const Index c = col_index_[k];
        const auto begin = col_index_.begin() + row_ptr_[c];
        const auto end = col_index_.begin() + row_ptr_[c + 1];
        const auto it = std::lower_bound(begin, end, r);
        const Complex mirror = (it != end && *it == r) ? values_[it - col_index_.begin()] : 0.0;
        if (std::abs(mirror - std::conj(values_[k])) > kStructuralTol * scale) {
          throw SymmetryError("sparse operator flagged Hermitian is not closed under adjoint at (" +
                              std::to_string(r) + ", " + std::to_string(c) + ")");
        }
      }
    }
  }
}

std::vector<Triplet> SparseOperator::triplets() const {
  std::vector<Triplet> out;
  out.reserve(values_.size());
  for (Index r = 0; r < dim_; ++r)
    for (auto k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) out.push_back({r, col_index_[k], values_[k]});
  return out;
}

ComplexMatrix SparseOperator::to_dense() const {
  ComplexMatrix m = ComplexMatrix::Zero(dim_, dim_);
  for (Index r = 0; r < dim_; ++r)
    for (auto k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) m(r, col_index_[k]) += values_[k];
  return m;
}

double SparseOperator::abs_row_sum_norm() const {
  double best = 0.0;
  for (Index r = 0; r < dim_; ++r) {
    double acc = 0.0;
    for (auto k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) acc += std::abs(values_[k]);
    best = std::max(best, acc);
  }
  return best;
}

namespace {

std::span<const Complex> view(const ComplexVector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}
std::span<Complex> view(ComplexVector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

// Block of orthonormal basis vectors with their images under S.
struct KrylovBasis {
  std::vector<ComplexVector> v;
  std::vector<ComplexVector> sv;
};

// Orthogonalizes w against the basis twice (classical Gram-Schmidt, repeated).
double orthogonalize(const KrylovBasis& b, ComplexVector& w) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& q : b.v) {
      const Complex c = kernels::dot(view(q), view(w));
      kernels::axpy(-c, view(q), view(w));
    }
  }
  return kernels::norm(view(w));
}

// Thick-restarted Rayleigh-Ritz on a Krylov-type subspace. The basis is
// extended with S applied to the most recent vector; at a restart the `keep`
// Ritz vectors nearest the wanted end are retained, the extreme one last, so
// the next extension continues its Krylov sequence.
struct ThickRestart {
  const SparseOperator& s;
  Extreme which;
  int max_dim;
  int keep;
  int matvecs = 0;

  void append(KrylovBasis& b, ComplexVector v) {
    ComplexVector image(s.dim());
    kernels::spmv(s, view(v), view(image));
    ++matvecs;
    b.v.push_back(std::move(v));
    b.sv.push_back(std::move(image));
  }

  // Returns false when the subspace became invariant.
  bool extend(KrylovBasis& b) {
    const double scale = std::max(1.0, s.abs_row_sum_norm());
    while (static_cast<int>(b.v.size()) < max_dim && static_cast<Index>(b.v.size()) < s.dim()) {
      ComplexVector w = b.sv.back();
      const double nw = orthogonalize(b, w);
      if (nw <= 1e-13 * scale) return false;
      append(b, w / nw);
    }
    return true;
  }

  // Rayleigh-Ritz; reorders the basis so it holds the `count` retained Ritz
  // vectors with the extreme one last.
  double rayleigh_ritz(KrylovBasis& b, int count) {
    const Index m = static_cast<Index>(b.v.size());
    ComplexMatrix h(m, m);
    for (Index j = 0; j < m; ++j)
      for (Index i = 0; i <= j; ++i) {
        h(i, j) = kernels::dot(view(b.v[i]), view(b.sv[j]));
        h(j, i) = std::conj(h(i, j));
      }
    for (Index i = 0; i < m; ++i) h(i, i) = h(i, i).real();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h);
    const Index kept = std::min<Index>(count, m);
    KrylovBasis next;
    for (Index r = kept - 1; r >= 0; --r) {
      const Index col = which == Extreme::Max ? m - 1 - r : r;
      ComplexVector x = ComplexVector::Zero(s.dim());
      ComplexVector sx = ComplexVector::Zero(s.dim());
      for (Index i = 0; i < m; ++i) {
        const Complex y = eig.eigenvectors()(i, col);
        kernels::axpy(y, view(b.v[i]), view(x));
        kernels::axpy(y, view(b.sv[i]), view(sx));
      }
      next.v.push_back(std::move(x));
      next.sv.push_back(std::move(sx));
    }
    b = std::move(next);
    return eig.eigenvalues()(which == Extreme::Max ? m - 1 : 0);
  }
};

void evaluate(const SparseOperator& s, SparseEigenResult& r, int& matvecs) {
  ComplexVector sv(s.dim());
  kernels::spmv(s, view(r.vector), view(sv));
  ++matvecs;
  r.value = kernels::dot(view(r.vector), view(sv)).real();
  kernels::axpy(-r.value, view(r.vector), view(sv));
  r.residual = kernels::norm(view(sv));
}

}  // namespace

SparseEigenResult sparse_extreme_eigen(const SparseOperator& s, Extreme which,
                                       const SparseEigenOptions& options) {
  if (!s.hermitian()) throw PreconditionError("sparse_extreme_eigen needs a Hermitian operator");
  SparseEigenResult out;
  const Index n = s.dim();
  if (n == 0) {
    out.converged = true;
    return out;
  }
  const double norm1 = s.abs_row_sum_norm();
  out.residual_bound = options.tol * std::max(norm1, 1e-300);
  if (norm1 == 0.0) {
    out.vector = ComplexVector::Zero(n);
    out.vector(0) = 1.0;
    out.converged = true;
    return out;
  }
  Rng rng(options.seed);
  ThickRestart solver{s, which, std::max(4, options.krylov_dim),
                      std::max(2, options.krylov_dim / 3)};
  KrylovBasis basis;
  if (options.start.size() == n && options.start.norm() > 0.0)
    solver.append(basis, options.start / options.start.norm());
  else
    solver.append(basis, random_unit_vector(n, rng));
  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    const bool grew = solver.extend(basis);
    const bool last = restart == options.max_restarts;
    solver.rayleigh_ritz(basis, last || !grew ? 1 : solver.keep);
    out.vector = basis.v.back() / kernels::norm(view(basis.v.back()));
    evaluate(s, out, solver.matvecs);
    if (out.residual <= out.residual_bound) {
      out.converged = true;
      break;
    }
    if (!grew) {
      // Invariant subspace reached without meeting the tolerance: restart
      // from the current Ritz vector alone.
      basis = KrylovBasis{};
      solver.append(basis, out.vector);
    }
  }
  int matvecs = solver.matvecs;
  if (!out.converged) {
    // Shifted power iteration: S + norm1 I (Max) or norm1 I - S (Min) is PSD.
    const double sign = which == Extreme::Max ? 1.0 : -1.0;
    ComplexVector x = out.vector;
    ComplexVector y(n);
    for (int it = 0; it < options.power_iterations; ++it) {
      kernels::spmv(s, view(x), view(y));
      ++matvecs;
      y = sign * y + norm1 * x;
      x = y / kernels::norm(view(y));
      if (it % 50 == 49) {
        SparseEigenResult trial = out;
        trial.vector = x;
        evaluate(s, trial, matvecs);
        const bool better = which == Extreme::Max ? trial.value > out.value : trial.value < out.value;
        if (better) {
          out = trial;
          out.used_power_fallback = true;
        }
        if (trial.residual <= out.residual_bound) {
          out = trial;
          out.used_power_fallback = true;
          out.converged = true;
          break;
        }
      }
    }
  }
  out.matvecs = matvecs;
  return out;
}

}  // namespace jnr::linalg
