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

#include "jnr/kernels/kernels.hpp"

#include <cmath>
#include <vector>

#include <omp.h>

#include "jnr/errors.hpp"

namespace jnr::kernels {

namespace {

void check_same(std::size_t a, std::size_t b) {
  if (a != b) throw ShapeError("kernel operands have different lengths");
}

std::ptrdiff_t block_count(std::size_t n) {
  return static_cast<std::ptrdiff_t>((n + kReductionBlock - 1) / kReductionBlock);
}

}  // namespace

void spmv(const linalg::SparseOperator& s, std::span<const Complex> x, std::span<Complex> y) {
  const auto n = static_cast<std::size_t>(s.dim());
  check_same(x.size(), n);
  check_same(y.size(), n);
  const auto& rp = s.row_ptr();
  const auto& ci = s.col_index();
  const auto& v = s.values();
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (rows > 2048)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    Complex acc = 0.0;
    for (auto k = rp[r]; k < rp[r + 1]; ++k) acc += v[k] * x[ci[k]];
    y[r] = acc;
  }
}

void spmv_serial(const linalg::SparseOperator& s, std::span<const Complex> x,
                 std::span<Complex> y) {
  const auto n = static_cast<std::size_t>(s.dim());
  check_same(x.size(), n);
  check_same(y.size(), n);
  const auto& rp = s.row_ptr();
  const auto& ci = s.col_index();
  const auto& v = s.values();
  for (std::size_t r = 0; r < n; ++r) {
    Complex acc = 0.0;
    for (auto k = rp[r]; k < rp[r + 1]; ++k) acc += v[k] * x[ci[k]];
    y[r] = acc;
  }
}

Complex dot(std::span<const Complex> a, std::span<const Complex> b) {
  check_same(a.size(), b.size());
  const std::size_t n = a.size();
  const auto blocks = block_count(n);
  if (blocks <= 1) return dot_serial(a, b);
  std::vector<Complex> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t blk = 0; blk < blocks; ++blk) {
    const std::size_t lo = static_cast<std::size_t>(blk) * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    Complex acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += std::conj(a[i]) * b[i];
    partial[static_cast<std::size_t>(blk)] = acc;
  }
  Complex total = 0.0;
  for (const auto& p : partial) total += p;
  return total;
}

Complex dot_serial(std::span<const Complex> a, std::span<const Complex> b) {
  check_same(a.size(), b.size());
  Complex acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double norm(std::span<const Complex> a) {
  const std::size_t n = a.size();
  const auto blocks = block_count(n);
  if (blocks <= 1) return norm_serial(a);
  std::vector<double> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t blk = 0; blk < blocks; ++blk) {
    const std::size_t lo = static_cast<std::size_t>(blk) * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += std::norm(a[i]);
    partial[static_cast<std::size_t>(blk)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return std::sqrt(total);
}

double norm_serial(std::span<const Complex> a) {
  double acc = 0.0;
  for (const auto& z : a) acc += std::norm(z);
  return std::sqrt(acc);
}

void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y) {
  check_same(x.size(), y.size());
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) if (n > 8192)
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void axpy_serial(Complex alpha, std::span<const Complex> x, std::span<Complex> y) {
  check_same(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(Complex alpha, std::span<Complex> x) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) if (n > 8192)
  for (std::ptrdiff_t i = 0; i < n; ++i) x[i] *= alpha;
}

void set_thread_budget(int threads) {
  if (threads >= 1) omp_set_num_threads(threads);
}

int thread_budget() { return omp_get_max_threads(); }

}  // namespace jnr::kernels
