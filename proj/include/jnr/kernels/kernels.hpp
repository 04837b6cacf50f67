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

#include <cstddef>
#include <span>

#include "jnr/linalg/sparse.hpp"

// Data-parallel inner loops. Each OpenMP kernel has a serial twin used as the
// reference in tests and benchmarks. Reductions are computed over fixed
// blocks of kReductionBlock entries and combined in block order, so their
// results do not depend on the number of threads.
namespace jnr::kernels {

using linalg::Complex;

inline constexpr std::size_t kReductionBlock = 4096;

/// y = S x.
void spmv(const linalg::SparseOperator& s, std::span<const Complex> x, std::span<Complex> y);
void spmv_serial(const linalg::SparseOperator& s, std::span<const Complex> x,
                 std::span<Complex> y);

/// sum conj(a_i) b_i.
Complex dot(std::span<const Complex> a, std::span<const Complex> b);
Complex dot_serial(std::span<const Complex> a, std::span<const Complex> b);

double norm(std::span<const Complex> a);
double norm_serial(std::span<const Complex> a);

/// y += alpha x.
void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y);
void axpy_serial(Complex alpha, std::span<const Complex> x, std::span<Complex> y);

void scale(Complex alpha, std::span<Complex> x);

/// Sets the OpenMP thread budget; values < 1 leave the runtime default.
void set_thread_budget(int threads);
int thread_budget();

}  // namespace jnr::kernels
