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


// Times each OpenMP kernel against its serial twin on the truncated left
// regular representation of Free(2) and reports the largest deviation.
//
//   bench_kernels [--radius R] [--reps N] [--threads T]

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "CLI11.hpp"
#include "jnr/groups.hpp"
#include "jnr/kernels/kernels.hpp"
#include "jnr/linalg.hpp"

using namespace jnr;
using linalg::Complex;

namespace {

double best_ms(int reps, const std::function<void()>& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel, double deviation) {
  std::printf("%-6s serial %9.3f ms  parallel %9.3f ms  speedup %5.2f  max deviation %.3e\n", name, serial,
              parallel, serial / parallel, deviation);
}

}  // namespace

int main(int argc, char** argv) {
  int radius = 10, reps = 5, threads = 0;
  CLI::App app{"Kernel benchmark", "bench_kernels"};
  app.add_option("--radius", radius, "Ball radius of the Free(2) operator")->capture_default_str();
  app.add_option("--reps", reps, "Repetitions, best time kept")->capture_default_str();
  app.add_option("--threads", threads, "OpenMP threads (default: runtime)");
  CLI11_PARSE(app, argc, argv);
  kernels::set_thread_budget(threads);

  const auto s = groups::rep_operator(groups::GroupSpec::free(2), {1.0, Complex(0.0, 1.0)}, radius);
  const auto n = static_cast<std::size_t>(s.dim());
  linalg::Rng rng(1);
  const auto v = linalg::random_unit_vector(s.dim(), rng), u = linalg::random_unit_vector(s.dim(), rng);
  std::vector<Complex> x(v.data(), v.data() + n), z(u.data(), u.data() + n), y1(n), y2(n);
  std::printf("dim %zu  nnz %zu  threads %d\n", n, s.triplets().size(), kernels::thread_budget());

  const double ts = best_ms(reps, [&] { kernels::spmv_serial(s, x, y1); });
  const double tp = best_ms(reps, [&] { kernels::spmv(s, x, y2); });
  double dev = 0.0;
  for (std::size_t i = 0; i < n; ++i) dev = std::max(dev, std::abs(y1[i] - y2[i]));
  row("spmv", ts, tp, dev);

  Complex d1, d2;
  const double ds = best_ms(reps, [&] { d1 = kernels::dot_serial(x, z); });
  const double dp = best_ms(reps, [&] { d2 = kernels::dot(x, z); });
  row("dot", ds, dp, std::abs(d1 - d2));

  double n1 = 0.0, n2 = 0.0;
  const double ns = best_ms(reps, [&] { n1 = kernels::norm_serial(x); });
  const double np = best_ms(reps, [&] { n2 = kernels::norm(x); });
  row("norm", ns, np, std::abs(n1 - n2));

  y1 = z;
  y2 = z;
  const double as = best_ms(1, [&] { kernels::axpy_serial(0.5, x, y1); });
  const double ap = best_ms(1, [&] { kernels::axpy(0.5, x, y2); });
  dev = 0.0;
  for (std::size_t i = 0; i < n; ++i) dev = std::max(dev, std::abs(y1[i] - y2[i]));
  row("axpy", as, ap, dev);
  return 0;
}
