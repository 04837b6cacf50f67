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

#include "jnr/numrad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "jnr/errors.hpp"
#include "jnr/linalg/eigen.hpp"

namespace jnr {

std::string_view to_string(BoundMethod m) {
  switch (m) {
    case BoundMethod::Sweep: return "sweep";
    case BoundMethod::Ascent: return "ascent";
    case BoundMethod::Krylov: return "krylov";
    case BoundMethod::DenseEigen: return "dense-eigen";
    case BoundMethod::TreePivot: return "tree-pivot";
    case BoundMethod::Certificate: return "certificate";
    case BoundMethod::ClosedForm: return "closed-form";
    case BoundMethod::Unbounded: return "none";
  }
  return "none";
}

}  // namespace jnr

namespace jnr::numrad {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Sample {
  double theta;
  double value;
};

// Modulus of the intersection of the supporting lines Re(e^{-i a} z) = la and
// Re(e^{-i b} z) = lb, for 0 < b - a < pi.
double vertex_modulus(const Sample& a, const Sample& b) {
  const double det = std::sin(b.theta - a.theta);
  const double x = (a.value * std::sin(b.theta) - b.value * std::sin(a.theta)) / det;
  const double y = (b.value * std::cos(a.theta) - a.value * std::cos(b.theta)) / det;
  return std::hypot(x, y);
}

double golden_maximize(const ComplexMatrix& t, double lo, double hi, int iterations, Sample& best,
                       int& evaluations) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - ratio * (hi - lo);
  double d = lo + ratio * (hi - lo);
  double fc = support_value(t, c);
  double fd = support_value(t, d);
  evaluations += 2;
  for (int it = 0; it < iterations && hi - lo > 1e-12; ++it) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - ratio * (hi - lo);
      fc = support_value(t, c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + ratio * (hi - lo);
      fd = support_value(t, d);
    }
    ++evaluations;
  }
  const Sample cand = fc > fd ? Sample{c, fc} : Sample{d, fd};
  if (cand.value > best.value) best = cand;
  return cand.value;
}

}  // namespace

linalg::HermitianMatrix real_part(const ComplexMatrix& t) { return linalg::real_part(t); }

double support_value(const ComplexMatrix& t, double theta) {
  const ComplexMatrix rotated = std::polar(1.0, -theta) * t;
  const auto h = linalg::HermitianMatrix::symmetrized(rotated);
  const auto values = linalg::hermitian_eigenvalues(h);
  return values(values.size() - 1);
}

NumericalRadius numerical_radius(const ComplexMatrix& t, double tol, const SweepOptions& options) {
  if (!(tol > 0.0)) throw PreconditionError("numerical_radius: tol must be positive");
  if (t.rows() != t.cols()) throw ShapeError("numerical_radius needs a square matrix");
  NumericalRadius out;
  if (t.rows() == 0) {
    out.estimate = {0.0, 0.0, BoundMethod::Sweep, BoundMethod::Sweep, 0};
    return out;
  }
  const double lipschitz = linalg::operator_norm(t);
  int evaluations = 0;

  const int n0 = std::max(8, options.initial_samples);
  std::vector<Sample> samples;
  samples.reserve(static_cast<std::size_t>(n0));
  for (int k = 0; k < n0; ++k) {
    const double theta = kTwoPi * k / n0;
    samples.push_back({theta, support_value(t, theta)});
    ++evaluations;
  }
  Sample best = *std::max_element(samples.begin(), samples.end(),
                                  [](const Sample& a, const Sample& b) { return a.value < b.value; });

  // Local refinement of the lower bound around the best few samples.
  {
    std::vector<std::size_t> order(samples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::partial_sort(order.begin(), order.begin() + std::min<std::size_t>(options.refine_best, order.size()),
                      order.end(), [&](std::size_t a, std::size_t b) { return samples[a].value > samples[b].value; });
    const double step = kTwoPi / n0;
    for (int r = 0; r < options.refine_best && r < static_cast<int>(order.size()); ++r) {
      const double centre = samples[order[static_cast<std::size_t>(r)]].theta;
      golden_maximize(t, centre - step, centre + step, 60, best, evaluations);
    }
  }

  double upper = std::numeric_limits<double>::infinity();
  int round = 0;
  for (; round < options.max_rounds; ++round) {
    const std::size_t m = samples.size();
    std::vector<double> sector_upper(m);
    upper = best.value;
    for (std::size_t k = 0; k < m; ++k) {
      Sample a = samples[k];
      Sample b = samples[(k + 1) % m];
      if (k + 1 == m) b.theta += kTwoPi;
      const double lip = std::max(a.value, b.value) + lipschitz * (b.theta - a.theta) / 2.0;
      const double poly = vertex_modulus(a, b);
      sector_upper[k] = std::max({std::min(lip, poly), a.value, b.value});
      upper = std::max(upper, sector_upper[k]);
    }
    if (upper - best.value <= tol || evaluations >= options.max_evaluations) break;
    std::vector<Sample> next;
    next.reserve(2 * m);
    for (std::size_t k = 0; k < m; ++k) {
      next.push_back(samples[k]);
      if (sector_upper[k] > best.value + tol) {
        double hi = k + 1 == m ? samples[0].theta + kTwoPi : samples[k + 1].theta;
        const double mid = 0.5 * (samples[k].theta + hi);
        const Sample s{mid, support_value(t, mid)};
        ++evaluations;
        if (s.value > best.value) best = s;
        next.push_back(s);
      }
    }
    samples = std::move(next);
  }

  const auto h = linalg::HermitianMatrix::symmetrized(std::polar(1.0, -best.theta) * t);
  const auto top = linalg::lambda_max(h);
  out.theta = best.theta;
  out.vector = top.vector;
  out.estimate.lower = std::max(0.0, std::max(best.value, top.value));
  out.estimate.upper = std::max(upper, out.estimate.lower);
  out.estimate.lower_method = BoundMethod::Sweep;
  out.estimate.upper_method = BoundMethod::Sweep;
  out.estimate.iterations = evaluations;
  return out;
}

}  // namespace jnr::numrad
