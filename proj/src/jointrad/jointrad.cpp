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


#include "jnr/jointrad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <random>
#include <string>
#include <unordered_map>

#include <Eigen/Eigenvalues>

#include "jnr/errors.hpp"
#include "jnr/linalg/eigen.hpp"
#include "jnr/psdfeas.hpp"

namespace jnr::jointrad {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

linalg::Rng restart_rng(std::uint64_t seed, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart), 0x6a6e72u};
  return linalg::Rng(seq);
}

numrad::NumericalRadius radius_of(const ComplexMatrix& m, double tol) {
  numrad::SweepOptions o;
  o.initial_samples = 16;
  return numrad::numerical_radius(m, tol, o);
}

ComplexMatrix phase_sum(const std::vector<ComplexMatrix>& x, const std::vector<double>& phases) {
  ComplexMatrix s = x[0];
  for (std::size_t j = 1; j < x.size(); ++j) s += std::polar(1.0, phases[j]) * x[j];
  return s;
}

std::vector<ComplexMatrix> normalized(const OperatorTuple& t, double s) {
  std::vector<ComplexMatrix> x;
  x.reserve(t.size());
  for (const auto& m : t.matrices()) x.push_back(m / s);
  return x;
}

RadiusEstimate scaled_estimate(RadiusEstimate e, double s) {
  e.lower *= s;
  if (e.has_upper()) e.upper *= s;
  return e;
}

// Block-coordinate ascent of w(sum U_i (x) x_i): for a fixed maximizing
// angle and vector the objective is linear in each U_i and the best unitary
// is the adjoint polar factor.
struct Ascent {
  double value = 0.0;
  std::vector<ComplexMatrix> u;
  double theta = 0.0;
  ComplexVector vector;
  int sweeps = 0;
};

ComplexMatrix pencil_of(const std::vector<ComplexMatrix>& x, const std::vector<ComplexMatrix>& u) {
  const Index k = u[0].rows();
  const Index p = x[0].rows();
  ComplexMatrix out = ComplexMatrix::Zero(k * p, k * p);
  for (std::size_t i = 0; i < x.size(); ++i) out += linalg::kron(u[i], x[i]);
  return out;
}

struct AnglePoint {
  double value;
  double theta;
  ComplexVector vector;
};

double top_eigenvalue(const ComplexMatrix& t, double theta) {
  const ComplexMatrix r = std::polar(1.0, -theta) * t;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (r + r.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

// Local search for max_theta lambda_max(Re e^{-i theta} T): coarse samples
// unless warm, then golden section around the best. Only a lower bound.
AnglePoint best_angle(const ComplexMatrix& t, double hint, bool warm) {
  constexpr int kSamples = 16;
  double best_theta = hint;
  double best = top_eigenvalue(t, hint);
  if (!warm) {
    for (int i = 0; i < kSamples; ++i) {
      const double th = kTwoPi * i / kSamples;
      const double v = top_eigenvalue(t, th);
      if (v > best) {
        best = v;
        best_theta = th;
      }
    }
  }
  const double span = warm ? kTwoPi / (4 * kSamples) : kTwoPi / kSamples;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = best_theta - span, b = best_theta + span;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = top_eigenvalue(t, c), fd = top_eigenvalue(t, d);
  while (b - a > 1e-8) {
    if (fc > fd) {
      b = d; d = c; fd = fc; c = b - g * (b - a); fc = top_eigenvalue(t, c);
    } else {
      a = c; c = d; fc = fd; d = a + g * (b - a); fd = top_eigenvalue(t, d);
    }
  }
  const double mid = 0.5 * (a + b);
  if (top_eigenvalue(t, mid) > best) best_theta = mid;
  const ComplexMatrix r = std::polar(1.0, -best_theta) * t;
  const auto top = linalg::lambda_max(HermitianMatrix::symmetrized(0.5 * (r + r.adjoint())));
  return {top.value, best_theta, top.vector};
}

// Block-coordinate ascent of Re e^{-i theta} <(sum_i U_i (x) x_i) xi, xi> over
// the angle (closed form), the vector (top eigenvector) and each U_i (adjoint
// polar factor). Monotone; the value is attained, so it bounds w from below.
Ascent ascend(const std::vector<ComplexMatrix>& x, std::vector<ComplexMatrix> u, double tol,
              int max_sweeps) {
  const Index k = u[0].rows();
  const Index p = x[0].rows();
  ComplexMatrix t = pencil_of(x, u);
  AnglePoint pt = best_angle(t, 0.0, false);
  Ascent best{pt.value, u, pt.theta, pt.vector, 0};
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    ComplexMatrix v(k, p);
    for (Index a = 0; a < k; ++a)
      for (Index r = 0; r < p; ++r) v(a, r) = pt.vector(a * p + r);
    const Complex rot = std::polar(1.0, -pt.theta);
    for (std::size_t i = 0; i < x.size(); ++i) {
      ComplexMatrix g = rot * (v * x[i].transpose() * v.adjoint());
      if (g.norm() == 0.0) continue;
      u[i] = linalg::polar_unitary(g).adjoint();
    }
    t = pencil_of(x, u);
    const Complex q = pt.vector.dot(t * pt.vector);
    const double theta = std::abs(q) > 0.0 ? std::arg(q) : pt.theta;
    const ComplexMatrix r = std::polar(1.0, -theta) * t;
    const auto top = linalg::lambda_max(HermitianMatrix::symmetrized(0.5 * (r + r.adjoint())));
    pt = {top.value, theta, top.vector};
    best.sweeps = sweep;
    const bool improved = pt.value > best.value + tol;
    if (pt.value > best.value) {
      best.value = pt.value;
      best.u = u;
      best.theta = pt.theta;
      best.vector = pt.vector;
    }
    if (!improved) break;
  }
  // Final angle polish for the best tuple.
  pt = best_angle(pencil_of(x, best.u), best.theta, true);
  if (pt.value > best.value) {
    best.value = pt.value;
    best.theta = pt.theta;
    best.vector = pt.vector;
  }
  return best;
}

// w1 = max over psi in T^d of lambda_max(sum_j Re(e^{-i psi_j} x_j)), one
// Hermitian eigenvalue per point. Branch and bound on T^d with corners cached
// on a dyadic lattice; a cell's bound is its largest corner value plus
// sum_j (1 - cos h_j) w(x_j): every point of an arc of half-width h is a
// point of its chord moved radially by at most 1 - cos h, and lambda_max is
// convex in the coefficients.
constexpr int kMaxLevel = 40;

struct Cell {
  double bound;
  int level;
  std::array<std::int64_t, 3> origin;
  bool operator<(const Cell& o) const { return bound < o.bound; }
};

struct KeyHash {
  std::size_t operator()(const std::array<std::int64_t, 3>& k) const {
    std::size_t h = 0;
    for (auto v : k) h = h * 0x9E3779B97F4A7C15ull + static_cast<std::size_t>(v);
    return h;
  }
};

W1Result phase_branch_and_bound(const std::vector<ComplexMatrix>& x, const W1Options& options) {
  const std::size_t d = x.size();
  const std::int64_t full = static_cast<std::int64_t>(options.grid) << kMaxLevel;
  const double unit = kTwoPi / static_cast<double>(full);

  std::vector<ComplexMatrix> re(d), im(d);
  std::vector<double> wx(d);
  double slack = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    re[j] = 0.5 * (x[j] + x[j].adjoint());
    im[j] = Complex(0.0, -0.5) * (x[j] - x[j].adjoint());
    wx[j] = radius_of(x[j], 1e-4).estimate.upper;
    slack += wx[j];
  }
  // Rounding in the eigenvalue solver.
  slack *= 64.0 * std::numeric_limits<double>::epsilon();

  W1Result out;
  std::unordered_map<std::array<std::int64_t, 3>, double, KeyHash> cache;
  double best = -std::numeric_limits<double>::infinity();
  std::array<std::int64_t, 3> best_key{};

  auto hermitian_at = [&](const std::array<std::int64_t, 3>& key) {
    ComplexMatrix h = ComplexMatrix::Zero(x[0].rows(), x[0].cols());
    for (std::size_t j = 0; j < d; ++j) {
      const double psi = unit * static_cast<double>(key[j]);
      h += std::cos(psi) * re[j] + std::sin(psi) * im[j];
    }
    return h;
  };

  auto corner = [&](std::array<std::int64_t, 3> key) {
    for (std::size_t j = 0; j < d; ++j) key[j] = ((key[j] % full) + full) % full;
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_at(key), Eigen::EigenvaluesOnly);
    const double v = es.eigenvalues().maxCoeff();
    ++out.evaluations;
    if (v > best) {
      best = v;
      best_key = key;
    }
    cache.emplace(key, v);
    return v;
  };

  auto make_cell = [&](int level, std::array<std::int64_t, 3> origin) {
    const std::int64_t side = std::int64_t{1} << (kMaxLevel - level);
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
      auto key = origin;
      for (std::size_t j = 0; j < d; ++j)
        if (mask >> j & 1) key[j] += side;
      top = std::max(top, corner(key));
    }
    const double h = 0.5 * unit * static_cast<double>(side);
    for (std::size_t j = 0; j < d; ++j) top += (1.0 - std::cos(h)) * wx[j];
    return Cell{top + slack, level, origin};
  };

  std::priority_queue<Cell> queue;
  {
    const std::int64_t side = std::int64_t{1} << kMaxLevel;
    std::array<std::int64_t, 3> idx{};
    while (true) {
      std::array<std::int64_t, 3> origin{};
      for (std::size_t j = 0; j < d; ++j) origin[j] = idx[j] * side;
      queue.push(make_cell(0, origin));
      std::size_t j = 0;
      while (j < d && ++idx[j] == options.grid) idx[j++] = 0;
      if (j == d) break;
    }
  }

  double sum_bound = 0.0;
  for (double w : wx) sum_bound += w;

  int iterations = 0;
  while (true) {
    const Cell& top = queue.top();
    if (top.bound - best <= options.tol || out.evaluations >= options.max_evaluations ||
        top.level == kMaxLevel)
      break;
    Cell cell = top;
    queue.pop();
    ++iterations;
    const std::int64_t half = std::int64_t{1} << (kMaxLevel - cell.level - 1);
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
      auto origin = cell.origin;
      for (std::size_t j = 0; j < d; ++j)
        if (mask >> j & 1) origin[j] += half;
      queue.push(make_cell(cell.level + 1, origin));
    }
  }

  const auto top = linalg::lambda_max(HermitianMatrix::symmetrized(hermitian_at(best_key)));
  const double psi0 = unit * static_cast<double>(best_key[0]);
  out.phases.assign(d, 0.0);
  for (std::size_t j = 1; j < d; ++j) {
    const double ph = std::remainder(psi0 - unit * static_cast<double>(best_key[j]), kTwoPi);
    out.phases[j] = ph < 0 ? ph + kTwoPi : ph;
  }
  out.theta = psi0;
  out.vector = top.vector;
  out.estimate.lower = std::max(best, 0.0);
  out.estimate.upper = std::max(out.estimate.lower, std::min(queue.top().bound, sum_bound));
  out.estimate.lower_method = BoundMethod::Sweep;
  out.estimate.upper_method = BoundMethod::Sweep;
  out.estimate.iterations = iterations;
  return out;
}

W1Result phase_ascent(const std::vector<ComplexMatrix>& x, const W1Options& options) {
  W1Result out;
  const int restarts = 16;
  double best = -1.0;
  for (int i = 0; i < restarts; ++i) {
    auto rng = restart_rng(options.seed, i);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    std::vector<ComplexMatrix> u(x.size(), ComplexMatrix::Identity(1, 1));
    if (i > 0)
      for (std::size_t j = 1; j < x.size(); ++j) u[j](0, 0) = std::polar(1.0, angle(rng));
    auto a = ascend(x, u, 1e-12, 200);
    out.evaluations += a.sweeps + 1;
    if (a.value > best) {
      best = a.value;
      out.theta = a.theta;
      out.vector = a.vector;
      // Rotate so that phi_0 = 0.
      const double base = std::arg(a.u[0](0, 0));
      out.phases.assign(x.size(), 0.0);
      for (std::size_t j = 1; j < x.size(); ++j) {
        double ph = std::remainder(std::arg(a.u[j](0, 0)) - base, kTwoPi);
        out.phases[j] = ph < 0 ? ph + kTwoPi : ph;
      }
      out.theta = std::remainder(a.theta - base, kTwoPi);
    }
  }
  double sum_bound = 0.0;
  for (const auto& m : x) sum_bound += radius_of(m, options.tol / 4.0).estimate.upper;
  out.estimate.lower = best;
  out.estimate.upper = std::max(best, sum_bound);
  out.estimate.lower_method = BoundMethod::Ascent;
  out.estimate.upper_method = BoundMethod::ClosedForm;
  out.estimate.iterations = restarts;
  return out;
}

}  // namespace

OperatorTuple::OperatorTuple(std::vector<ComplexMatrix> matrices) : m_(std::move(matrices)) {
  if (m_.empty()) throw ShapeError("operator tuple is empty");
  const Index p = m_.front().rows();
  for (std::size_t i = 0; i < m_.size(); ++i) {
    if (m_[i].rows() != p || m_[i].cols() != p || p == 0)
      throw ShapeError("tuple entry " + std::to_string(i) + " is not " + std::to_string(p) +
                       "x" + std::to_string(p));
    if (!linalg::all_finite(m_[i]))
      throw InputError("tuple entry " + std::to_string(i) + " has non-finite entries");
  }
}

double OperatorTuple::scale() const {
  double s = 0.0;
  for (const auto& m : m_) s += m.squaredNorm();
  return std::sqrt(s);
}

OperatorTuple OperatorTuple::scaled(Complex c) const {
  std::vector<ComplexMatrix> out;
  out.reserve(m_.size());
  for (const auto& m : m_) out.push_back(c * m);
  return OperatorTuple(std::move(out));
}

ComplexMatrix pencil(const OperatorTuple& t, const std::vector<ComplexMatrix>& u) {
  if (u.size() != t.size()) throw ShapeError("pencil needs one coefficient matrix per entry");
  for (const auto& m : u)
    if (m.rows() != u[0].rows() || m.cols() != u[0].rows() || m.rows() == 0)
      throw ShapeError("pencil coefficients must share one square shape");
  return pencil_of(t.matrices(), u);
}

OperatorTuple un_generators(int n) {
  if (n < 1) throw InputError("un_generators needs n >= 1");
  std::vector<ComplexMatrix> x;
  for (int i = 0; i < n; ++i) x.push_back(linalg::matrix_unit(2 * n, 2 * n, 2 * i, 2 * i + 1));
  return OperatorTuple(std::move(x));
}

W1Result w1(const OperatorTuple& t, const W1Options& options) {
  if (options.grid < 1) throw InputError("w1 grid must be positive");
  const double s = t.scale();
  W1Result out;
  if (s == 0.0) {
    out.estimate.upper = 0.0;
    out.estimate.upper_method = BoundMethod::ClosedForm;
    out.phases.assign(t.size(), 0.0);
    out.vector = ComplexVector::Unit(t.dim(), 0);
    return out;
  }
  const auto x = normalized(t, s);
  if (x.size() == 1) {
    auto nr = radius_of(x[0], options.tol / 2.0);
    out.estimate = nr.estimate;
    out.theta = nr.theta;
    out.vector = nr.vector;
    out.phases = {0.0};
    out.evaluations = 1;
  } else if (x.size() <= 3) {
    out = phase_branch_and_bound(x, options);
  } else {
    out = phase_ascent(x, options);
  }
  out.estimate = scaled_estimate(out.estimate, s);
  return out;
}

WkResult wk_lower(const OperatorTuple& t, int k, const WkOptions& options) {
  if (k < 1) throw InputError("wk_lower needs k >= 1");
  if (options.restarts < 1) throw InputError("wk_lower needs at least one restart");
  const double s = t.scale();
  WkResult out;
  out.estimate.lower_method = BoundMethod::Ascent;
  if (s == 0.0) {
    out.unitaries.assign(t.size(), ComplexMatrix::Identity(k, k));
    out.vector = ComplexVector::Unit(k * t.dim(), 0);
    return out;
  }
  const auto x = normalized(t, s);

  std::vector<double> phases = options.phases;
  if (phases.size() != t.size()) {
    W1Options wo;
    wo.grid = 8;
    wo.tol = 1e-4;
    wo.max_evaluations = 2000;
    wo.seed = options.seed;
    phases = w1(OperatorTuple(x), wo).phases;
  }

  std::vector<Ascent> runs(static_cast<std::size_t>(options.restarts));
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < options.restarts; ++i) {
    std::vector<ComplexMatrix> u;
    if (i == 0) {
      for (double ph : phases)
        u.push_back(std::polar(1.0, ph) * ComplexMatrix::Identity(k, k));
    } else {
      auto rng = restart_rng(options.seed, i);
      for (std::size_t j = 0; j < x.size(); ++j) u.push_back(linalg::random_unitary(k, rng));
    }
    runs[static_cast<std::size_t>(i)] = ascend(x, std::move(u), options.tol, options.max_sweeps);
  }

  int best = 0;
  for (int i = 0; i < options.restarts; ++i) {
    out.sweeps += runs[static_cast<std::size_t>(i)].sweeps;
    if (runs[static_cast<std::size_t>(i)].value > runs[static_cast<std::size_t>(best)].value)
      best = i;
  }
  Ascent& a = runs[static_cast<std::size_t>(best)];
  out.estimate.lower = a.value * s;
  out.estimate.iterations = out.sweeps;
  out.unitaries = std::move(a.u);
  out.theta = a.theta;
  out.vector = std::move(a.vector);
  out.best_restart = best;
  return out;
}

TridiagonalCertificate TridiagonalCertificate::from(const OperatorTuple& t,
                                                    std::vector<HermitianMatrix> diagonal,
                                                    const std::vector<Complex>& coeffs) {
  if (!coeffs.empty() && coeffs.size() != t.size())
    throw ShapeError("certificate needs one coefficient per tuple entry");
  TridiagonalCertificate c;
  c.diagonal = std::move(diagonal);
  for (std::size_t i = 0; i < t.size(); ++i)
    c.off_diagonal.push_back(coeffs.empty() ? t[i] : ComplexMatrix(coeffs[i] * t[i]));
  return c;
}

ComplexMatrix TridiagonalCertificate::assemble() const {
  if (diagonal.size() != off_diagonal.size() + 1)
    throw ShapeError("certificate needs n + 1 diagonal blocks for n off-diagonal blocks");
  const Index p = diagonal[0].dim();
  for (const auto& d : diagonal)
    if (d.dim() != p) throw ShapeError("certificate diagonal blocks differ in size");
  for (const auto& o : off_diagonal)
    if (o.rows() != p || o.cols() != p)
      throw ShapeError("certificate off-diagonal blocks differ in size");
  const Index n = static_cast<Index>(diagonal.size());
  ComplexMatrix m = ComplexMatrix::Zero(n * p, n * p);
  for (Index i = 0; i < n; ++i) m.block(i * p, i * p, p, p) = diagonal[i].matrix();
  for (Index i = 0; i + 1 < n; ++i) {
    m.block(i * p, (i + 1) * p, p, p) = off_diagonal[i];
    m.block((i + 1) * p, i * p, p, p) = off_diagonal[i].adjoint();
  }
  return m;
}

CertificateCheck verify_tridiagonal_certificate(const TridiagonalCertificate& c, double tol) {
  const ComplexMatrix m = c.assemble();
  CertificateCheck out;
  const auto psd = linalg::psd_check(HermitianMatrix::symmetrized(m), tol);
  out.valid = psd.psd;
  out.min_eigenvalue = psd.min_eigenvalue;
  ComplexMatrix sum = ComplexMatrix::Zero(c.diagonal[0].dim(), c.diagonal[0].dim());
  for (const auto& d : c.diagonal) sum += d.matrix();
  out.diag_sum_norm = linalg::operator_norm(sum);
  return out;
}

namespace {

struct HalfBlocks {
  ComplexMatrix left;   // |x^*|
  ComplexMatrix right;  // |x|
};

// From one SVD x = W S V^*, so that [[|x^*|, x], [x^*, |x|]] factors as a Gram matrix.
HalfBlocks half_blocks(const ComplexMatrix& x) {
  Eigen::JacobiSVD<ComplexMatrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  return {svd.matrixU() * sv.asDiagonal() * svd.matrixU().adjoint(),
          svd.matrixV() * sv.asDiagonal() * svd.matrixV().adjoint()};
}

std::vector<ComplexMatrix> seed_diagonal(const std::vector<HalfBlocks>& hb,
                                         const std::vector<double>& u) {
  const Index p = hb[0].left.rows();
  std::vector<ComplexMatrix> d(hb.size() + 1, ComplexMatrix::Zero(p, p));
  for (std::size_t i = 0; i < hb.size(); ++i) {
    d[i] += std::exp(u[i]) * hb[i].left;
    d[i + 1] += std::exp(-u[i]) * hb[i].right;
  }
  return d;
}

double diag_norm(const std::vector<ComplexMatrix>& d) {
  ComplexMatrix sum = ComplexMatrix::Zero(d[0].rows(), d[0].cols());
  for (const auto& m : d) sum += m;
  return linalg::operator_norm(sum);
}

// Coordinate golden-section on the per-block log scalings; the norm is
// convex in each of them.
std::vector<double> tune_scalings(const std::vector<HalfBlocks>& hb) {
  std::vector<double> u(hb.size(), 0.0);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int sweep = 0; sweep < 4; ++sweep) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      auto f = [&](double v) {
        auto w = u;
        w[i] = v;
        return diag_norm(seed_diagonal(hb, w));
      };
      double a = u[i] - 6.0, b = u[i] + 6.0;
      double c = b - g * (b - a), d = a + g * (b - a);
      double fc = f(c), fd = f(d);
      for (int it = 0; it < 50; ++it) {
        if (fc < fd) {
          b = d; d = c; fd = fc; c = b - g * (b - a); fc = f(c);
        } else {
          a = c; c = d; fc = fd; d = a + g * (b - a); fd = f(d);
        }
      }
      const double v = 0.5 * (a + b);
      if (f(v) <= f(u[i])) u[i] = v;
    }
  }
  return u;
}

struct Certified {
  std::vector<HermitianMatrix> diagonal;
  double value = std::numeric_limits<double>::infinity();
};

// Shifts every diagonal block by the PSD defect so the assembled matrix is
// PSD, then re-verifies; the value charges any residual negative eigenvalue.
Certified repair(const std::vector<ComplexMatrix>& x, std::vector<ComplexMatrix> d) {
  const Index p = x[0].rows();
  std::vector<HermitianMatrix> diag;
  for (const auto& m : d) diag.push_back(HermitianMatrix::symmetrized(m));
  TridiagonalCertificate c = TridiagonalCertificate::from(OperatorTuple(x), diag);
  const double lmin = linalg::lambda_min(HermitianMatrix::symmetrized(c.assemble())).value;
  if (lmin < 0.0) {
    for (auto& m : d) m += (-lmin) * ComplexMatrix::Identity(p, p);
    diag.clear();
    for (const auto& m : d) diag.push_back(HermitianMatrix::symmetrized(m));
    c.diagonal = diag;
  }
  const auto check = verify_tridiagonal_certificate(c, 0.0);
  Certified out;
  out.diagonal = std::move(diag);
  out.value = check.diag_sum_norm +
              static_cast<double>(d.size()) * std::max(0.0, -check.min_eigenvalue);
  return out;
}

// Path-following log-barrier for min tau subject to M(P) >= 0 and
// tau I - sum P >= 0, with M the tridiagonal block matrix. Parameters are
// the real coordinates of every P_i followed by tau.
struct Entry {
  Index row, col;
  Complex value;
};

struct BarrierTerm {
  std::vector<Entry> big;    // in M(P)
  std::vector<Entry> small;  // in tau I - sum P
};

double trace_pair(const ComplexMatrix& g, const std::vector<Entry>& a, const std::vector<Entry>& b) {
  // tr(G A G B) for sparse A, B.
  Complex acc = 0.0;
  for (const auto& ea : a)
    for (const auto& eb : b) acc += ea.value * g(ea.col, eb.row) * eb.value * g(eb.col, ea.row);
  return acc.real();
}

double trace_one(const ComplexMatrix& g, const std::vector<Entry>& a) {
  Complex acc = 0.0;
  for (const auto& e : a) acc += e.value * g(e.col, e.row);
  return acc.real();
}

Certified barrier_minimize(const std::vector<ComplexMatrix>& x, std::vector<ComplexMatrix> p0,
                           double gap, int& steps) {
  const Index p = x[0].rows();
  const std::size_t blocks = x.size() + 1;
  const Index big = static_cast<Index>(blocks) * p;

  std::vector<BarrierTerm> terms;
  for (std::size_t i = 0; i < blocks; ++i) {
    const Index off = static_cast<Index>(i) * p;
    for (Index r = 0; r < p; ++r) terms.push_back({{{off + r, off + r, 1.0}}, {{r, r, -1.0}}});
    for (Index r = 0; r < p; ++r)
      for (Index c = r + 1; c < p; ++c) {
        terms.push_back({{{off + r, off + c, 1.0}, {off + c, off + r, 1.0}},
                         {{r, c, -1.0}, {c, r, -1.0}}});
        const Complex i1(0.0, 1.0);
        terms.push_back({{{off + r, off + c, i1}, {off + c, off + r, -i1}},
                         {{r, c, -i1}, {c, r, i1}}});
      }
  }
  BarrierTerm tau_term;
  for (Index r = 0; r < p; ++r) tau_term.small.push_back({r, r, 1.0});
  terms.push_back(tau_term);
  const Index m = static_cast<Index>(terms.size());

  ComplexMatrix fixed = ComplexMatrix::Zero(big, big);
  for (std::size_t i = 0; i + 1 < blocks; ++i) {
    fixed.block(static_cast<Index>(i) * p, static_cast<Index>(i + 1) * p, p, p) = x[i];
    fixed.block(static_cast<Index>(i + 1) * p, static_cast<Index>(i) * p, p, p) = x[i].adjoint();
  }

  // Strictly feasible start.
  double shift = 0.0;
  for (const auto& b : p0) shift = std::max(shift, linalg::operator_norm(b));
  shift = 0.1 * std::max(shift, 1e-3);
  Eigen::VectorXd y(m);
  {
    Index k = 0;
    ComplexMatrix sum = ComplexMatrix::Zero(p, p);
    for (auto& b : p0) {
      b += shift * ComplexMatrix::Identity(p, p);
      sum += b;
      for (Index r = 0; r < p; ++r) y(k++) = b(r, r).real();
      for (Index r = 0; r < p; ++r)
        for (Index c = r + 1; c < p; ++c) {
          const Complex h = 0.5 * (b(r, c) + std::conj(b(c, r)));
          y(k++) = h.real();
          y(k++) = h.imag();
        }
    }
    y(k) = linalg::operator_norm(sum) + 1.0;
  }

  auto build = [&](const Eigen::VectorXd& v, ComplexMatrix& fb, ComplexMatrix& fs) {
    fb = fixed;
    fs = ComplexMatrix::Zero(p, p);
    for (Index k = 0; k < m; ++k) {
      for (const auto& e : terms[k].big) fb(e.row, e.col) += v(k) * e.value;
      for (const auto& e : terms[k].small) fs(e.row, e.col) += v(k) * e.value;
    }
  };
  auto barrier = [&](const Eigen::VectorXd& v, double t, double& value) {
    ComplexMatrix fb, fs;
    build(v, fb, fs);
    Eigen::LLT<ComplexMatrix> lb(fb), ls(fs);
    if (lb.info() != Eigen::Success || ls.info() != Eigen::Success) return false;
    double logdet = 0.0;
    for (Index i = 0; i < big; ++i) logdet += 2.0 * std::log(lb.matrixL()(i, i).real());
    for (Index i = 0; i < p; ++i) logdet += 2.0 * std::log(ls.matrixL()(i, i).real());
    if (!std::isfinite(logdet)) return false;
    value = t * v(m - 1) - logdet;
    return true;
  };

  const double degree = static_cast<double>(big + p);
  double t = degree / std::max(y(m - 1), 1e-3);
  steps = 0;
  for (int stage = 0; stage < 60 && degree / t > gap; ++stage, t *= 8.0) {
    for (int it = 0; it < 100; ++it) {
      ComplexMatrix fb, fs;
      build(y, fb, fs);
      const ComplexMatrix gb = fb.inverse(), gs = fs.inverse();
      Eigen::VectorXd grad(m);
      Eigen::MatrixXd hess(m, m);
      for (Index k = 0; k < m; ++k) {
        grad(k) = -trace_one(gb, terms[k].big) - trace_one(gs, terms[k].small);
        for (Index l = 0; l <= k; ++l) {
          hess(k, l) = trace_pair(gb, terms[k].big, terms[l].big) +
                       trace_pair(gs, terms[k].small, terms[l].small);
          hess(l, k) = hess(k, l);
        }
      }
      grad(m - 1) += t;
      const Eigen::VectorXd dir = -hess.ldlt().solve(grad);
      const double decrement = -grad.dot(dir);
      ++steps;
      if (!(decrement > 1e-12)) break;
      double f0 = 0.0;
      barrier(y, t, f0);
      double alpha = 1.0, f1 = 0.0;
      while (alpha > 1e-12 &&
             !(barrier(y + alpha * dir, t, f1) && f1 <= f0 - 0.25 * alpha * decrement))
        alpha *= 0.5;
      if (alpha <= 1e-12) break;
      y += alpha * dir;
      if (decrement < 1e-10) break;
    }
  }

  std::vector<ComplexMatrix> d(blocks, ComplexMatrix::Zero(p, p));
  Index k = 0;
  for (auto& b : d) {
    for (Index r = 0; r < p; ++r) b(r, r) = y(k++);
    for (Index r = 0; r < p; ++r)
      for (Index c = r + 1; c < p; ++c) {
        b(r, c) = Complex(y(k), y(k + 1));
        b(c, r) = std::conj(b(r, c));
        k += 2;
      }
  }
  return repair(x, std::move(d));
}

}  // namespace

WcbResult wcb_upper_search(const OperatorTuple& t, const WcbOptions& options) {
  const double s = t.scale();
  const Index p = t.dim();
  const std::size_t n = t.size();
  WcbResult out;
  out.estimate.lower_method = BoundMethod::Sweep;
  out.estimate.upper_method = BoundMethod::Certificate;
  if (s == 0.0) {
    out.diag_sum_norm = 0.0;
    out.estimate.upper = 0.0;
    out.certificate = TridiagonalCertificate::from(
        t, std::vector<HermitianMatrix>(n + 1, HermitianMatrix(ComplexMatrix::Zero(p, p))));
    return out;
  }
  const auto x = normalized(t, s);

  double lo = 0.0;
  for (const auto& m : x) lo = std::max(lo, radius_of(m, options.tol).estimate.lower);
  out.estimate.lower = lo * s;
  lo *= 1.0 / kKappa;

  std::vector<HalfBlocks> hb;
  for (const auto& m : x) hb.push_back(half_blocks(m));
  auto seed = seed_diagonal(hb, tune_scalings(hb));
  Certified best = repair(x, seed);
  std::vector<ComplexMatrix> best_raw = seed;

  if (options.route == WcbRoute::Barrier) {
    Certified cand = barrier_minimize(x, seed, options.tol * 1e-3, out.newton_steps);
    if (cand.value < best.value) best = std::move(cand);
  } else {
    psdfeas::FeasibilityProblem prob;
    std::vector<int> pv;
    for (std::size_t i = 0; i <= n; ++i)
      pv.push_back(prob.add_variable("P" + std::to_string(i + 1), psdfeas::VarKind::Hermitian, p));
    const int sv = prob.add_variable("S", psdfeas::VarKind::Hermitian, p);
    std::vector<int> cv;
    for (std::size_t i = 0; i < n; ++i) cv.push_back(prob.add_constant("X" + std::to_string(i + 1), x[i]));
    std::vector<std::vector<psdfeas::Cell>> grid(n + 1, std::vector<psdfeas::Cell>(n + 1));
    for (std::size_t i = 0; i <= n; ++i) grid[i][i] = psdfeas::Cell::var(pv[i]);
    for (std::size_t i = 0; i < n; ++i) {
      grid[i][i + 1] = psdfeas::Cell::constant(cv[i]);
      grid[i + 1][i] = psdfeas::Cell::constant(cv[i], true);
    }
    prob.add_psd(grid);
    prob.add_psd({{psdfeas::Cell::var(sv)}});
    prob.max_iterations = options.solver_iterations;
    prob.tol = 1e-9;

    double hi = best.value;
    for (int step = 0; step < options.bisection_steps && hi - lo > options.tol; ++step) {
      const double tau = 0.5 * (lo + hi);
      psdfeas::FeasibilityProblem trial = prob;
      for (Index r = 0; r < p; ++r)
        for (Index c = r; c < p; ++c) {
          std::vector<psdfeas::EntryTerm> terms;
          for (int v : pv) terms.push_back({v, r, c, 1.0});
          terms.push_back({sv, r, c, 1.0});
          trial.add_affine(terms, r == c ? Complex(tau) : Complex(0.0));
        }
      std::vector<ComplexMatrix> start = best_raw;
      ComplexMatrix sum = ComplexMatrix::Zero(p, p);
      for (const auto& m : start) sum += m;
      start.push_back(tau * ComplexMatrix::Identity(p, p) - sum);
      psdfeas::SolveOptions so;
      so.seed = options.seed;
      so.warm_start = trial.params_from(start);
      const auto res = psdfeas::solve(trial, so);
      ++out.feasibility_solves;

      std::vector<ComplexMatrix> d;
      for (int v : pv) d.push_back(trial.value(v, res.x));
      Certified cand = repair(x, d);
      if (cand.value < best.value) {
        best = cand;
        best_raw = d;
      }
      if (cand.value <= tau + options.tol)
        hi = std::min(hi, cand.value);
      else
        lo = tau;
    }
  }

  out.diag_sum_norm = best.value * s;
  out.kappa = kKappa;
  out.estimate.upper = std::max(out.estimate.lower, kKappa * best.value * s);
  out.estimate.iterations = out.feasibility_solves + out.newton_steps;
  std::vector<HermitianMatrix> diag;
  for (const auto& h : best.diagonal) diag.push_back(HermitianMatrix::symmetrized(h.matrix() * s));
  out.certificate = TridiagonalCertificate::from(t, std::move(diag));
  return out;
}

std::optional<std::vector<std::vector<Index>>> detect_block_supports(const OperatorTuple& t,
                                                                     double tol) {
  const Index p = t.dim();
  std::vector<int> owner(static_cast<std::size_t>(p), -1);
  std::vector<std::vector<Index>> supports(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto& m = t[i];
    for (Index r = 0; r < p; ++r) {
      const bool used = m.row(r).cwiseAbs().maxCoeff() > tol || m.col(r).cwiseAbs().maxCoeff() > tol;
      if (!used) continue;
      auto& o = owner[static_cast<std::size_t>(r)];
      if (o != -1) return std::nullopt;
      o = static_cast<int>(i);
      supports[i].push_back(r);
    }
  }
  return supports;
}

RadiusEstimate block_orthogonal_wcb(const OperatorTuple& t,
                                    const std::vector<std::vector<Index>>& supports, double tol) {
  if (supports.size() != t.size()) throw ShapeError("need one support set per tuple entry");
  const Index p = t.dim();
  std::vector<int> owner(static_cast<std::size_t>(p), -1);
  for (std::size_t i = 0; i < supports.size(); ++i)
    for (Index r : supports[i]) {
      if (r < 0 || r >= p) throw ShapeError("support index out of range");
      auto& o = owner[static_cast<std::size_t>(r)];
      if (o != -1)
        throw PreconditionError("supports of entries " + std::to_string(o) + " and " +
                                std::to_string(i) + " overlap");
      o = static_cast<int>(i);
    }
  for (std::size_t i = 0; i < t.size(); ++i)
    for (Index r = 0; r < p; ++r)
      for (Index c = 0; c < p; ++c)
        if (t[i](r, c) != Complex(0.0) &&
            (owner[static_cast<std::size_t>(r)] != static_cast<int>(i) ||
             owner[static_cast<std::size_t>(c)] != static_cast<int>(i)))
          throw PreconditionError("entry " + std::to_string(i) +
                                  " is nonzero outside its declared block");

  const double s = t.scale();
  RadiusEstimate out;
  out.lower_method = BoundMethod::Sweep;
  out.upper_method = BoundMethod::Sweep;
  out.upper = 0.0;
  if (s == 0.0) return out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto& idx = supports[i];
    if (idx.empty()) continue;
    const Index m = static_cast<Index>(idx.size());
    ComplexMatrix sub(m, m);
    for (Index a = 0; a < m; ++a)
      for (Index b = 0; b < m; ++b) sub(a, b) = t[i](idx[a], idx[b]) / s;
    const auto nr = radius_of(sub, tol);
    out.lower = std::max(out.lower, nr.estimate.lower);
    out.upper = std::max(out.upper, nr.estimate.upper);
    out.iterations += nr.estimate.iterations;
  }
  out.lower *= s;
  out.upper *= s;
  return out;
}

RadiusEstimate block_orthogonal_wcb(const OperatorTuple& t, double tol) {
  auto supports = detect_block_supports(t);
  if (!supports) throw PreconditionError("tuple entries do not have disjoint supports");
  return block_orthogonal_wcb(t, *supports, tol);
}

}  // namespace jnr::jointrad
