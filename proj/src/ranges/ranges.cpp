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


#include "jnr/ranges.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/SVD>

#include "jnr/errors.hpp"
#include "jnr/linalg.hpp"
#include "jnr/numrad.hpp"
#include "jnr/psdfeas.hpp"

namespace jnr::ranges {

namespace {

using linalg::Complex;
using linalg::HermitianMatrix;

constexpr double kHalf = 0.5;

linalg::Rng trial_rng(std::uint64_t seed, int trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), 0x72616eu};
  return linalg::Rng(seq);
}

double radius_upper(const ComplexMatrix& m, double tol) {
  return numrad::numerical_radius(m, tol).estimate.upper;
}

ComplexMatrix restrict(const ComplexMatrix& m, const std::vector<Index>& idx) {
  const Index k = static_cast<Index>(idx.size());
  ComplexMatrix out(k, k);
  for (Index r = 0; r < k; ++r)
    for (Index c = 0; c < k; ++c) out(r, c) = m(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
  return out;
}

// Disjoint supports containing every matrix, and max_i w(x_i | block i).
std::optional<double> block_wcb_check(const OperatorTuple& t,
                                      const std::vector<std::vector<Index>>& supports, double tol) {
  if (supports.size() != t.size()) return std::nullopt;
  const Index p = t.dim();
  std::vector<int> owner(static_cast<std::size_t>(p), -1);
  for (std::size_t i = 0; i < supports.size(); ++i)
    for (Index j : supports[i]) {
      if (j < 0 || j >= p || owner[static_cast<std::size_t>(j)] != -1) return std::nullopt;
      owner[static_cast<std::size_t>(j)] = static_cast<int>(i);
    }
  double worst = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (Index r = 0; r < p; ++r)
      for (Index c = 0; c < p; ++c)
        if (t[i](r, c) != Complex(0.0) && (owner[static_cast<std::size_t>(r)] != static_cast<int>(i) ||
                                           owner[static_cast<std::size_t>(c)] != static_cast<int>(i)))
          return std::nullopt;
    if (!supports[i].empty()) worst = std::max(worst, radius_upper(restrict(t[i], supports[i]), tol));
  }
  return worst;
}

// kappa * ||sum P_i|| after shifting away any negative eigenvalue of the
// assembled matrix; nullopt when the blocks are not the tuple's.
std::optional<double> tridiagonal_check(const jointrad::TridiagonalCertificate& c,
                                        const OperatorTuple& t, double tol) {
  if (c.off_diagonal.size() != t.size()) return std::nullopt;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (c.off_diagonal[i].rows() != t.dim() || (c.off_diagonal[i] - t[i]).norm() > tol)
      return std::nullopt;
  const auto check = jointrad::verify_tridiagonal_certificate(c, tol);
  const double shift = std::max(0.0, -check.min_eigenvalue);
  return jointrad::kKappa * (check.diag_sum_norm + static_cast<double>(c.diagonal.size()) * shift);
}

// The witness X is a positive element of U_n and phi(X) fails to be positive.
bool witness_check(const opsys::KposResult& w, const OperatorTuple& a, double tol) {
  if (!w.witness) return false;
  if (!opsys::un_positivity(*w.witness, 1e-9).psd) return false;
  const HermitianMatrix y = opsys::apply_assignment(a, *w.witness);
  return linalg::lambda_min(y).value < -tol;
}

MembershipVerdict from_ucp(const opsys::UcpResult& r, int k) {
  MembershipVerdict v;
  v.k = k;
  v.lower = r.lower;
  v.upper = r.upper;
  if (r.verdict == opsys::UcpVerdict::Certified) {
    v.status = MembershipStatus::In;
    v.evidence = r.upper_source == "block-orthogonal" ? Evidence::BlockOrthogonal : Evidence::Tridiagonal;
    v.certificate = r.certificate;
  } else if (r.verdict == opsys::UcpVerdict::Refuted && r.refutation && r.refutation->witness) {
    v.status = MembershipStatus::Out;
    v.evidence = Evidence::PositivityWitness;
    v.witness = r.refutation;
    v.lower = std::max(v.lower, r.refutation->bounds.lower);
  } else {
    v.note = "bound interval straddles 1/2";
  }
  return v;
}

MembershipVerdict un_level(const OperatorTuple& a, int k, const MembershipOptions& o) {
  opsys::UcpOptions u;
  u.max_k = k;
  u.restarts = std::max(1, o.budget);
  u.seed = o.seed;
  u.tol = o.tol;
  MembershipVerdict v = from_ucp(opsys::ucp_check(a, u), k);
  if (v.evidence == Evidence::BlockOrthogonal) v.supports = jointrad::detect_block_supports(a);
  return v;
}

}  // namespace

std::string_view to_string(MembershipStatus s) {
  switch (s) {
    case MembershipStatus::In: return "IN";
    case MembershipStatus::Out: return "OUT";
    case MembershipStatus::Undecided: return "UNDECIDED";
  }
  return "UNDECIDED";
}

std::string_view to_string(Evidence e) {
  switch (e) {
    case Evidence::Norms: return "norms";
    case Evidence::NormWitness: return "norm-witness";
    case Evidence::Tridiagonal: return "tridiagonal";
    case Evidence::BlockOrthogonal: return "block-orthogonal";
    case Evidence::PositivityWitness: return "positivity-witness";
    case Evidence::Choi: return "choi";
    case Evidence::Interval: return "interval";
  }
  return "interval";
}

std::string_view to_string(RefuteStatus s) {
  return s == RefuteStatus::Refuted ? "REFUTED" : "NO_WITNESS_FOUND";
}

MembershipVerdict membership_Sn(const OperatorTuple& b, double tol) {
  MembershipVerdict v;
  v.evidence = Evidence::Norms;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double n = linalg::operator_norm(b[i]);
    if (n > v.upper) {
      v.upper = n;
      v.slot = static_cast<Index>(i);
    }
  }
  v.lower = v.upper;
  if (v.upper <= 1.0 + tol) {
    v.status = MembershipStatus::In;
    v.slot = -1;
    return v;
  }
  v.status = MembershipStatus::Out;
  v.evidence = Evidence::NormWitness;
  Eigen::JacobiSVD<ComplexMatrix> svd(b[static_cast<std::size_t>(v.slot)], Eigen::ComputeFullV);
  v.vector = svd.matrixV().col(0);
  return v;
}

MembershipVerdict membership_Un(const OperatorTuple& a, const MembershipOptions& options) {
  MembershipVerdict v = un_level(a, options.max_k, options);
  v.k = 0;
  return v;
}

MembershipVerdict membership_kmax_Un(const OperatorTuple& a, int k, const MembershipOptions& options) {
  if (k < 1) throw InputError("k must be at least 1");
  return un_level(a, k, options);
}

bool verify_choi(const ComplexMatrix& choi, const OperatorTuple& t, const OperatorTuple& b, double tol) {
  const Index m = t.dim(), n = b.dim();
  if (choi.rows() != m * n || choi.cols() != m * n || t.size() != b.size()) return false;
  if (linalg::hermiticity_defect(choi) > tol) return false;
  if (!linalg::psd_check(HermitianMatrix::symmetrized(choi), tol).psd) return false;
  ComplexMatrix unit = ComplexMatrix::Zero(n, n);
  for (Index a = 0; a < m; ++a) unit += choi.block(a * n, a * n, n, n);
  if ((unit - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > tol) return false;
  for (std::size_t i = 0; i < t.size(); ++i) {
    ComplexMatrix image = ComplexMatrix::Zero(n, n);
    for (Index a = 0; a < m; ++a)
      for (Index c = 0; c < m; ++c)
        if (t[i](a, c) != Complex(0.0)) image += t[i](a, c) * choi.block(a * n, c * n, n, n);
    if ((image - b[i]).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

MembershipVerdict membership_W(const OperatorTuple& t, const OperatorTuple& b,
                               const MembershipOptions& options) {
  if (t.size() != b.size())
    throw ShapeError("membership_W needs tuples of equal length, got " + std::to_string(t.size()) +
                     " and " + std::to_string(b.size()));
  const Index m = t.dim(), n = b.dim();
  MembershipVerdict v;
  v.assumptions.push_back(
      "a unital CP map on the operator system of T extends to M_m since M_n is injective");

  // The identity map and the compression to a vector state are tried first.
  if (m == n) {
    ComplexMatrix id = ComplexMatrix::Zero(m * m, m * m);
    for (Index a = 0; a < m; ++a)
      for (Index c = 0; c < m; ++c) id(a * m + a, c * m + c) = 1.0;
    if (verify_choi(id, t, b, options.tol)) {
      v.status = MembershipStatus::In;
      v.evidence = Evidence::Choi;
      v.choi = id;
      return v;
    }
  }

  psdfeas::FeasibilityProblem prob;
  prob.tol = options.tol;
  prob.max_iterations = std::max(1000, 1000 * options.budget);
  const int c = prob.add_variable("C", psdfeas::VarKind::Hermitian, m * n);
  prob.add_psd({{psdfeas::Cell::var(c)}});
  for (Index r = 0; r < n; ++r)
    for (Index s = r; s < n; ++s) {
      std::vector<psdfeas::EntryTerm> terms;
      for (Index a = 0; a < m; ++a) terms.push_back({c, a * n + r, a * n + s, 1.0});
      prob.add_affine(terms, r == s ? 1.0 : 0.0);
    }
  for (std::size_t i = 0; i < t.size(); ++i)
    for (Index r = 0; r < n; ++r)
      for (Index s = 0; s < n; ++s) {
        std::vector<psdfeas::EntryTerm> terms;
        for (Index a = 0; a < m; ++a)
          for (Index e = 0; e < m; ++e)
            if (t[i](a, e) != Complex(0.0)) terms.push_back({c, a * n + r, e * n + s, t[i](a, e)});
        prob.add_affine(terms, b[i](r, s));
      }

  try {
    psdfeas::SolveOptions so;
    so.seed = options.seed;
    const auto res = psdfeas::solve(prob, so);
    if (res.status == psdfeas::Status::Feasible) {
      const ComplexMatrix choi = prob.value(c, res.x);
      if (verify_choi(choi, t, b, options.tol)) {
        v.status = MembershipStatus::In;
        v.evidence = Evidence::Choi;
        v.choi = choi;
        return v;
      }
    }
    v.note = "solver stopped: " + res.stop_reason;
  } catch (const IllPosedError& e) {
    v.note = std::string("no linear map satisfies the constraints: ") + e.what();
  }

  // An exact OUT for the U_d generators comes from the w_cb test.
  if (t.dim() == 2 * static_cast<Index>(t.size())) {
    const OperatorTuple g = jointrad::un_generators(static_cast<int>(t.size()));
    bool same = true;
    for (std::size_t i = 0; i < t.size() && same; ++i) same = (t[i] - g[i]).norm() == 0.0;
    if (same) {
      const auto u = membership_Un(b, options);
      if (u.status == MembershipStatus::Out) {
        v.out_flag = true;
        v.witness = u.witness;
        v.lower = u.lower;
        v.upper = u.upper;
      }
    }
  }
  return v;
}

bool verify_membership(const MembershipVerdict& v, const OperatorTuple& b, double tol) {
  switch (v.evidence) {
    case Evidence::Norms: {
      if (v.status != MembershipStatus::In) return false;
      for (std::size_t i = 0; i < b.size(); ++i)
        if (linalg::operator_norm(b[i]) > 1.0 + tol) return false;
      return true;
    }
    case Evidence::NormWitness: {
      if (v.status != MembershipStatus::Out || v.slot < 0 || v.slot >= static_cast<Index>(b.size()) ||
          v.vector.size() != b.dim())
        return false;
      const double nx = v.vector.norm();
      return nx > 0.0 && (b[static_cast<std::size_t>(v.slot)] * v.vector).norm() / nx > 1.0 + tol;
    }
    case Evidence::Tridiagonal: {
      if (v.status != MembershipStatus::In || !v.certificate) return false;
      const auto w = tridiagonal_check(*v.certificate, b, tol);
      return w && *w <= kHalf + tol;
    }
    case Evidence::BlockOrthogonal: {
      if (v.status != MembershipStatus::In || !v.supports) return false;
      const auto w = block_wcb_check(b, *v.supports, tol);
      return w && *w <= kHalf + tol;
    }
    case Evidence::PositivityWitness:
      return v.status == MembershipStatus::Out && v.witness && witness_check(*v.witness, b, tol);
    case Evidence::Choi:
    case Evidence::Interval:
      return false;  // Choi witnesses need T as well: use verify_choi
  }
  return false;
}

RefuteResult omin_refute(const OperatorTuple& b, int k, const MembershipOptions& options) {
  if (k < 1) throw InputError("k must be at least 1");
  RefuteResult out;
  out.k = k;
  const std::size_t d = b.size();
  const Index p = b.dim();

  auto consider = [&](const OperatorTuple& a, const std::string& family, double wcb) {
    ++out.candidates;
    ComplexMatrix sum = ComplexMatrix::Zero(p * a.dim(), p * a.dim());
    for (std::size_t i = 0; i < d; ++i) sum += linalg::kron(b[i], a[i]);
    const double w = numrad::numerical_radius(sum, options.tol).estimate.lower;
    if (w > out.value + 1e-12 || !out.witness) {
      out.value = w;
      out.witness = a;
      out.family = family;
      out.witness_wcb = wcb;
    }
  };

  // Block family: A_i = c_i E_12 in the i-th orthogonal block, w_cb = max |c_i| / 2.
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<ComplexMatrix> a;
    for (std::size_t i = 0; i < d; ++i) {
      ComplexMatrix m = ComplexMatrix::Zero(2 * static_cast<Index>(d), 2 * static_cast<Index>(d));
      if (i == j) m(2 * static_cast<Index>(i), 2 * static_cast<Index>(i) + 1) = 1.0;
      a.push_back(m);
    }
    consider(OperatorTuple(a), "block-orthogonal", kHalf);
  }
  // Scalar family: w_cb of scalars is sum_i |alpha_i|; sampled on the sphere sum |alpha_i| = 1/2.
  for (int trial = 0; trial < std::max(0, options.budget); ++trial) {
    auto rng = trial_rng(options.seed, trial);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> mag(d);
    double total = 0.0;
    for (auto& x : mag) total += (x = -std::log(1.0 - u(rng)));
    std::vector<ComplexMatrix> a;
    for (std::size_t i = 0; i < d; ++i)
      a.push_back(ComplexMatrix::Constant(1, 1, std::polar(kHalf * mag[i] / total, 6.283185307179586 * u(rng))));
    double wcb = 0.0;
    for (const auto& x : a) wcb += std::abs(x(0, 0));
    consider(OperatorTuple(a), "scalar", wcb);
  }
  if (out.value > kHalf + options.tol) out.status = RefuteStatus::Refuted;
  return out;
}

GapEstimate hausdorff_gap_estimate(int n, int k, Index p, int budget, std::uint64_t seed) {
  if (n < 1 || k < 1 || p < 1 || budget < 0) throw InputError("gap estimate parameters must be positive");
  GapEstimate out;
  out.reference = n >= 2 ? opsys::hausdorff_lower(n) : 0.0;
  out.trace.resize(static_cast<std::size_t>(budget));
#pragma omp parallel for schedule(dynamic)
  for (int trial = 0; trial < budget; ++trial) {
    auto rng = trial_rng(seed, trial);
    std::vector<ComplexMatrix> u;
    for (int i = 0; i < n; ++i) u.push_back(linalg::random_unitary(p, rng));
    const OperatorTuple tu(u);
    GapSample s;
    s.trial = trial;
    if (k == 1) {
      jointrad::W1Options wo;
      wo.seed = seed;
      s.wk_upper = jointrad::w1(tu, wo).estimate.upper;
    } else {
      s.wk_upper = jointrad::wcb_upper_search(tu).estimate.upper;
    }
    if (std::isfinite(s.wk_upper) && s.wk_upper > 0.0) {
      const OperatorTuple a = tu.scaled(1.0 / (2.0 * s.wk_upper));
      s.wcb_upper = jointrad::wcb_upper_search(a).estimate.upper;
      if (s.wcb_upper > kHalf) {
        double norms = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) norms += linalg::operator_norm(a[i]);
        s.distance = (1.0 - 1.0 / (2.0 * s.wcb_upper)) * norms;
      }
    }
    out.trace[static_cast<std::size_t>(trial)] = s;
  }
  for (const auto& s : out.trace)
    if (s.distance > out.estimate) {
      out.estimate = s.distance;
      out.best_trial = s.trial;
    }
  return out;
}

}  // namespace jnr::ranges
