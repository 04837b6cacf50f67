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


#include "jnr/opsys.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "jnr/errors.hpp"
#include "jnr/linalg/eigen.hpp"
#include "jnr/linalg/io.hpp"

namespace jnr::opsys {

namespace {

std::string fmt(double v) { return linalg::format_real(v); }

ComplexMatrix block2(const ComplexMatrix& p, const ComplexMatrix& x, const ComplexMatrix& q) {
  const Index n = p.rows();
  ComplexMatrix m(2 * n, 2 * n);
  m << p, x, x.adjoint(), q;
  return m;
}

double sparse_unitarity_defect(const psdfeas::SparseComplex& u) {
  psdfeas::SparseComplex g = psdfeas::SparseComplex(u.adjoint()) * u;
  psdfeas::SparseComplex id(u.cols(), u.cols());
  id.setIdentity();
  g -= id;
  double worst = 0.0;
  for (Index c = 0; c < g.outerSize(); ++c)
    for (psdfeas::SparseComplex::InnerIterator it(g, c); it; ++it)
      worst = std::max(worst, std::abs(it.value()));
  return worst;
}

}  // namespace

UnElement::UnElement(HermitianMatrix a0, std::vector<ComplexMatrix> a)
    : a0_(std::move(a0)), a_(std::move(a)) {
  for (std::size_t i = 0; i < a_.size(); ++i)
    if (a_[i].rows() != a0_.dim() || a_[i].cols() != a0_.dim())
      throw ShapeError("A_" + std::to_string(i + 1) + " is " + std::to_string(a_[i].rows()) + "x" +
                       std::to_string(a_[i].cols()) + ", expected " +
                       std::to_string(a0_.dim()) + "x" + std::to_string(a0_.dim()));
}

HermitianMatrix UnElement::assemble() const {
  const Index m = 2 * static_cast<Index>(a_.size());
  ComplexMatrix out = linalg::kron(a0_.matrix(), ComplexMatrix::Identity(m, m));
  for (std::size_t i = 0; i < a_.size(); ++i) {
    const Index b = 2 * static_cast<Index>(i);
    out += linalg::kron(a_[i], linalg::matrix_unit(m, m, b, b + 1));
    out += linalg::kron(a_[i].adjoint(), linalg::matrix_unit(m, m, b + 1, b));
  }
  return HermitianMatrix::symmetrized(out);
}

UnElement read_un_element(std::istream& in) {
  std::string line;
  if (!linalg::next_content_line(in, line)) throw ParseError("missing header 'n p'");
  std::istringstream hs(line);
  long n = -1, p = -1;
  std::string extra;
  if (!(hs >> n >> p) || (hs >> extra) || n < 0 || p < 1)
    throw ParseError("header must be 'n p' with n >= 0 and p >= 1, got '" + line + "'");
  const ComplexMatrix a0 = linalg::read_matrix(in);
  if (a0.rows() != p || a0.cols() != p) throw ShapeError("A_0 does not match p = " + std::to_string(p));
  std::vector<ComplexMatrix> a;
  for (long i = 0; i < n; ++i) a.push_back(linalg::read_matrix(in));
  return UnElement(HermitianMatrix(a0, linalg::kDenseEigenTol), std::move(a));
}

UnElement read_un_element_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_un_element(in);
}

UnPositivity un_positivity(const UnElement& e, double tol) {
  UnPositivity out;
  bool first = true;
  for (int i = 1; i <= e.n(); ++i) {
    const auto r = linalg::psd_check(
        HermitianMatrix::symmetrized(block2(e.a0().matrix(), e.a(i), e.a0().matrix())), tol);
    if (first || r.min_eigenvalue < out.min_eigenvalue) out.min_eigenvalue = r.min_eigenvalue;
    first = false;
    if (!r.psd && out.psd) {
      out.psd = false;
      out.block = i;
      out.witness = r.witness;
    }
  }
  if (e.n() == 0) {
    const auto r = linalg::psd_check(e.a0(), tol);
    out.psd = r.psd;
    out.min_eigenvalue = r.min_eigenvalue;
    if (!r.psd) out.witness = r.witness;
  }
  return out;
}

double un_element_norm(const UnElement& e) { return linalg::operator_norm(e.assemble().matrix()); }

HermitianMatrix apply_assignment(const OperatorTuple& x, const UnElement& e) {
  if (static_cast<std::size_t>(e.n()) != x.size())
    throw ShapeError("element has " + std::to_string(e.n()) + " generators, assignment has " +
                     std::to_string(x.size()));
  const Index p = x.dim();
  ComplexMatrix off = ComplexMatrix::Zero(e.dim() * p, e.dim() * p);
  for (int i = 1; i <= e.n(); ++i) off += linalg::kron(e.a(i), x[static_cast<std::size_t>(i - 1)]);
  const ComplexMatrix y =
      linalg::kron(e.a0().matrix(), ComplexMatrix::Identity(p, p)) + off + off.adjoint();
  return HermitianMatrix::symmetrized(y);
}

std::string_view to_string(KposVerdict v) {
  return v == KposVerdict::PositiveRefuted ? "POSITIVE_REFUTED" : "CONSISTENT";
}

std::string_view to_string(UcpVerdict v) {
  switch (v) {
    case UcpVerdict::Certified: return "UCP_CERTIFIED";
    case UcpVerdict::Refuted: return "REFUTED";
    case UcpVerdict::Undecided: return "UNDECIDED";
  }
  return "?";
}

KposResult kpos_check(const OperatorTuple& x, int k, const KposOptions& options) {
  if (k < 1) throw InputError("kpos_check needs k >= 1");
  jointrad::WkOptions wo;
  wo.restarts = options.restarts;
  wo.seed = options.seed;
  const auto wk = jointrad::wk_lower(x, k, wo);
  KposResult out;
  out.k = k;
  out.bounds = wk.estimate;
  if (wk.estimate.lower <= 0.5 + options.tol) return out;

  out.verdict = KposVerdict::PositiveRefuted;
  // B_i = -e^{-i theta} U_i are contractions, so X = I (x) I + sum B_i (x) E_12,i + h.c.
  // is positive, while <phi(X) xi, xi> = 1 - 2 Re e^{-i theta} <(sum U_i (x) x_i) xi, xi>.
  std::vector<ComplexMatrix> b;
  for (const auto& u : wk.unitaries) b.push_back(-std::polar(1.0, -wk.theta) * u);
  UnElement witness(HermitianMatrix(ComplexMatrix::Identity(k, k)), std::move(b));
  const HermitianMatrix y = apply_assignment(x, witness);
  out.witness_vector = wk.vector;
  out.witness_value = wk.vector.dot(y.matrix() * wk.vector).real();
  out.cross_validated =
      un_positivity(witness, options.tol).psd && out.witness_value < -options.tol;
  out.witness = std::move(witness);
  return out;
}

UcpResult ucp_check(const OperatorTuple& x, const UcpOptions& options) {
  UcpResult out;
  const double half = 0.5 + options.tol;
  KposOptions ko;
  ko.restarts = options.restarts;
  ko.seed = options.seed;
  ko.tol = options.tol;

  if (jointrad::detect_block_supports(x)) {
    const auto e = jointrad::block_orthogonal_wcb(x);
    out.lower = e.lower;
    out.upper = e.upper;
    out.upper_source = "block-orthogonal";
  } else {
    jointrad::WcbOptions wo;
    wo.seed = options.seed;
    const auto c = jointrad::wcb_upper_search(x, wo);
    out.lower = c.estimate.lower;
    out.upper = c.estimate.upper;
    out.upper_source = "tridiagonal";
    out.certificate = c.certificate;
  }
  if (out.upper <= half) {
    out.verdict = UcpVerdict::Certified;
    return out;
  }

  for (int k = 1; k <= options.max_k; ++k) {
    auto r = kpos_check(x, k, ko);
    out.lower = std::max(out.lower, r.bounds.lower);
    if (r.verdict == KposVerdict::PositiveRefuted) {
      out.verdict = UcpVerdict::Refuted;
      out.refutation = std::move(r);
      return out;
    }
  }
  // A certified lower bound above 1/2 refutes even without a witness.
  out.verdict = out.lower > half ? UcpVerdict::Refuted : UcpVerdict::Undecided;
  return out;
}

ComplexMatrix ChoiBlockPair::assemble() const {
  if (x.rows() != p.dim() || x.cols() != q.dim() || p.dim() != q.dim())
    throw ShapeError("Choi block pair has inconsistent dimensions");
  return block2(p.matrix(), x, q.matrix());
}

TraceBound choi_block_trace_bound(const ChoiBlockPair& b, const ComplexMatrix& u, double w,
                                  double tol) {
  const ComplexMatrix m = b.assemble();
  const Index n = b.p.dim();
  if (!(w > 0.0) || !std::isfinite(w)) throw PreconditionError("w must be positive and finite");
  if (u.rows() != n || u.cols() != n) throw ShapeError("u does not match the block size");
  if (!linalg::is_unitary(u, tol)) throw PreconditionError("u is not unitary within tol");
  const double off = (b.x - u / (2.0 * w)).cwiseAbs().maxCoeff();
  if (off > tol) throw PreconditionError("off-diagonal block differs from u/(2w) by " + fmt(off));
  const auto psd = linalg::psd_check(HermitianMatrix::symmetrized(m), tol);
  if (!psd.psd)
    throw PreconditionError("block matrix is not PSD: lambda_min = " + fmt(psd.min_eigenvalue));

  ComplexMatrix s = ComplexMatrix::Zero(2 * n, 2 * n);
  s.topLeftCorner(n, n) = -u;
  s.bottomRightCorner(n, n).setIdentity();
  const ComplexMatrix c = s.adjoint() * m * s;
  TraceBound out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.conjugated[i][j] = linalg::normalized_trace(c.block(i * n, j * n, n, n)).real();
  out.tau_p = out.conjugated[0][0];
  out.tau_q = out.conjugated[1][1];
  out.entry_sum = out.conjugated[0][0] + out.conjugated[0][1] + out.conjugated[1][0] +
                  out.conjugated[1][1];
  out.bound = 1.0 / w;
  out.slack = out.tau_p + out.tau_q - out.bound;
  out.holds = out.entry_sum >= -tol && out.slack >= -tol;
  return out;
}

Reunitarized reunitarize(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw ShapeError("reunitarize needs a square matrix");
  const Index n = m.rows();
  bool partial = true;
  std::vector<Index> row_of_col(static_cast<std::size_t>(n), -1);
  std::vector<bool> row_used(static_cast<std::size_t>(n), false);
  for (Index c = 0; c < n && partial; ++c)
    for (Index r = 0; r < n && partial; ++r) {
      const Complex v = m(r, c);
      if (v == Complex(0.0)) continue;
      if (v != Complex(1.0) || row_of_col[static_cast<std::size_t>(c)] != -1 ||
          row_used[static_cast<std::size_t>(r)])
        partial = false;
      else {
        row_of_col[static_cast<std::size_t>(c)] = r;
        row_used[static_cast<std::size_t>(r)] = true;
      }
    }
  Reunitarized out;
  if (partial) {
    out.u = m;
    out.permutation = true;
    Index next_row = 0;
    for (Index c = 0; c < n; ++c) {
      if (row_of_col[static_cast<std::size_t>(c)] != -1) continue;
      while (row_used[static_cast<std::size_t>(next_row)]) ++next_row;
      row_used[static_cast<std::size_t>(next_row)] = true;
      out.u(next_row, c) = 1.0;
      out.perturbation = 1.0;
    }
    return out;
  }
  out.u = linalg::polar_unitary(m);
  out.perturbation = linalg::operator_norm(out.u - m);
  return out;
}

SparseReunitarized reunitarize(const psdfeas::SparseComplex& m) {
  if (m.rows() != m.cols()) throw ShapeError("reunitarize needs a square matrix");
  const Index n = m.rows();
  std::vector<bool> row_used(static_cast<std::size_t>(n), false), col_used(row_used);
  std::vector<Eigen::Triplet<Complex>> trips;
  for (Index c = 0; c < m.outerSize(); ++c)
    for (psdfeas::SparseComplex::InnerIterator it(m, c); it; ++it) {
      if (it.value() == Complex(0.0)) continue;
      const auto r = static_cast<std::size_t>(it.row()), cc = static_cast<std::size_t>(it.col());
      if (it.value() != Complex(1.0) || row_used[r] || col_used[cc])
        throw PreconditionError("sparse reunitarize needs a partial permutation matrix");
      row_used[r] = col_used[cc] = true;
      trips.emplace_back(it.row(), it.col(), 1.0);
    }
  SparseReunitarized out;
  std::size_t next_row = 0;
  for (std::size_t c = 0; c < col_used.size(); ++c) {
    if (col_used[c]) continue;
    while (row_used[next_row]) ++next_row;
    row_used[next_row] = true;
    trips.emplace_back(static_cast<Index>(next_row), static_cast<Index>(c), 1.0);
    out.perturbation = 1.0;
  }
  out.u.resize(n, n);
  out.u.setFromTriplets(trips.begin(), trips.end());
  return out;
}

ObstructionReport lp_obstruction_demo(const OperatorTuple& u, const ObstructionOptions& options) {
  for (std::size_t j = 0; j < u.size(); ++j)
    if (!linalg::is_unitary(u[j], std::max(options.tol, 1e-10)))
      throw PreconditionError("tuple entry " + std::to_string(j) + " is not unitary");
  ObstructionOptions o = options;
  if (!o.w) {
    jointrad::WcbOptions wo;
    wo.seed = options.seed;
    o.w = jointrad::wcb_upper_search(u, wo).estimate.upper;
    o.w_source = "tridiagonal certificate";
  }
  std::vector<psdfeas::SparseComplex> sparse;
  for (const auto& m : u.matrices()) sparse.emplace_back(m.sparseView());
  return lp_obstruction_demo(sparse, o);
}

ObstructionReport lp_obstruction_demo(const std::vector<psdfeas::SparseComplex>& u,
                                      const ObstructionOptions& options) {
  if (u.empty()) throw ShapeError("obstruction demo needs at least one unitary");
  ObstructionReport out;
  out.n = static_cast<int>(u.size());
  out.p = u[0].rows();
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (u[j].rows() != out.p || u[j].cols() != out.p)
      throw ShapeError("tuple entry " + std::to_string(j) + " has the wrong shape");
    if (sparse_unitarity_defect(u[j]) > std::max(options.tol, 1e-10))
      throw PreconditionError("tuple entry " + std::to_string(j) + " is not unitary");
  }
  if (!options.w) {
    if (out.p > options.dense_search_limit) {
      out.chain.push_back("no w_cb certificate: dimension " + std::to_string(out.p) +
                          " exceeds the dense search limit");
      return out;
    }
    std::vector<ComplexMatrix> dense;
    for (const auto& m : u) dense.emplace_back(m);
    return lp_obstruction_demo(OperatorTuple(std::move(dense)), options);
  }
  out.w = *options.w;
  out.w_source = options.w_source;
  if (!(out.w > 0.0)) throw PreconditionError("w must be positive");
  out.ratio = out.n / out.w;
  out.applicable = out.ratio > 1.0 + options.tol;
  if (!out.applicable) {
    out.chain.push_back("n/w = " + fmt(out.ratio) + " <= 1: no contradiction available");
    return out;
  }

  const std::string w = fmt(out.w);
  out.chain = {
      "assume [[P_j, u_j/(2w)], [u_j^*/(2w), Q_j]] >= 0 for j = 1.." + std::to_string(out.n) +
          " and sum_j (P_j + Q_j) = I, with w = " + w + " (" + out.w_source + ")",
      "conjugate by diag(-u_j, I) and apply tau blockwise: [[tau(P_j), -1/(2w)], [-1/(2w), "
      "tau(Q_j)]] >= 0",
      "entry sum of a PSD matrix is >= 0: tau(P_j + Q_j) >= 1/w = " + fmt(1.0 / out.w),
      "1 = tau(I) = sum_j tau(P_j + Q_j) >= n/w = " + fmt(out.ratio) + " > 1: no such completion",
  };

  // Numerical branch: the same completion problem without the trace argument.
  const Index p = out.p;
  const bool hermitian = p <= options.hermitian_limit;
  out.ansatz = hermitian ? "hermitian" : "diagonal";
  const auto kind = hermitian ? psdfeas::VarKind::Hermitian : psdfeas::VarKind::Diagonal;
  psdfeas::FeasibilityProblem prob;
  std::vector<int> vars;
  for (int j = 0; j < out.n; ++j) {
    const int pj = prob.add_variable("P" + std::to_string(j + 1), kind, p);
    const int qj = prob.add_variable("Q" + std::to_string(j + 1), kind, p);
    const int cj = prob.add_constant("U" + std::to_string(j + 1),
                                     psdfeas::SparseComplex(u[static_cast<std::size_t>(j)] *
                                                            Complex(1.0 / (2.0 * out.w))));
    prob.add_psd({{psdfeas::Cell::var(pj), psdfeas::Cell::constant(cj)},
                  {psdfeas::Cell::constant(cj, true), psdfeas::Cell::var(qj)}});
    vars.push_back(pj);
    vars.push_back(qj);
  }
  for (Index r = 0; r < p; ++r)
    for (Index c = r; c < (hermitian ? p : r + 1); ++c) {
      std::vector<psdfeas::EntryTerm> terms;
      for (int v : vars) terms.push_back({v, r, c, 1.0});
      prob.add_affine(terms, r == c ? Complex(1.0) : Complex(0.0));
    }
  prob.max_iterations = options.budget;
  prob.tol = options.tol;
  psdfeas::SolveOptions so;
  so.seed = options.seed;
  const auto res = psdfeas::solve(prob, so);
  out.solver_status = res.status;
  out.solver_iterations = res.iterations;
  out.stop_reason = res.stop_reason;
  out.psd_residual = res.psd_residual;
  out.affine_residual = res.affine_residual;
  out.discrepancy = res.status == psdfeas::Status::Feasible;
  return out;
}

double d_inf_un_lower(double n) { return n / std::sqrt(2.0 * n - 1.0); }
double kesten_w(double n) { return std::sqrt(2.0 * n - 1.0); }
double hausdorff_lower(double n) {
  const double s = std::sqrt(2.0 * n - 1.0);
  return (n - s) / (2.0 * s);
}
double hausdorff_floor(double n) { return std::sqrt(n / 8.0) - 0.5; }
double dinf_sn_lower(double n) {
  const double s = std::sqrt(2.0 * n - 1.0);
  return 2.0 * n * s / ((4.0 * n + 1.0) * s - n);
}

BoundReport bound_calculators(int n) {
  if (n < 2) throw InputError("bound calculators need n >= 2");
  const double x = n;
  BoundReport r;
  r.n = n;
  r.values = {{"d_inf_un_lower", d_inf_un_lower(x)},
              {"kesten_w", kesten_w(x)},
              {"hausdorff_lower", hausdorff_lower(x)},
              {"hausdorff_floor", hausdorff_floor(x)},
              {"dinf_sn_lower", dinf_sn_lower(x)}};
  for (const auto& v : r.values)
    if (!std::isfinite(v.value)) throw std::runtime_error("non-finite bound " + v.id);
  return r;
}

double BoundReport::value(std::string_view id) const {
  for (const auto& v : values)
    if (v.id == id) return v.value;
  throw InputError("unknown bound id '" + std::string(id) + "'");
}

std::vector<BoundVerdict> BoundReport::verdicts() const {
  return {{"hausdorff_lower > hausdorff_floor", value("hausdorff_lower") > value("hausdorff_floor")},
          {"dinf_sn_lower >= 0.5", value("dinf_sn_lower") >= 0.5},
          {"d_inf_un_lower > 1", value("d_inf_un_lower") > 1.0}};
}

}  // namespace jnr::opsys
