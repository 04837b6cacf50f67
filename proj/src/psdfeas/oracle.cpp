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
#include <queue>

#include <Eigen/SVD>

#include "jnr/errors.hpp"
#include "jnr/psdfeas.hpp"

namespace jnr::psdfeas {

std::string_view to_string(OracleVerdict v) {
  switch (v) {
    case OracleVerdict::Feasible: return "FEASIBLE";
    case OracleVerdict::Infeasible: return "INFEASIBLE";
    case OracleVerdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

namespace {

struct Box {
  RealVector centre;
  RealVector half;
  double value = 0.0;
  double upper = 0.0;
  bool boundary = false;
};

struct ByUpper {
  bool operator()(const Box& a, const Box& b) const { return a.upper < b.upper; }
};

}  // namespace

OracleResult brute_force_oracle(const FeasibilityProblem& problem, const OracleOptions& options) {
  const Index n = problem.param_count();
  const auto& rows = problem.affine_rows();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Index>(rows.size()), n);
  RealVector b(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& [k, c] : rows[i].coeffs) a(static_cast<Index>(i), k) += c;
    b(static_cast<Index>(i)) = rows[i].target;
  }

  // Solution set x0 + N t.
  RealVector x0 = RealVector::Zero(n);
  Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(n, n);
  if (a.rows() > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double cut = 1e-10 * std::max(1.0, s.size() ? s(0) : 0.0);
    Index rank = 0;
    while (rank < s.size() && s(rank) > cut) ++rank;
    for (Index i = 0; i < rank; ++i)
      x0 += svd.matrixV().col(i) * (svd.matrixU().col(i).dot(b) / s(i));
    if ((a * x0 - b).lpNorm<Eigen::Infinity>() > 1e-9 * std::max(1.0, b.lpNorm<Eigen::Infinity>()))
      throw IllPosedError("affine equalities are inconsistent");
    basis = svd.matrixV().rightCols(n - rank);
  }
  const auto r = static_cast<int>(basis.cols());
  if (r > 3)
    throw PreconditionError("brute_force_oracle handles at most 3 free parameters, this problem has " +
                            std::to_string(r));

  OracleResult out;
  out.parameters = r;
  const auto lambda_min = [&](const RealVector& t) {
    const RealVector x = x0 + basis * t;
    double v = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < problem.patterns().size(); ++k) {
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(problem.assemble(k, x), Eigen::EigenvaluesOnly);
      v = std::min(v, eig.eigenvalues()(0));
    }
    return problem.patterns().empty() ? 0.0 : v;
  };

  // lambda_min is 1-Lipschitz in the operator norm, so along t_j its slope is
  // at most the norm of the linear part of the pattern in direction N e_j.
  RealVector lip = RealVector::Zero(r);
  for (int j = 0; j < r; ++j)
    for (std::size_t k = 0; k < problem.patterns().size(); ++k) {
      const ComplexMatrix dm = problem.assemble(k, basis.col(j)) - problem.assemble(k, RealVector::Zero(n));
      lip(j) = std::max(lip(j), dm.jacobiSvd().singularValues()(0));
    }

  const auto evaluate = [&](Box& box) {
    box.value = lambda_min(box.centre);
    box.upper = box.value + lip.dot(box.half);
    box.boundary = false;
    for (int j = 0; j < r; ++j)
      if (std::abs(box.centre(j)) + box.half(j) >= options.box_radius * (1.0 - 1e-12)) box.boundary = true;
    ++out.cells;
    if (box.value > out.best_value || out.cells == 1) {
      out.best_value = box.value;
      out.x = x0 + basis * box.centre;
    }
  };

  Box root{RealVector::Zero(r), RealVector::Constant(r, options.box_radius)};
  evaluate(root);
  if (r == 0) {
    out.upper_bound = root.value;
    out.verdict = root.value >= 0.0 ? OracleVerdict::Feasible
                  : root.value < -options.margin ? OracleVerdict::Infeasible
                                                  : OracleVerdict::Inconclusive;
    return out;
  }
  if (root.value >= 0.0) {
    out.verdict = OracleVerdict::Feasible;
    return out;
  }

  // Concavity: if every box has upper < -margin and every box touching the
  // boundary has upper <= some attained value F, then lambda_min <= F + (f(q) - F)/s
  // <= max upper outside the box as well, so the problem is infeasible.
  std::priority_queue<Box, std::vector<Box>, ByUpper> open;
  open.push(root);
  double resolved_upper = -std::numeric_limits<double>::infinity();
  while (!open.empty()) {
    Box box = open.top();
    open.pop();
    if (box.upper < -options.margin && (!box.boundary || box.upper <= out.best_value)) {
      resolved_upper = std::max(resolved_upper, box.upper);
      continue;
    }
    if (out.cells + (1 << r) > options.max_cells) {
      out.verdict = OracleVerdict::Inconclusive;
      out.upper_bound = box.upper;
      return out;
    }
    for (int mask = 0; mask < (1 << r); ++mask) {
      Box child{box.centre, 0.5 * box.half};
      for (int j = 0; j < r; ++j) child.centre(j) += (mask >> j & 1 ? 1.0 : -1.0) * child.half(j);
      evaluate(child);
      if (child.value >= 0.0) {
        out.verdict = OracleVerdict::Feasible;
        return out;
      }
      open.push(std::move(child));
    }
  }
  out.verdict = OracleVerdict::Infeasible;
  out.upper_bound = resolved_upper;
  return out;
}

}  // namespace jnr::psdfeas
