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
#include <map>
#include <numeric>
#include <random>

#include <Eigen/SparseQR>

#include "detail.hpp"
#include "jnr/errors.hpp"
#include "jnr/linalg/eigen.hpp"
#include "jnr/psdfeas.hpp"

namespace jnr::psdfeas {

namespace detail {

EntryRefs entry_refs(const Variable& v, Index r, Index c) {
  EntryRefs e;
  if (r == c) {
    e.refs[0] = {v.offset + r, 1.0};
    e.count = 1;
    return e;
  }
  if (v.kind == VarKind::Diagonal) return e;
  const Index a = std::min(r, c);
  const Index b = std::max(r, c);
  const Index q = v.dim;
  const Index pos = a * q - a * (a + 1) / 2 + (b - a - 1);
  const Index re = v.offset + q + 2 * pos;
  e.refs[0] = {re, 1.0};
  e.refs[1] = {re + 1, r < c ? Complex(0, 1) : Complex(0, -1)};
  e.count = 2;
  return e;
}

std::vector<PatternEntry> pattern_entries(const FeasibilityProblem& p, std::size_t k) {
  const auto& grid = p.patterns()[k];
  const auto& sizes = p.block_sizes(k);
  std::vector<Index> offset(sizes.size() + 1, 0);
  std::partial_sum(sizes.begin(), sizes.end(), offset.begin() + 1);
  std::vector<PatternEntry> out;
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = i; j < grid.size(); ++j) {
      const Cell& cell = grid[i][j];
      const Index oi = offset[i];
      const Index oj = offset[j];
      if (cell.kind == Cell::Const) {
        const SparseComplex& m = p.constants()[static_cast<std::size_t>(cell.id)];
        for (Index col = 0; col < m.outerSize(); ++col)
          for (SparseComplex::InnerIterator it(m, col); it; ++it) {
            Index r = it.row(), c = it.col();
            Complex v = it.value();
            if (cell.adjoint) {
              std::swap(r, c);
              v = std::conj(v);
            }
            if (i == j && r > c) continue;
            out.push_back({oi + r, oj + c, v, {}});
          }
      } else if (cell.kind == Cell::Var) {
        // Hermitian and diagonal variables equal their adjoints.
        const Variable& v = p.variables()[static_cast<std::size_t>(cell.id)];
        for (Index r = 0; r < v.dim; ++r)
          for (Index c = (i == j ? r : 0); c < v.dim; ++c) {
            const EntryRefs refs = entry_refs(v, r, c);
            if (refs.count > 0) out.push_back({oi + r, oj + c, 0.0, refs});
          }
      }
    }
  return out;
}

std::vector<std::vector<Index>> connected_components(Index n,
                                                     const std::vector<std::pair<Index, Index>>& edges) {
  std::vector<Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Index{0});
  const auto find = [&](Index a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& [a, b] : edges) {
    const Index ra = find(a), rb = find(b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::map<Index, std::size_t> slot;
  std::vector<std::vector<Index>> groups;
  for (Index i = 0; i < n; ++i) {
    const Index root = find(i);
    auto [it, fresh] = slot.emplace(root, groups.size());
    if (fresh) groups.emplace_back();
    groups[it->second].push_back(i);
  }
  return groups;
}

}  // namespace detail

namespace {

bool name_taken(const FeasibilityProblem& p, std::string_view name) {
  return p.variable_id(name) >= 0 || p.constant_id(name) >= 0;
}

void check_name(const FeasibilityProblem& p, const std::string& name) {
  if (name.empty() || name == "0") throw PreconditionError("invalid name '" + name + "'");
  if (name_taken(p, name)) throw PreconditionError("duplicate name '" + name + "'");
}

}  // namespace

int FeasibilityProblem::add_variable(std::string name, VarKind kind, Index dim) {
  check_name(*this, name);
  if (dim < 1) throw ShapeError("variable '" + name + "' needs a positive dimension");
  Variable v{std::move(name), kind, dim, params_};
  params_ += v.params();
  variables_.push_back(std::move(v));
  return static_cast<int>(variables_.size() - 1);
}

int FeasibilityProblem::add_constant(std::string name, const ComplexMatrix& value) {
  return add_constant(std::move(name), SparseComplex(value.sparseView()));
}

int FeasibilityProblem::add_constant(std::string name, SparseComplex value) {
  check_name(*this, name);
  for (Index col = 0; col < value.outerSize(); ++col)
    for (SparseComplex::InnerIterator it(value, col); it; ++it)
      if (!std::isfinite(it.value().real()) || !std::isfinite(it.value().imag()))
        throw PreconditionError("constant '" + name + "' has non-finite entries");
  value.makeCompressed();
  constants_.push_back(std::move(value));
  constant_names_.push_back(std::move(name));
  return static_cast<int>(constants_.size() - 1);
}

int FeasibilityProblem::variable_id(std::string_view name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i)
    if (variables_[i].name == name) return static_cast<int>(i);
  return -1;
}

int FeasibilityProblem::constant_id(std::string_view name) const {
  for (std::size_t i = 0; i < constant_names_.size(); ++i)
    if (constant_names_[i] == name) return static_cast<int>(i);
  return -1;
}

void FeasibilityProblem::add_psd(std::vector<std::vector<Cell>> grid) {
  const std::size_t b = grid.size();
  if (b == 0) throw ShapeError("empty PSD pattern");
  for (const auto& row : grid)
    if (row.size() != b) throw ShapeError("PSD pattern must be a square grid of blocks");

  const auto shape = [&](const Cell& c) -> std::pair<Index, Index> {
    if (c.kind == Cell::Var) {
      if (c.id < 0 || c.id >= static_cast<int>(variables_.size())) throw PreconditionError("unknown variable");
      const Index q = variables_[static_cast<std::size_t>(c.id)].dim;
      return {q, q};
    }
    if (c.kind == Cell::Const) {
      if (c.id < 0 || c.id >= static_cast<int>(constants_.size())) throw PreconditionError("unknown constant");
      const auto& m = constants_[static_cast<std::size_t>(c.id)];
      return c.adjoint ? std::pair{m.cols(), m.rows()} : std::pair{m.rows(), m.cols()};
    }
    return {-1, -1};
  };

  std::vector<Index> sizes(b, -1);
  const auto set_size = [&](std::size_t i, Index s) {
    if (s < 0) return;
    if (sizes[i] >= 0 && sizes[i] != s)
      throw ShapeError("inconsistent block sizes in block row/column " + std::to_string(i + 1));
    sizes[i] = s;
  };
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < b; ++j) {
      const auto [r, c] = shape(grid[i][j]);
      set_size(i, r);
      set_size(j, c);
    }
  for (std::size_t i = 0; i < b; ++i)
    if (sizes[i] < 0) throw ShapeError("block " + std::to_string(i + 1) + " has undetermined size");

  for (std::size_t i = 0; i < b; ++i) {
    const Cell& d = grid[i][i];
    if (d.kind == Cell::Const) {
      const ComplexMatrix m(constants_[static_cast<std::size_t>(d.id)]);
      if (linalg::hermiticity_defect(m) > linalg::kStructuralTol * std::max(1.0, m.cwiseAbs().maxCoeff()))
        throw SymmetryError("diagonal block " + std::to_string(i + 1) + " is not Hermitian");
    }
    for (std::size_t j = i + 1; j < b; ++j) {
      const Cell& u = grid[i][j];
      const Cell& l = grid[j][i];
      const bool var_ok = u.kind == Cell::Var && l.kind == Cell::Var && u.id == l.id;
      const bool const_ok = u.kind == Cell::Const && l.kind == Cell::Const && u.id == l.id && u.adjoint != l.adjoint;
      const bool zero_ok = u.kind == Cell::Zero && l.kind == Cell::Zero;
      if (!(var_ok || const_ok || zero_ok))
        throw SymmetryError("block (" + std::to_string(j + 1) + "," + std::to_string(i + 1) +
                            ") must be the adjoint of block (" + std::to_string(i + 1) + "," +
                            std::to_string(j + 1) + ")");
    }
  }
  patterns_.push_back(std::move(grid));
  sizes_.push_back(std::move(sizes));
}

void FeasibilityProblem::add_affine(const std::vector<EntryTerm>& terms, Complex target) {
  if (!std::isfinite(target.real()) || !std::isfinite(target.imag()))
    throw PreconditionError("affine target must be finite");
  std::map<Index, Complex> acc;
  for (const EntryTerm& t : terms) {
    if (t.var < 0 || t.var >= static_cast<int>(variables_.size()))
      throw PreconditionError("affine term references an unknown variable");
    const Variable& v = variables_[static_cast<std::size_t>(t.var)];
    if (t.row < 0 || t.col < 0 || t.row >= v.dim || t.col >= v.dim)
      throw ShapeError("affine term index out of range for '" + v.name + "'");
    const auto refs = detail::entry_refs(v, t.row, t.col);
    if (refs.count == 0)
      throw ShapeError("affine term references an off-diagonal entry of diagonal '" + v.name + "'");
    for (int i = 0; i < refs.count; ++i) acc[refs.refs[i].param] += t.coeff * refs.refs[i].beta;
  }
  for (int part = 0; part < 2; ++part) {
    RealRow row;
    for (const auto& [k, c] : acc) {
      const double v = part == 0 ? c.real() : c.imag();
      if (v != 0.0) row.coeffs.emplace_back(k, v);
    }
    row.target = part == 0 ? target.real() : target.imag();
    if (row.coeffs.empty()) {
      if (row.target != 0.0) throw IllPosedError("affine equality 0 = nonzero");
      continue;
    }
    rows_.push_back(std::move(row));
  }
}

void FeasibilityProblem::fix_variable(int var, const ComplexMatrix& value) {
  const Variable& v = variables_.at(static_cast<std::size_t>(var));
  if (value.rows() != v.dim || value.cols() != v.dim) throw ShapeError("fixed value has the wrong shape");
  for (Index r = 0; r < v.dim; ++r)
    for (Index c = (v.kind == VarKind::Diagonal ? r : r); c < (v.kind == VarKind::Diagonal ? r + 1 : v.dim); ++c)
      add_affine({{var, r, c, 1.0}}, value(r, c));
}

ComplexMatrix FeasibilityProblem::value(int var, const RealVector& x) const {
  const Variable& v = variables_.at(static_cast<std::size_t>(var));
  ComplexMatrix m = ComplexMatrix::Zero(v.dim, v.dim);
  for (Index r = 0; r < v.dim; ++r)
    for (Index c = 0; c < v.dim; ++c) {
      const auto refs = detail::entry_refs(v, r, c);
      for (int i = 0; i < refs.count; ++i) m(r, c) += refs.refs[i].beta * x(refs.refs[i].param);
    }
  return m;
}

RealVector FeasibilityProblem::params_from(const std::vector<ComplexMatrix>& values) const {
  if (values.size() != variables_.size()) throw ShapeError("need one value per variable");
  RealVector x = RealVector::Zero(params_);
  for (std::size_t k = 0; k < variables_.size(); ++k) {
    const Variable& v = variables_[k];
    const ComplexMatrix& m = values[k];
    if (m.rows() != v.dim || m.cols() != v.dim) throw ShapeError("value for '" + v.name + "' has the wrong shape");
    for (Index r = 0; r < v.dim; ++r) {
      x(v.offset + r) = m(r, r).real();
      if (v.kind == VarKind::Diagonal) continue;
      for (Index c = r + 1; c < v.dim; ++c) {
        const auto refs = detail::entry_refs(v, r, c);
        const Complex h = 0.5 * (m(r, c) + std::conj(m(c, r)));
        x(refs.refs[0].param) = h.real();
        x(refs.refs[1].param) = h.imag();
      }
    }
  }
  return x;
}

std::vector<linalg::Triplet> FeasibilityProblem::pattern_triplets(std::size_t k, const RealVector& x) const {
  std::vector<linalg::Triplet> t;
  for (const auto& e : detail::pattern_entries(*this, k)) {
    Complex v = e.constant;
    for (int i = 0; i < e.refs.count; ++i) v += e.refs.refs[i].beta * x(e.refs.refs[i].param);
    t.push_back({e.row, e.col, v});
    if (e.row != e.col) t.push_back({e.col, e.row, std::conj(v)});
  }
  return t;
}

ComplexMatrix FeasibilityProblem::assemble(std::size_t k, const RealVector& x) const {
  const auto& s = sizes_.at(k);
  const Index n = std::accumulate(s.begin(), s.end(), Index{0});
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (const auto& t : pattern_triplets(k, x)) m(t.row, t.col) += t.value;
  return m;
}

std::string_view to_string(Status s) { return s == Status::Feasible ? "FEASIBLE" : "UNKNOWN"; }

linalg::HermitianMatrix project_psd(const linalg::HermitianMatrix& h) {
  if (h.dim() == 0) return h;
  const auto eig = linalg::hermitian_eigen(h);
  const RealVector clipped = eig.values.cwiseMax(0.0);
  return linalg::HermitianMatrix(eig.vectors * clipped.asDiagonal() * eig.vectors.adjoint());
}

Verification verify(const FeasibilityProblem& problem, const RealVector& x, double tol) {
  Verification v;
  if (x.size() != problem.param_count()) throw ShapeError("parameter vector has the wrong length");
  for (const auto& row : problem.affine_rows()) {
    double s = -row.target;
    for (const auto& [k, c] : row.coeffs) s += c * x(k);
    v.affine_residual = std::max(v.affine_residual, std::abs(s));
  }
  v.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < problem.patterns().size(); ++k) {
    const auto& s = problem.block_sizes(k);
    const Index n = std::accumulate(s.begin(), s.end(), Index{0});
    const auto t = problem.pattern_triplets(k, x);
    std::vector<std::pair<Index, Index>> edges;
    for (const auto& e : t)
      if (e.value != Complex(0.0)) edges.emplace_back(e.row, e.col);
    const auto groups = detail::connected_components(n, edges);
    std::vector<Index> local(static_cast<std::size_t>(n));
    std::vector<std::size_t> owner(static_cast<std::size_t>(n));
    for (std::size_t g = 0; g < groups.size(); ++g)
      for (std::size_t i = 0; i < groups[g].size(); ++i) {
        local[groups[g][i]] = static_cast<Index>(i);
        owner[groups[g][i]] = g;
      }
    std::vector<ComplexMatrix> blocks(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const auto sz = static_cast<Index>(groups[g].size());
      blocks[g] = ComplexMatrix::Zero(sz, sz);
    }
    for (const auto& e : t) blocks[owner[e.row]](local[e.row], local[e.col]) += e.value;
    for (auto& b : blocks) {
      const auto r = linalg::psd_check(linalg::HermitianMatrix(b, 1e-9), tol);
      v.min_eigenvalue = std::min(v.min_eigenvalue, r.min_eigenvalue);
    }
  }
  if (problem.patterns().empty()) v.min_eigenvalue = 0.0;
  v.ok = v.affine_residual <= tol && v.min_eigenvalue >= -tol;
  return v;
}

namespace {

// Local dense block of one connected component.
struct Component {
  Index size = 0;
  struct Entry {
    Index r, c;
    Complex a;
    detail::EntryRefs refs;
  };
  std::vector<Entry> entries;
};

struct Compiled {
  std::vector<Component> components;
  RealVector weight;  // diagonal metric D
};

Compiled compile(const FeasibilityProblem& p) {
  Compiled out;
  out.weight = RealVector::Zero(p.param_count());
  for (std::size_t k = 0; k < p.patterns().size(); ++k) {
    const auto& s = p.block_sizes(k);
    const Index n = std::accumulate(s.begin(), s.end(), Index{0});
    const auto entries = detail::pattern_entries(p, k);
    std::vector<std::pair<Index, Index>> edges;
    edges.reserve(entries.size());
    for (const auto& e : entries) edges.emplace_back(e.row, e.col);
    const auto groups = detail::connected_components(n, edges);
    std::vector<Index> local(static_cast<std::size_t>(n));
    std::vector<std::size_t> owner(static_cast<std::size_t>(n));
    const std::size_t base = out.components.size();
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (std::size_t i = 0; i < groups[g].size(); ++i) {
        local[groups[g][i]] = static_cast<Index>(i);
        owner[groups[g][i]] = base + g;
      }
      Component c;
      c.size = static_cast<Index>(groups[g].size());
      out.components.push_back(std::move(c));
    }
    for (const auto& e : entries) {
      Component& c = out.components[owner[e.row]];
      c.entries.push_back({local[e.row], local[e.col], e.constant, e.refs});
      const double w = e.row == e.col ? 1.0 : 2.0;
      for (int i = 0; i < e.refs.count; ++i) out.weight(e.refs.refs[i].param) += w * std::norm(e.refs.refs[i].beta);
    }
  }
  std::erase_if(out.components, [](const Component& c) { return c.entries.empty(); });
  return out;
}

// Weighted projection onto {x : A x = b} in the metric diag(D).
class AffineProjector {
 public:
  AffineProjector(const FeasibilityProblem& p, const RealVector& d) : dinv_(d.cwiseInverse()) {
    const auto& rows = p.affine_rows();
    if (rows.empty()) return;
    std::vector<Eigen::Triplet<double>> t;
    b_.resize(static_cast<Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (const auto& [k, c] : rows[i].coeffs) t.emplace_back(static_cast<int>(i), static_cast<int>(k), c);
      b_(static_cast<Index>(i)) = rows[i].target;
    }
    a_.resize(static_cast<Index>(rows.size()), p.param_count());
    a_.setFromTriplets(t.begin(), t.end());
    a_.makeCompressed();
    Eigen::SparseMatrix<double> g = a_ * dinv_.asDiagonal() * a_.transpose();
    g.makeCompressed();
    qr_.compute(g);
    if (qr_.info() != Eigen::Success) throw IllPosedError("affine system could not be factorized");
    const RealVector x0 = project(RealVector::Zero(p.param_count()));
    const double res = (a_ * x0 - b_).lpNorm<Eigen::Infinity>();
    if (!(res <= 1e-9 * std::max(1.0, b_.lpNorm<Eigen::Infinity>())))
      throw IllPosedError("affine equalities are inconsistent (least-squares residual " + std::to_string(res) + ")");
  }

  RealVector project(const RealVector& u) const {
    if (b_.size() == 0) return u;
    const RealVector r = a_ * u - b_;
    RealVector mu = qr_.solve(r);
    RealVector x = u - dinv_.asDiagonal() * (a_.transpose() * mu);
    // One refinement step against rounding in the factorization.
    const RealVector r2 = a_ * x - b_;
    mu = qr_.solve(r2);
    x -= dinv_.asDiagonal() * (a_.transpose() * mu);
    return x;
  }

 private:
  RealVector dinv_;
  Eigen::SparseMatrix<double> a_;
  RealVector b_;
  Eigen::SparseQR<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> qr_;
};

// Clips negative eigenvalues of m in place; returns lambda_min before clipping.
double clip_psd(ComplexMatrix& m) {
  const Index s = m.rows();
  if (s == 1) {
    const double a = m(0, 0).real();
    m(0, 0) = std::max(a, 0.0);
    return a;
  }
  if (s == 2) {
    const double a = m(0, 0).real(), d = m(1, 1).real();
    const Complex b = m(0, 1);
    const double mean = 0.5 * (a + d);
    const double rad = std::hypot(0.5 * (a - d), std::abs(b));
    const double lo = mean - rad, hi = mean + rad;
    if (lo >= 0.0) return lo;
    if (hi <= 0.0) {
      m.setZero();
      return lo;
    }
    // hi * (m - lo I) / (hi - lo)
    const double f = hi / (hi - lo);
    m(0, 0) = f * (a - lo);
    m(1, 1) = f * (d - lo);
    m(0, 1) = f * b;
    m(1, 0) = std::conj(m(0, 1));
    return lo;
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(m);
  const double lo = eig.eigenvalues()(0);
  if (lo >= 0.0) return lo;
  m = eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).asDiagonal() * eig.eigenvectors().adjoint();
  return lo;
}

void fill(const Component& c, const RealVector& x, ComplexMatrix& m) {
  m.setZero(c.size, c.size);
  for (const auto& e : c.entries) {
    Complex v = e.a;
    for (int i = 0; i < e.refs.count; ++i) v += e.refs.refs[i].beta * x(e.refs.refs[i].param);
    m(e.r, e.c) = v;
    if (e.r != e.c) m(e.c, e.r) = std::conj(v);
  }
}

}  // namespace

FeasibilityResult solve(const FeasibilityProblem& problem, const SolveOptions& options) {
  if (!(problem.tol > 0.0)) throw PreconditionError("tolerance must be positive");
  if (problem.max_iterations < 0) throw PreconditionError("iteration cap must be nonnegative");
  const Compiled compiled = compile(problem);
  const Index n = problem.param_count();
  RealVector d = compiled.weight;
  for (Index k = 0; k < n; ++k)
    if (d(k) == 0.0) d(k) = 1.0;
  const AffineProjector affine(problem, d);

  FeasibilityResult out;
  out.components = static_cast<int>(compiled.components.size());
  RealVector x;
  if (options.warm_start.size() == n) {
    x = options.warm_start;
  } else if (options.seed != 0) {
    linalg::Rng rng(options.seed);
    std::normal_distribution<double> g;
    x.resize(n);
    for (Index k = 0; k < n; ++k) x(k) = g(rng);
  } else {
    x = RealVector::Zero(n);
  }
  x = affine.project(x);

  std::vector<ComplexMatrix> p_corr;
  RealVector q_corr;
  if (options.dykstra) {
    p_corr.resize(compiled.components.size());
    for (std::size_t i = 0; i < compiled.components.size(); ++i)
      p_corr[i] = ComplexMatrix::Zero(compiled.components[i].size, compiled.components[i].size);
    q_corr = RealVector::Zero(n);
  }

  double best = std::numeric_limits<double>::infinity();
  double window_best = best;
  ComplexMatrix m, y;
  RealVector rhs(n);
  for (int it = 0;; ++it) {
    rhs.setZero();
    double worst = 0.0;
    for (std::size_t ci = 0; ci < compiled.components.size(); ++ci) {
      const Component& c = compiled.components[ci];
      fill(c, x, m);
      if (options.dykstra) {
        ComplexMatrix probe = m;
        worst = std::max(worst, -clip_psd(probe));
        y = m + p_corr[ci];
        m = y;
        clip_psd(m);
        p_corr[ci] = y - m;
      } else {
        worst = std::max(worst, -clip_psd(m));
      }
      for (const auto& e : c.entries) {
        const double w = e.r == e.c ? 1.0 : 2.0;
        const Complex z = m(e.r, e.c) - e.a;
        for (int i = 0; i < e.refs.count; ++i)
          rhs(e.refs.refs[i].param) += w * (std::conj(e.refs.refs[i].beta) * z).real();
      }
    }
    out.iterations = it;
    out.psd_residual = worst;
    if (worst <= problem.tol) {
      const Verification v = verify(problem, x, problem.tol);
      if (v.ok) {
        out.status = Status::Feasible;
        out.x = x;
        out.affine_residual = v.affine_residual;
        out.stop_reason = "verified";
        return out;
      }
    }
    best = std::min(best, worst);
    if (it >= problem.max_iterations) {
      out.stop_reason = "iteration cap";
      break;
    }
    if (options.stagnation_window > 0 && it > 0 && it % options.stagnation_window == 0) {
      if (best > options.stagnation_ratio * window_best) {
        out.stop_reason = "stagnated";
        break;
      }
      window_best = best;
    }
    if (it == 0) window_best = best;
    RealVector u(n);
    for (Index k = 0; k < n; ++k) u(k) = compiled.weight(k) > 0.0 ? rhs(k) / compiled.weight(k) : x(k);
    if (options.dykstra) {
      u += q_corr;
      x = affine.project(u);
      q_corr = u - x;
    } else {
      x = affine.project(u);
    }
  }
  out.x = x;
  out.affine_residual = verify(problem, x, problem.tol).affine_residual;
  return out;
}

}  // namespace jnr::psdfeas
