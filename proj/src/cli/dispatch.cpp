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


#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "jnr/cli.hpp"
#include "jnr/errors.hpp"
#include "jnr/groups.hpp"
#include "jnr/jointrad.hpp"
#include "jnr/kernels/kernels.hpp"
#include "jnr/linalg.hpp"
#include "jnr/numrad.hpp"
#include "jnr/opsys.hpp"
#include "jnr/psdfeas.hpp"
#include "jnr/ranges.hpp"

namespace jnr::cli {

namespace {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::format_real;
using jointrad::OperatorTuple;

struct Args {
  double tol = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out;

  std::string matrix, tuple, system, group, coeffs, manifest, set = "un";
  int n = 0, k = 0, radius = 0, budget = -1, dim = 2;
  double w = std::numeric_limits<double>::quiet_NaN();
  bool oracle = false;
};

double tol_or(const Args& a, double fallback) { return std::isnan(a.tol) ? fallback : a.tol; }
int budget_or(const Args& a, int fallback) { return a.budget < 0 ? fallback : a.budget; }

void require(bool ok, const std::string& message) {
  if (!ok) throw InputError(message);
}

OperatorTuple read_tuple_arg(const std::string& path, const char* flag) {
  require(!path.empty(), std::string("missing ") + flag);
  return OperatorTuple(linalg::read_tuple_file(path));
}

std::vector<double> nonnegative_coeffs(const std::string& text, int expected) {
  require(!text.empty(), "missing --coeffs");
  std::vector<double> out;
  for (Complex c : linalg::parse_complex_list(text)) {
    require(c.imag() == 0.0 && c.real() >= 0.0, "coefficients must be nonnegative reals, got " +
                                                     linalg::format_complex(c));
    out.push_back(c.real());
  }
  require(static_cast<int>(out.size()) == expected,
          "group has " + std::to_string(expected) + " generators but " + std::to_string(out.size()) +
              " coefficients were given");
  return out;
}

std::vector<int> schedule_to(int radius) {
  require(radius >= 1, "--radius must be at least 1");
  std::vector<int> s;
  for (int r = 4; r < radius; r += 4) s.push_back(r);
  s.push_back(radius);
  return s;
}

void put_estimate(Report& r, const std::string& key, const RadiusEstimate& e) {
  r.real(key + ".lower", e.lower);
  r.text(key + ".lower_method", std::string(jnr::to_string(e.lower_method)));
  if (e.has_upper()) {
    r.real(key + ".upper", e.upper);
    r.text(key + ".upper_method", std::string(jnr::to_string(e.upper_method)));
  } else {
    r.text(key + ".upper", "inf");
  }
}

ComplexMatrix column(const linalg::ComplexVector& v) { return ComplexMatrix(v); }

void put_un_element(Report& r, const std::string& key, const opsys::UnElement& e) {
  r.matrix(key + ".a0", e.a0().matrix());
  for (int i = 1; i <= e.n(); ++i) r.matrix(key + ".a" + std::to_string(i), e.a(i));
}

void put_tuple(Report& r, const std::string& key, const OperatorTuple& t) {
  for (std::size_t i = 0; i < t.size(); ++i) r.matrix(key + "." + std::to_string(i + 1), t[i]);
}

void run_radius(const Args& a, Report& r) {
  require(!a.matrix.empty(), "missing --matrix");
  const double tol = tol_or(a, 1e-10);
  r.config("matrix", a.matrix);
  r.config("tol", format_real(tol));
  const ComplexMatrix m = linalg::read_matrix_file(a.matrix);
  const auto nr = numrad::numerical_radius(m, tol);
  r.claim("radius", "numrad::numerical_radius", tol);
  put_estimate(r, "radius", nr.estimate);
  r.integer("radius.iterations", nr.estimate.iterations);
  r.real("radius.theta", nr.theta);
  r.matrix("radius.vector", column(nr.vector));
}

void run_joint(const Args& a, Report& r) {
  const OperatorTuple t = read_tuple_arg(a.tuple, "--tuple");
  const int k = a.k == 0 ? 3 : a.k;
  require(k >= 1, "--k must be at least 1");
  const double tol = tol_or(a, 1e-6);
  const int restarts = budget_or(a, 16);
  r.config("tuple", a.tuple);
  r.config("k", std::to_string(k));
  r.config("budget", std::to_string(restarts));
  r.config("tol", format_real(tol));

  jointrad::W1Options wo;
  wo.tol = tol;
  wo.seed = a.seed;
  const auto w1 = jointrad::w1(t, wo);
  r.claim("w1", "jointrad::w1", tol);
  put_estimate(r, "w1", w1.estimate);
  r.integer("w1.evaluations", w1.evaluations);
  for (std::size_t i = 0; i < w1.phases.size(); ++i) r.real("w1.phase." + std::to_string(i + 1), w1.phases[i]);

  for (int level = 1; level <= k; ++level) {
    jointrad::WkOptions ko;
    ko.restarts = restarts;
    ko.seed = a.seed;
    const auto wk = jointrad::wk_lower(t, level, ko);
    const std::string key = "wk." + std::to_string(level);
    r.claim(key, "jointrad::wk_lower", ko.tol);
    r.real(key + ".lower", wk.estimate.lower);
    r.integer(key + ".best_restart", wk.best_restart);
  }

  jointrad::WcbOptions co;
  co.tol = tol;
  co.seed = a.seed;
  const auto cb = jointrad::wcb_upper_search(t, co);
  r.claim("wcb", "jointrad::wcb_upper_search", tol);
  put_estimate(r, "wcb", cb.estimate);
  r.real("wcb.kappa", cb.kappa);
  r.real("wcb.diag_sum_norm", cb.diag_sum_norm);
  if (const auto blocks = jointrad::detect_block_supports(t)) {
    const auto e = jointrad::block_orthogonal_wcb(t, *blocks);
    r.claim("wcb_block", "jointrad::block_orthogonal_wcb", 1e-9);
    put_estimate(r, "wcb_block", e);
  }
}

void run_group_norm(const Args& a, Report& r) {
  require(!a.group.empty(), "missing --group");
  const auto spec = groups::parse_group_spec(a.group);
  const auto coeffs = nonnegative_coeffs(a.coeffs, spec.generators());
  const double tol = tol_or(a, 1e-10);
  r.config("group", spec.to_string());
  r.config("coeffs", a.coeffs);
  r.config("radius", std::to_string(a.radius));
  r.config("tol", format_real(tol));
  groups::ReNormOptions o;
  o.tol = tol;
  o.seed = a.seed;
  const auto schedule = schedule_to(a.radius);
  r.claim("group_norm", "groups::re_norm_lower", tol);
  bool monotone = true;
  double prev = -std::numeric_limits<double>::infinity(), last = 0.0;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const auto e = groups::re_norm_lower(spec, coeffs, schedule[i], o);
    const std::string key = "group_norm.schedule." + std::to_string(i);
    r.integer(key + ".radius", schedule[i]);
    r.real(key + ".lower", e.lower);
    r.text(key + ".method", std::string(jnr::to_string(e.lower_method)));
    monotone = monotone && e.lower >= prev - tol;
    prev = e.lower;
    last = e.lower;
  }
  double sum = 0.0;
  for (double c : coeffs) sum += c;
  r.real("group_norm.lower", last);
  r.real("group_norm.upper", sum);
  r.boolean("group_norm.monotone", monotone);
}

void run_amenability(const Args& a, Report& r) {
  require(!a.group.empty(), "missing --group");
  const auto spec = groups::parse_group_spec(a.group);
  const auto coeffs = nonnegative_coeffs(a.coeffs, spec.generators());
  const double tol = tol_or(a, 1e-10);
  r.config("group", spec.to_string());
  r.config("coeffs", a.coeffs);
  r.config("radius", std::to_string(a.radius));
  r.config("tol", format_real(tol));
  groups::AmenabilityOptions o;
  o.norm.tol = tol;
  o.norm.seed = a.seed;
  const auto rep = groups::amenability_gap(spec, coeffs, schedule_to(a.radius), o);
  r.claim("amenability", "groups::amenability_gap", tol);
  for (std::size_t i = 0; i < rep.radii.size(); ++i) {
    const std::string key = "amenability.schedule." + std::to_string(i);
    r.integer(key + ".radius", rep.radii[i]);
    r.real(key + ".lower", rep.estimates[i].lower);
  }
  r.real("amenability.coeff_sum", rep.coeff_sum);
  r.real("amenability.gap", rep.gap);
  r.text("amenability.hint", std::string(groups::to_string(rep.hint)));
  r.boolean("amenability.heuristic", rep.heuristic);
}

void run_ucp(const Args& a, Report& r) {
  const OperatorTuple t = read_tuple_arg(a.tuple, "--tuple");
  opsys::UcpOptions o;
  o.max_k = a.k == 0 ? 3 : a.k;
  require(o.max_k >= 1, "--k must be at least 1");
  o.restarts = budget_or(a, 16);
  o.seed = a.seed;
  o.tol = tol_or(a, 1e-7);
  r.config("tuple", a.tuple);
  r.config("k", std::to_string(o.max_k));
  r.config("budget", std::to_string(o.restarts));
  r.config("tol", format_real(o.tol));
  const auto u = opsys::ucp_check(t, o);
  r.claim("ucp", "opsys::ucp_check", o.tol);
  r.text("ucp.verdict", std::string(opsys::to_string(u.verdict)));
  r.real("ucp.wcb_lower", u.lower);
  r.real("ucp.wcb_upper", u.upper);
  r.text("ucp.upper_source", u.upper_source.empty() ? "none" : u.upper_source);
  if (u.refutation && u.refutation->witness) {
    r.integer("ucp.witness.k", u.refutation->k);
    r.real("ucp.witness.value", u.refutation->witness_value);
    r.boolean("ucp.witness.cross_validated", u.refutation->cross_validated);
    put_un_element(r, "ucp.witness", *u.refutation->witness);
    r.matrix("ucp.witness.vector", column(u.refutation->witness_vector));
  }
  if (u.certificate) {
    const auto& c = *u.certificate;
    for (std::size_t i = 0; i < c.diagonal.size(); ++i)
      r.matrix("ucp.certificate.p" + std::to_string(i + 1), c.diagonal[i].matrix());
  }
}

void put_verdict(Report& r, const ranges::MembershipVerdict& v) {
  r.text("range.status", std::string(ranges::to_string(v.status)));
  r.text("range.evidence", std::string(ranges::to_string(v.evidence)));
  r.real("range.lower", v.lower);
  r.real("range.upper", v.upper);
  r.boolean("range.out_flag", v.out_flag);
  if (!v.note.empty()) r.text("range.note", v.note);
  for (std::size_t i = 0; i < v.assumptions.size(); ++i)
    r.text("range.assumption." + std::to_string(i + 1), v.assumptions[i]);
  if (v.slot >= 0) {
    r.integer("range.slot", v.slot + 1);
    r.matrix("range.vector", column(v.vector));
  }
  if (v.certificate)
    for (std::size_t i = 0; i < v.certificate->diagonal.size(); ++i)
      r.matrix("range.certificate.p" + std::to_string(i + 1), v.certificate->diagonal[i].matrix());
  if (v.witness && v.witness->witness) {
    put_un_element(r, "range.witness", *v.witness->witness);
    r.matrix("range.witness.vector", column(v.witness->witness_vector));
  }
  if (v.choi) r.matrix("range.choi", *v.choi);
}

void run_range(const Args& a, Report& r) {
  const OperatorTuple b = read_tuple_arg(a.tuple, "--tuple");
  ranges::MembershipOptions o;
  o.tol = tol_or(a, a.set == "sn" ? 1e-9 : 1e-7);
  o.budget = budget_or(a, 16);
  o.seed = a.seed;
  r.config("tuple", a.tuple);
  r.config("set", a.set);
  r.config("budget", std::to_string(o.budget));
  r.config("tol", format_real(o.tol));
  ranges::MembershipVerdict v;
  bool verified = false;
  if (a.set == "sn") {
    r.claim("range", "ranges::membership_Sn", o.tol);
    v = ranges::membership_Sn(b, o.tol);
    verified = ranges::verify_membership(v, b, o.tol);
  } else if (a.set == "un") {
    r.claim("range", "ranges::membership_Un", o.tol);
    v = ranges::membership_Un(b, o);
    verified = ranges::verify_membership(v, b, o.tol);
  } else if (a.set == "kmax") {
    const int k = a.k == 0 ? 1 : a.k;
    r.config("k", std::to_string(k));
    r.claim("range", "ranges::membership_kmax_Un", o.tol);
    v = ranges::membership_kmax_Un(b, k, o);
    verified = ranges::verify_membership(v, b, o.tol);
  } else if (a.set == "w") {
    const OperatorTuple t = read_tuple_arg(a.system, "--system");
    r.config("system", a.system);
    r.claim("range", "ranges::membership_W", o.tol);
    v = ranges::membership_W(t, b, o);
    verified = v.choi && ranges::verify_choi(*v.choi, t, b, o.tol);
  } else {
    throw InputError("--set must be one of sn, un, kmax, w; got '" + a.set + "'");
  }
  put_verdict(r, v);
  r.boolean("range.evidence_verified", verified);
}

void run_refute(const Args& a, Report& r) {
  const OperatorTuple b = read_tuple_arg(a.tuple, "--tuple");
  const int k = a.k == 0 ? 1 : a.k;
  ranges::MembershipOptions o;
  o.tol = tol_or(a, 1e-7);
  o.budget = budget_or(a, 16);
  o.seed = a.seed;
  r.config("tuple", a.tuple);
  r.config("k", std::to_string(k));
  r.config("budget", std::to_string(o.budget));
  r.config("tol", format_real(o.tol));
  const auto res = ranges::omin_refute(b, k, o);
  r.claim("refute", "ranges::omin_refute", o.tol);
  r.text("refute.status", std::string(ranges::to_string(res.status)));
  r.integer("refute.candidates", res.candidates);
  r.real("refute.value", res.value);
  if (res.witness) {
    r.text("refute.family", res.family);
    r.real("refute.witness_wcb", res.witness_wcb);
    put_tuple(r, "refute.witness", *res.witness);
  }
}

void run_feas(const Args& a, Report& r) {
  require(!a.manifest.empty(), "missing --manifest");
  auto prob = psdfeas::read_manifest_file(a.manifest);
  if (!std::isnan(a.tol)) prob.tol = a.tol;
  if (a.budget >= 0) prob.max_iterations = a.budget;
  r.config("manifest", a.manifest);
  r.config("budget", std::to_string(prob.max_iterations));
  r.config("tol", format_real(prob.tol));
  r.config("oracle", a.oracle ? "true" : "false");
  psdfeas::SolveOptions so;
  so.seed = a.seed;
  const auto res = psdfeas::solve(prob, so);
  r.claim("feas", "psdfeas::solve", prob.tol);
  r.text("feas.status", std::string(psdfeas::to_string(res.status)));
  r.integer("feas.iterations", res.iterations);
  r.text("feas.stop_reason", res.stop_reason);
  r.real("feas.psd_residual", res.psd_residual);
  r.real("feas.affine_residual", res.affine_residual);
  if (res.status == psdfeas::Status::Feasible)
    for (std::size_t i = 0; i < prob.variables().size(); ++i)
      r.matrix("feas.witness." + prob.variables()[i].name, prob.value(static_cast<int>(i), res.x));
  if (a.oracle) {
    const auto o = psdfeas::brute_force_oracle(prob);
    r.claim("oracle", "psdfeas::brute_force_oracle", psdfeas::OracleOptions{}.margin);
    r.text("oracle.verdict", std::string(psdfeas::to_string(o.verdict)));
    r.real("oracle.best_lambda_min", o.best_value);
    r.integer("oracle.cells", o.cells);
  }
}

void run_bounds(const Args& a, Report& r) {
  require(a.n >= 2, "--n must be at least 2");
  r.config("n", std::to_string(a.n));
  const auto rep = opsys::bound_calculators(a.n);
  r.claim("bounds", "opsys::bound_calculators", 0.0);
  for (const auto& v : rep.values) r.real("bounds." + v.id, v.value);
  const auto verdicts = rep.verdicts();
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    const std::string key = "bounds.check." + std::to_string(i + 1);
    r.text(key + ".relation", verdicts[i].relation);
    r.boolean(key + ".holds", verdicts[i].holds);
  }
  if (a.budget > 0) {
    const int k = a.k == 0 ? 1 : a.k;
    r.config("budget", std::to_string(a.budget));
    r.config("k", std::to_string(k));
    r.config("dim", std::to_string(a.dim));
    const auto g = ranges::hausdorff_gap_estimate(a.n, k, a.dim, a.budget, a.seed);
    r.claim("gap", "ranges::hausdorff_gap_estimate", jointrad::W1Options{}.tol);
    r.real("gap.estimate", g.estimate);
    r.real("gap.reference", g.reference);
    r.integer("gap.best_trial", g.best_trial);
    for (const auto& s : g.trace) {
      const std::string key = "gap.trace." + std::to_string(s.trial);
      r.real(key + ".wk_upper", s.wk_upper);
      r.real(key + ".wcb_upper", s.wcb_upper);
      r.real(key + ".distance", s.distance);
    }
  }
}

psdfeas::SparseComplex to_sparse(const linalg::SparseOperator& s) {
  std::vector<Eigen::Triplet<Complex>> t;
  for (const auto& e : s.triplets()) t.emplace_back(e.row, e.col, e.value);
  psdfeas::SparseComplex m(s.dim(), s.dim());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

void run_obstruction(const Args& a, Report& r) {
  opsys::ObstructionOptions o;
  o.budget = budget_or(a, 50000);
  o.seed = a.seed;
  o.tol = tol_or(a, 1e-7);
  r.config("budget", std::to_string(o.budget));
  r.config("tol", format_real(o.tol));
  opsys::ObstructionReport rep;
  if (!a.group.empty()) {
    const auto spec = groups::parse_group_spec(a.group);
    require(spec.kind == groups::GroupKind::Free, "obstruction needs a free group");
    require(a.radius >= 1, "--radius must be at least 1");
    r.config("group", spec.to_string());
    r.config("radius", std::to_string(a.radius));
    std::vector<psdfeas::SparseComplex> u;
    for (int i = 0; i < spec.generators(); ++i) {
      std::vector<Complex> c(static_cast<std::size_t>(spec.generators()), 0.0);
      c[static_cast<std::size_t>(i)] = 1.0;
      u.push_back(opsys::reunitarize(to_sparse(groups::rep_operator(spec, c, a.radius))).u);
    }
    if (std::isnan(a.w)) {
      o.w = opsys::kesten_w(spec.order);
      o.w_source = "kesten_w";
    }
    if (!std::isnan(a.w)) o.w = a.w;
    r.config("w", o.w ? format_real(*o.w) : "computed");
    rep = opsys::lp_obstruction_demo(u, o);
  } else {
    const OperatorTuple t = read_tuple_arg(a.tuple, "--tuple or --group");
    r.config("tuple", a.tuple);
    if (!std::isnan(a.w)) o.w = a.w;
    r.config("w", o.w ? format_real(*o.w) : "computed");
    rep = opsys::lp_obstruction_demo(t, o);
  }
  r.claim("obstruction", "opsys::lp_obstruction_demo", o.tol);
  r.boolean("obstruction.applicable", rep.applicable);
  r.integer("obstruction.n", rep.n);
  r.integer("obstruction.p", rep.p);
  r.real("obstruction.w", rep.w);
  r.text("obstruction.w_source", rep.w_source);
  r.real("obstruction.ratio", rep.ratio);
  for (std::size_t i = 0; i < rep.chain.size(); ++i)
    r.text("obstruction.chain." + std::to_string(i + 1), rep.chain[i]);
  if (rep.applicable) {
    r.text("obstruction.ansatz", rep.ansatz);
    r.text("obstruction.solver_status", std::string(psdfeas::to_string(rep.solver_status)));
    r.integer("obstruction.solver_iterations", rep.solver_iterations);
    r.text("obstruction.stop_reason", rep.stop_reason);
    r.real("obstruction.psd_residual", rep.psd_residual);
    r.real("obstruction.affine_residual", rep.affine_residual);
    r.boolean("obstruction.discrepancy", rep.discrepancy);
  }
}

int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("JNR_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 4096) return static_cast<int>(v);
    throw InputError(std::string("JNR_THREADS must be a positive integer, got '") + env + "'");
  }
  return kernels::thread_budget();
}

// First token that is neither an option nor the value of a global option.
std::optional<std::string> unknown_command(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg.rfind("-", 0) == 0) {
      if (arg.find('=') == std::string::npos &&
          (arg == "--tol" || arg == "--seed" || arg == "--threads" || arg == "--out"))
        ++i;
      continue;
    }
    return arg;
  }
  return std::nullopt;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Args a;
  CLI::App app{"Numerical radius, joint radius and operator system computations", "jnr"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--tol", a.tol, "Tolerance (command specific default)");
  app.add_option("--seed", a.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", a.threads, "Thread budget (default: JNR_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", a.out, "Report path (default: standard output)");

  auto* radius = app.add_subcommand("radius", "Numerical radius of a matrix");
  radius->add_option("--matrix", a.matrix, "Matrix file")->required();

  auto* joint = app.add_subcommand("joint", "w_1, w_k and w_cb bounds of a tuple");
  joint->add_option("--tuple", a.tuple, "Tuple file")->required();
  joint->add_option("--k", a.k, "Highest level (default 3)");
  joint->add_option("--budget", a.budget, "Ascent restarts (default 16)");

  auto* gnorm = app.add_subcommand("group-norm", "Lower bounds on w(sum_i c_i lambda(g_i))");
  gnorm->add_option("--group", a.group, "free:n, abelian:d or cyclic:m")->required();
  gnorm->add_option("--coeffs", a.coeffs, "Comma separated coefficients")->required();
  gnorm->add_option("--radius", a.radius, "Largest ball radius")->required();

  auto* amen = app.add_subcommand("amenability", "Gap between the ball bounds and sum_i c_i");
  amen->add_option("--group", a.group, "free:n, abelian:d or cyclic:m")->required();
  amen->add_option("--coeffs", a.coeffs, "Comma separated coefficients")->required();
  amen->add_option("--radius", a.radius, "Largest ball radius")->required();

  auto* ucp = app.add_subcommand("ucp", "Is the assignment E_12,i -> x_i unital completely positive");
  ucp->add_option("--tuple", a.tuple, "Tuple file")->required();
  ucp->add_option("--k", a.k, "Highest positivity level searched (default 3)");
  ucp->add_option("--budget", a.budget, "Ascent restarts (default 16)");

  auto* range = app.add_subcommand("range", "Matrix range membership");
  range->add_option("--tuple", a.tuple, "Tuple B")->required();
  range->add_option("--set", a.set, "sn, un, kmax or w")->capture_default_str();
  range->add_option("--system", a.system, "Tuple T for --set w");
  range->add_option("--k", a.k, "Level for --set kmax (default 1)");
  range->add_option("--budget", a.budget, "Search budget (default 16)");

  auto* refute = app.add_subcommand("refute", "Search for a k-minimal refutation");
  refute->add_option("--tuple", a.tuple, "Tuple B")->required();
  refute->add_option("--k", a.k, "Level (default 1)");
  refute->add_option("--budget", a.budget, "Scalar samples (default 16)");

  auto* feas = app.add_subcommand("feas", "Solve a feasibility manifest");
  feas->add_option("--manifest", a.manifest, "Manifest file")->required();
  feas->add_option("--budget", a.budget, "Iteration budget");
  feas->add_flag("--oracle", a.oracle, "Also run the exhaustive oracle");

  auto* bounds = app.add_subcommand("bounds", "Closed-form bounds for n generators");
  bounds->add_option("--n", a.n, "Number of generators")->required();
  bounds->add_option("--budget", a.budget, "Trials for the distance search (default 0: skip)");
  bounds->add_option("--k", a.k, "Level for the distance search (default 1)");
  bounds->add_option("--dim", a.dim, "Matrix size for the distance search")->capture_default_str();

  auto* obs = app.add_subcommand("obstruction", "Trace obstruction for unitary tuples");
  obs->add_option("--group", a.group, "Truncated free group generators, free:n");
  obs->add_option("--radius", a.radius, "Ball radius for --group");
  obs->add_option("--tuple", a.tuple, "Dense unitary tuple file");
  obs->add_option("--w", a.w, "Externally certified value of w (default for free groups: Kesten)");
  obs->add_option("--budget", a.budget, "Solver iterations (default 50000)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::Error& e) {
    if (app.get_subcommands().empty())
      if (const auto name = unknown_command(argc, argv)) {
        err << "error: unknown command '" << *name << "'\n";
        return 2;
      }
    err << "error: " << e.what() << '\n';
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  Report report(sub->get_name());
  std::string text;
  try {
    const int threads = resolve_threads(a.threads);
    kernels::set_thread_budget(threads);
    report.config("seed", std::to_string(a.seed));
    report.config("threads", std::to_string(threads));
    const std::string& name = sub->get_name();
    if (name == "radius") run_radius(a, report);
    else if (name == "joint") run_joint(a, report);
    else if (name == "group-norm") run_group_norm(a, report);
    else if (name == "amenability") run_amenability(a, report);
    else if (name == "ucp") run_ucp(a, report);
    else if (name == "range") run_range(a, report);
    else if (name == "refute") run_refute(a, report);
    else if (name == "feas") run_feas(a, report);
    else if (name == "bounds") run_bounds(a, report);
    else run_obstruction(a, report);
    text = report.str();
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }

  if (a.out.empty()) {
    out << text;
    out.flush();
    return out ? 0 : 1;
  }
  std::ofstream file(a.out, std::ios::binary | std::ios::trunc);
  file << text;
  file.close();
  if (!file) {
    err << "error: cannot write report to '" << a.out << "'\n";
    return 1;
  }
  return 0;
}

}  // namespace jnr::cli
