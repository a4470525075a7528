#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "gdo/common.hpp"
#include "gdo/complex_matrix.hpp"
#include "gdo/expr.hpp"
#include "gdo/report.hpp"
#include "gdo/repspace.hpp"
#include "gdo/states.hpp"
#include "gdo/structure.hpp"

namespace gdo {

// Intensity-dependent multiphoton coupling A = f(N) a^m (one mode) or
// A = f(N1, N2) a^m b^n (two modes), restricted to the sector spanned by
// |km + i> (resp. |km + i, kn + j>). f must not vanish at the nonnegative
// integers probed up to the working dimension.
struct CouplingSpec {
  int mode_count = 1;
  ExprPtr f;
  int m = 1, n = 1;  // photon multiplicities
  int i = 0, j = 0;  // sector offsets, 0 <= i < m and 0 <= j < n
};

inline CouplingSpec make_coupling(const std::string& f_expr, int m, int i,
                                  const std::map<std::string, double>& params = {}) {
  if (m < 1) throw Error("coupling: m must be a positive integer");
  if (i < 0 || i >= m) throw Error("coupling: sector offset must satisfy 0 <= i < m");
  CouplingSpec spec;
  spec.mode_count = 1;
  spec.f = parse_expression(f_expr, {"N"}, params);
  spec.m = m;
  spec.i = i;
  return spec;
}

inline CouplingSpec make_two_mode_coupling(const std::string& f_expr, int m, int n, int i, int j,
                                           const std::map<std::string, double>& params = {}) {
  if (m < 1 || n < 1) throw Error("coupling: multiplicities must be positive integers");
  if (i < 0 || i >= m || j < 0 || j >= n)
    throw Error("coupling: sector offsets must satisfy 0 <= i < m, 0 <= j < n");
  CouplingSpec spec;
  spec.mode_count = 2;
  spec.f = parse_expression(f_expr, {"N1", "N2"}, params);
  spec.m = m;
  spec.n = n;
  spec.i = i;
  spec.j = j;
  return spec;
}

namespace detail {

inline ComplexMatrix osc_lowering(int dim) {
  ComplexMatrix a(dim, dim);
  for (int k = 1; k < dim; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

inline cplx coupling_value(const CouplingSpec& spec, double n1, double n2 = 0.0) {
  ExprEnv env;
  if (spec.mode_count == 1) {
    env.values["N"] = cplx{n1, 0.0};
  } else {
    env.values["N1"] = cplx{n1, 0.0};
    env.values["N2"] = cplx{n2, 0.0};
  }
  return expr_eval(spec.f, env);
}

inline ComplexMatrix extract(const ComplexMatrix& full, const std::vector<int>& idx) {
  ComplexMatrix sub(static_cast<int>(idx.size()), static_cast<int>(idx.size()));
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t c = 0; c < idx.size(); ++c)
      sub(static_cast<int>(r), static_cast<int>(c)) =
          full(idx[r], idx[c]);
  return sub;
}

// m*(x-1) + i as an AST, the backing photon number at sector level x-1.
inline ExprPtr sector_photon_number(int m, int i) {
  return expr_binary(ExprOp::add,
                     expr_binary(ExprOp::mul, expr_num(m),
                                 expr_binary(ExprOp::sub, expr_var("x"), expr_num(1.0))),
                     expr_num(i));
}

// prod_{t=1..m} (m*(x-1) + i + t)
inline ExprPtr rising_product(int m, int i) {
  ExprPtr base = sector_photon_number(m, i);
  ExprPtr prod;
  for (int t = 1; t <= m; ++t) {
    ExprPtr factor = expr_binary(ExprOp::add, base, expr_num(t));
    prod = prod ? expr_binary(ExprOp::mul, prod, factor) : factor;
  }
  return prod;
}

// Closed-form structure function induced by a coupling, as an expression in
// the sector number x. Only its values at nonnegative integers are
// meaningful, so the parse-time nonnegativity grid is skipped.
inline StructureFunction induced_structure(const CouplingSpec& spec) {
  ExprPtr fsub;
  ExprPtr prod;
  if (spec.mode_count == 1) {
    fsub = expr_subst(spec.f, "N", sector_photon_number(spec.m, spec.i));
    prod = rising_product(spec.m, spec.i);
  } else {
    fsub = expr_subst(expr_subst(spec.f, "N1", sector_photon_number(spec.m, spec.i)), "N2",
                      sector_photon_number(spec.n, spec.j));
    prod = expr_binary(ExprOp::mul, rising_product(spec.m, spec.i),
                       rising_product(spec.n, spec.j));
  }
  ExprPtr fsq = expr_binary(ExprOp::pow, expr_func(ExprOp::fabs, fsub), expr_num(2.0));
  return StructureFunction::custom_guarded(expr_binary(ExprOp::mul, prod, fsq), prod);
}

}  // namespace detail

// Realizes the GDO with A = f(N) a^m inside a backing oscillator Fock space
// of dimension dim_sector*m + i + m (one spare multiplet, so extraction never
// reads truncated rows), then restricts to the sector basis |km + i>.
inline Representation build_sector_realization(const CouplingSpec& spec, int dim_sector) {
  if (spec.mode_count != 1) throw Error("build_sector_realization: one-mode coupling required");
  if (dim_sector < 2) throw Error("build_sector_realization: dim_sector must be >= 2");
  const int backing = dim_sector * spec.m + spec.i + spec.m;

  ComplexMatrix fdiag(backing, backing);
  for (int k = 0; k < backing; ++k) {
    const cplx v = detail::coupling_value(spec, k);
    if (std::abs(v) <= 1e-12)
      throw Error("build_sector_realization: coupling f vanishes at N = " + std::to_string(k));
    fdiag(k, k) = v;
  }
  const ComplexMatrix a_full =
      matmul(fdiag, matpow(detail::osc_lowering(backing), spec.m));

  std::vector<int> idx(static_cast<std::size_t>(dim_sector));
  for (int k = 0; k < dim_sector; ++k) idx[static_cast<std::size_t>(k)] = k * spec.m + spec.i;

  Representation rep;
  rep.kind = RepKind::multiphoton_sector;
  rep.dim = dim_sector;
  rep.A = detail::extract(a_full, idx);
  rep.Adag = adjoint(rep.A);
  rep.structure = detail::induced_structure(spec);
  rep.numdiag.resize(static_cast<std::size_t>(dim_sector));
  for (int k = 0; k < dim_sector; ++k) rep.numdiag[static_cast<std::size_t>(k)] = k;
  rep.boundary_rows = {dim_sector - 1};
  rep.mult_m = spec.m;
  rep.sector_i = spec.i;
  return rep;
}

namespace detail {

// f(N) for the multiphoton q-oscillator: sqrt([N/m + 1] / ((N+1)...(N+m))).
inline double q_multiphoton_coupling(double q, int m, double N) {
  double denom = 1.0;
  for (int t = 1; t <= m; ++t) denom *= N + t;
  const double num = bracket_real(cplx{q, 0.0}, N / m + 1.0);
  return std::sqrt(num / denom);
}

inline Representation q_sector_rep(double q, int m, int i, int dim,
                                   bool sector_dependent_coupling) {
  if (q <= 0.0 || std::abs(q - 1.0) < 1e-14)
    throw Error("q-multiphoton realization: q must be real positive and != 1");
  if (m < 1 || i < 0 || i >= m) throw Error("q-multiphoton realization: need 0 <= i < m");
  if (dim < 2) throw Error("q-multiphoton realization: dim must be >= 2");
  const int backing = dim * m + i + m;

  ComplexMatrix gdiag(backing, backing);
  for (int k = 0; k < backing; ++k) {
    const double arg = sector_dependent_coupling
                           ? (static_cast<double>(k) - i) / m + 1.0  // [cal N + 1]
                           : static_cast<double>(k) / m + 1.0;       // [N/m + 1]
    double denom = 1.0;
    for (int t = 1; t <= m; ++t) denom *= k + t;
    gdiag(k, k) = std::sqrt(bracket_real(cplx{q, 0.0}, arg) / denom);
  }
  const ComplexMatrix a_full = matmul(gdiag, matpow(osc_lowering(backing), m));

  std::vector<int> idx(static_cast<std::size_t>(dim));
  for (int k = 0; k < dim; ++k) idx[static_cast<std::size_t>(k)] = k * m + i;

  Representation rep;
  rep.kind = RepKind::multiphoton_sector;
  rep.dim = dim;
  rep.A = extract(a_full, idx);
  rep.Adag = adjoint(rep.A);
  rep.structure = StructureFunction::q_symmetric(cplx{q, 0.0});
  rep.numdiag.resize(static_cast<std::size_t>(dim));
  for (int k = 0; k < dim; ++k)
    rep.numdiag[static_cast<std::size_t>(k)] =
        sector_dependent_coupling ? static_cast<double>(k)
                                  : static_cast<double>(k) + static_cast<double>(i) / m;
  rep.boundary_rows = {dim - 1};
  rep.mult_m = m;
  rep.sector_i = i;
  return rep;
}

}  // namespace detail

// b_q = f(N) a^m with the sector-blind coupling. The defining relation
// b_q-dagger b_q = [N_q] holds formally but breaks on the sector vacuum for
// i >= 1 (the spontaneously broken realization); numdiag carries the
// non-integer eigenvalues N_q = n + i/m.
inline Representation q_multiphoton_realization(double q, int m, int i, int dim) {
  return detail::q_sector_rep(q, m, i, dim, /*sector_dependent_coupling=*/false);
}

// a_q = sqrt([cal N + 1]/((N+1)...(N+m))) a^m with the sector-dependent
// coupling: a_q a_q-dagger = [cal N + 1] and a_q-dagger a_q = [cal N] hold as
// operator equations on every row, vacuum included.
inline Representation sector_exact_q_realization(double q, int m, int i, int dim) {
  return detail::q_sector_rep(q, m, i, dim, /*sector_dependent_coupling=*/true);
}

// Quantifies the break: on the sector vacuum b_q-dagger b_q - [N_q] misses by
// exactly [i/m], and the q-commutation defect by q [i/m]; both vanish on
// excited rows and in the i = 0 control sector.
inline CheckReport check_broken_vacuum(double q, int m, int i, int dim) {
  if (m < 2 || i < 1 || i >= m)
    throw Error("check_broken_vacuum: broken regime needs m > 1 and 1 <= i < m");
  CheckReport report;
  const double bracket_im = detail::bracket_real(cplx{q, 0.0}, static_cast<double>(i) / m);

  auto add_entries = [&](const Representation& rep, const std::string& prefix, bool broken) {
    const StructureFunction& F = rep.structure;
    ComplexMatrix num_defect = matmul(rep.Adag, rep.A);
    ComplexMatrix qcomm_defect = matmul(rep.A, rep.Adag) - q * matmul(rep.Adag, rep.A);
    for (int k = 0; k < rep.dim; ++k) {
      const double nq = rep.numdiag[static_cast<std::size_t>(k)];
      num_defect(k, k) -= F.eval(nq);
      qcomm_defect(k, k) -= std::pow(q, -nq);
    }
    const double expected = broken ? bracket_im : 0.0;
    report.add(prefix + "vacuum_defect_minus_[i/m]",
               std::abs(std::abs(num_defect(0, 0)) - expected), 1e-10);
    report.add(prefix + "qboson_vacuum_defect_minus_q[i/m]",
               std::abs(std::abs(qcomm_defect(0, 0)) - q * expected), 1e-10);

    double excited = 0.0, excited_q = 0.0, scale = 1.0;
    for (int r = 1; r <= rep.dim - 2; ++r) {
      for (int c = 0; c < rep.dim; ++c) {
        excited = std::max(excited, std::abs(num_defect(r, c)));
        excited_q = std::max(excited_q, std::abs(qcomm_defect(r, c)));
      }
      scale = std::max(scale, F.eval(rep.numdiag[static_cast<std::size_t>(r)]));
    }
    report.add(prefix + "excited_rows_defect", detail::scaled(excited, scale), 1e-12, true);
    report.add(prefix + "excited_rows_qboson_defect", detail::scaled(excited_q, scale), 1e-12,
               true);
  };

  add_entries(q_multiphoton_realization(q, m, i, dim), "broken[i=" + std::to_string(i) + "]:",
              true);
  add_entries(q_multiphoton_realization(q, m, 0, dim), "control[i=0]:", false);
  return report;
}

// Two-mode realization of Appendix-type couplings on the diagonal sector
// basis |km + i, kn + j>, built inside the full tensor-product Fock space.
inline Representation build_two_mode_realization(const CouplingSpec& spec, int dim_sector) {
  if (spec.mode_count != 2) throw Error("build_two_mode_realization: two-mode coupling required");
  if (dim_sector < 2) throw Error("build_two_mode_realization: dim_sector must be >= 2");
  const int d1 = dim_sector * spec.m + spec.i + spec.m;
  const int d2 = dim_sector * spec.n + spec.j + spec.n;

  ComplexMatrix fdiag(d1 * d2, d1 * d2);
  for (int n1 = 0; n1 < d1; ++n1)
    for (int n2 = 0; n2 < d2; ++n2) {
      const cplx v = detail::coupling_value(spec, n1, n2);
      if (std::abs(v) <= 1e-12)
        throw Error("build_two_mode_realization: coupling f vanishes at (N1, N2) = (" +
                    std::to_string(n1) + ", " + std::to_string(n2) + ")");
      fdiag(n1 * d2 + n2, n1 * d2 + n2) = v;
    }
  const ComplexMatrix lowering = kron(matpow(detail::osc_lowering(d1), spec.m),
                                      matpow(detail::osc_lowering(d2), spec.n));
  const ComplexMatrix a_full = matmul(fdiag, lowering);

  std::vector<int> idx(static_cast<std::size_t>(dim_sector));
  for (int k = 0; k < dim_sector; ++k)
    idx[static_cast<std::size_t>(k)] = (k * spec.m + spec.i) * d2 + (k * spec.n + spec.j);

  Representation rep;
  rep.kind = RepKind::two_mode;
  rep.dim = dim_sector;
  rep.A = detail::extract(a_full, idx);
  rep.Adag = adjoint(rep.A);
  rep.structure = detail::induced_structure(spec);
  rep.numdiag.resize(static_cast<std::size_t>(dim_sector));
  rep.numdiag2.resize(static_cast<std::size_t>(dim_sector));
  for (int k = 0; k < dim_sector; ++k) {
    // recover cal N_1 = (N1 - i)/m and cal N_2 = (N2 - j)/n from the backing
    // indices; both sit at k on the diagonal basis
    const int n1 = k * spec.m + spec.i, n2 = k * spec.n + spec.j;
    rep.numdiag[static_cast<std::size_t>(k)] = static_cast<double>(n1 - spec.i) / spec.m;
    rep.numdiag2[static_cast<std::size_t>(k)] = static_cast<double>(n2 - spec.j) / spec.n;
  }
  rep.boundary_rows = {dim_sector - 1};
  rep.mult_m = spec.m;
  rep.sector_i = spec.i;
  rep.mult_n = spec.n;
  rep.sector_j = spec.j;
  return rep;
}

// (cal N_1 - cal N_2) annihilates every state on the diagonal sector basis;
// this is the conservation law that lifts the eigenstate degeneracy.
inline CheckReport check_two_mode_conservation(const Representation& rep,
                                               const StateVector& state) {
  if (rep.kind != RepKind::two_mode)
    throw Error("check_two_mode_conservation: representation is not two_mode");
  if (static_cast<int>(state.coeffs.size()) != rep.dim)
    throw Error("check_two_mode_conservation: state dimension mismatch");
  double residual = 0.0;
  for (int k = 0; k < rep.dim; ++k)
    residual = std::max(residual,
                        std::abs((rep.numdiag[static_cast<std::size_t>(k)] -
                                  rep.numdiag2[static_cast<std::size_t>(k)]) *
                                 state.coeffs[static_cast<std::size_t>(k)]));
  CheckReport report;
  report.add("(N1-N2)_annihilates_state", residual, 0.0);
  return report;
}

}  // namespace gdo
