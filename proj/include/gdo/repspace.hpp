#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "gdo/common.hpp"
#include "gdo/complex_matrix.hpp"
#include "gdo/report.hpp"
#include "gdo/structure.hpp"

namespace gdo {

enum class RepKind { fock, cyclic, isos, multiphoton_sector, two_mode };

inline const char* rep_kind_name(RepKind k) {
  switch (k) {
    case RepKind::fock: return "fock";
    case RepKind::cyclic: return "cyclic";
    case RepKind::isos: return "isos";
    case RepKind::multiphoton_sector: return "multiphoton_sector";
    case RepKind::two_mode: return "two_mode";
  }
  return "?";
}

// Finite-dimensional matrix representation of a GDO or q-GDO. A and Adag act
// on column vectors in the orthonormal basis |0>, ..., |dim-1>; numdiag holds
// the eigenvalues of the number (or shifted number) operator. boundary_rows
// marks rows where truncation breaks the defining relations; cyclic
// representations have none.
struct Representation {
  RepKind kind = RepKind::fock;
  int dim = 0;
  ComplexMatrix A, Adag;
  std::vector<double> numdiag;
  std::vector<double> numdiag2;  // second number operator, two_mode only
  StructureFunction structure;
  std::vector<int> boundary_rows;

  // cyclic parameters
  int S = 0;
  double eta = 0.0;
  cplx xi{1.0, 0.0};
  double theta0 = 0.0;

  // multiphoton sector metadata (mode multiplicities and offsets)
  int mult_m = 1, sector_i = 0;
  int mult_n = 1, sector_j = 0;

  bool is_boundary_row(int r) const {
    for (int b : boundary_rows)
      if (b == r) return true;
    return false;
  }

  ComplexMatrix number_matrix() const {
    ComplexMatrix n(dim, dim);
    for (int k = 0; k < dim; ++k) n(k, k) = numdiag[static_cast<std::size_t>(k)];
    return n;
  }

  ComplexMatrix qN_matrix() const {
    ComplexMatrix n(dim, dim);
    for (int k = 0; k < dim; ++k)
      n(k, k) = std::pow(structure.q(), cplx{numdiag[static_cast<std::size_t>(k)], 0.0});
    return n;
  }
};

namespace detail {

inline double masked_row_max_abs(const ComplexMatrix& m, const Representation& rep,
                                 bool exclude_boundary) {
  double r = 0.0;
  for (int i = 0; i < m.rows(); ++i) {
    if (exclude_boundary && rep.is_boundary_row(i)) continue;
    for (int j = 0; j < m.cols(); ++j) r = std::max(r, std::abs(m(i, j)));
  }
  return r;
}

// Residuals are scaled by the magnitude of the quantities compared (capped
// below at 1), otherwise tolerances would be meaningless for families whose
// structure function grows to ~1e15 within the mandated dimensions.
inline double scaled(double defect, double reference) {
  return defect / std::max(1.0, reference);
}

inline ComplexMatrix band_lowering_matrix(const std::vector<double>& band_sq, int dim) {
  // band_sq[n] = F-value under A|n> = sqrt(F)|n-1>, n = 1..dim-1
  ComplexMatrix a(dim, dim);
  for (int n = 1; n < dim; ++n) {
    const double f = band_sq[static_cast<std::size_t>(n)];
    if (f < -kNonnegTol) throw Error("representation: negative band value at n = " + std::to_string(n));
    a(n - 1, n) = std::sqrt(std::max(0.0, f));
  }
  return a;
}

}  // namespace detail

// Truncated Fock representation: A|n> = sqrt(F(n))|n-1>, A-dagger the matrix
// adjoint, with the raising action out of the top level dropped. Requires the
// Fock condition F(0) = 0.
inline Representation build_fock_rep(const StructureFunction& F, int dim) {
  if (dim < 2) throw Error("build_fock_rep: dim must be >= 2");
  const double f0 = std::abs(F.raw_eval(0.0).first);
  if (f0 > kNonnegTol)
    throw Error("build_fock_rep: F(0) = " + std::to_string(f0) +
                " != 0, no Fock representation exists for this structure function");
  std::vector<double> fvals(static_cast<std::size_t>(dim), 0.0);
  for (int n = 1; n < dim; ++n) {
    fvals[static_cast<std::size_t>(n)] = F.eval(static_cast<double>(n));
    if (fvals[static_cast<std::size_t>(n)] <= kNonnegTol)
      throw Error("build_fock_rep: F(" + std::to_string(n) +
                  ") = 0 at an interior level; the basis degenerates there. Use a bespoke "
                  "construction (e.g. the isos module) for structure functions with "
                  "interior zeros");
  }
  Representation rep;
  rep.kind = RepKind::fock;
  rep.dim = dim;
  rep.structure = F;
  rep.A = detail::band_lowering_matrix(fvals, dim);
  rep.Adag = adjoint(rep.A);
  rep.numdiag.resize(static_cast<std::size_t>(dim));
  for (int n = 0; n < dim; ++n) rep.numdiag[static_cast<std::size_t>(n)] = n;
  rep.boundary_rows = {dim - 1};
  return rep;
}

// Regular (two-sided truncated) representation: A|0> = 0 and A-dagger|top> = 0
// by fiat, with no condition on F(0). When F(0) != 0 the relation
// A-dagger A = F(N) necessarily breaks at row 0, so that row is flagged as a
// boundary alongside the top. Coincides with build_fock_rep when F(0) = 0.
inline Representation build_regular_rep(const StructureFunction& F, int dim) {
  if (dim < 2) throw Error("build_regular_rep: dim must be >= 2");
  std::vector<double> fvals(static_cast<std::size_t>(dim), 0.0);
  for (int n = 1; n < dim; ++n) {
    fvals[static_cast<std::size_t>(n)] = F.eval(static_cast<double>(n));
    if (fvals[static_cast<std::size_t>(n)] <= kNonnegTol)
      throw Error("build_regular_rep: F(" + std::to_string(n) + ") = 0 at an interior level");
  }
  Representation rep;
  rep.kind = RepKind::fock;
  rep.dim = dim;
  rep.structure = F;
  rep.A = detail::band_lowering_matrix(fvals, dim);
  rep.Adag = adjoint(rep.A);
  rep.numdiag.resize(static_cast<std::size_t>(dim));
  for (int n = 0; n < dim; ++n) rep.numdiag[static_cast<std::size_t>(n)] = n;
  const double f0 = std::abs(F.raw_eval(0.0).first);
  rep.boundary_rows = f0 > kNonnegTol ? std::vector<int>{0, dim - 1} : std::vector<int>{dim - 1};
  return rep;
}

// Reports each F(q^{eta+k}) for k = 0..S. A cyclic representation exists iff
// every value is real, strictly positive, and bounded away from zero.
inline CheckReport check_cyclic_admissibility(const StructureFunction& Fq, int S, double eta) {
  if (S < 1) throw Error("check_cyclic_admissibility: S must be >= 1");
  if (!Fq.is_root_of_unity(S))
    throw Error("check_cyclic_admissibility: q is not a primitive (S+1)-th root of unity "
                "(q^(S+1) != 1)");
  CheckReport report;
  double min_val = 0.0, max_val = 0.0, max_imag = 0.0;
  for (int k = 0; k <= S; ++k) {
    const auto [re, im] = Fq.raw_eval(eta + static_cast<double>(k));
    max_imag = std::max(max_imag, im);
    if (k == 0) {
      min_val = max_val = re;
    } else {
      min_val = std::min(min_val, re);
      max_val = std::max(max_val, re);
    }
    report.add_at_least("F(q^(eta+" + std::to_string(k) + "))", re, 1e-12);
  }
  report.add("max_imag_part", max_imag, 1e-12);
  // Signed structure functions (e.g. the naive q-oscillator bracket at a root
  // of unity) are called out with the reason rather than just failing per k.
  const double negative_mass = std::max(0.0, -min_val);
  report.add("sign_indefinite(takes negative as well as positive values)",
             (min_val < -1e-12 && max_val > 1e-12) ? negative_mass : 0.0, 1e-12);
  return report;
}

struct CyclicOptions {
  // |xi| != 1 breaks Adag = adjoint(A); the paper's general xi != 0 stays
  // reachable behind this flag, which also skips the adjointness invariant.
  bool allow_nonunitary_xi = false;
  // Admit structure functions that vanish somewhere on the cycle. The wrap
  // construction still satisfies the algebra relations row by row, but the
  // central element A^{S+1} becomes 0, so the result is not cyclic in the
  // strict sense. Sign-indefinite or complex-valued F stays rejected.
  bool allow_vanishing_F = false;
};

// (S+1)-dimensional cyclic representation with wrap-around action
//   A|0> = xi^{-1} sqrt(F(q^eta)) |S>,   Adag|S> = xi sqrt(F(q^eta)) |0>.
inline Representation build_cyclic_rep(const StructureFunction& Fq, int S, double eta, cplx xi,
                                       CyclicOptions opts = {}) {
  if (S < 1) throw Error("build_cyclic_rep: S must be >= 1");
  if (std::abs(xi) < 1e-14) throw Error("build_cyclic_rep: xi must be nonzero");
  if (!opts.allow_nonunitary_xi && std::abs(std::abs(xi) - 1.0) > 1e-12)
    throw Error("build_cyclic_rep: |xi| != 1 would break Adag = adjoint(A); pass "
                "allow_nonunitary_xi to build anyway");
  CheckReport adm = check_cyclic_admissibility(Fq, S, eta);
  if (!adm.all_pass()) {
    bool only_zeros = true;
    for (const auto& e : adm.entries)
      if (!e.pass && e.direction == CheckDirection::at_least && e.residual < -1e-12)
        only_zeros = false;
    if (const auto* e = adm.find("max_imag_part"); e && !e->pass) only_zeros = false;
    if (!(opts.allow_vanishing_F && only_zeros)) {
      std::string why;
      for (const auto& e : adm.entries)
        if (!e.pass) why += (why.empty() ? "" : "; ") + e.name;
      throw Error("build_cyclic_rep: admissibility failure: " + why);
    }
  }

  const int dim = S + 1;
  Representation rep;
  rep.kind = RepKind::cyclic;
  rep.dim = dim;
  rep.S = S;
  rep.eta = eta;
  rep.xi = xi;
  rep.theta0 = -std::arg(xi) / static_cast<double>(S + 1);
  rep.structure = Fq;
  rep.numdiag.resize(static_cast<std::size_t>(dim));
  for (int k = 0; k < dim; ++k) rep.numdiag[static_cast<std::size_t>(k)] = eta + k;

  rep.A = ComplexMatrix(dim, dim);
  rep.Adag = ComplexMatrix(dim, dim);
  for (int k = 1; k <= S; ++k) rep.A(k - 1, k) = std::sqrt(Fq.eval(eta + k));
  rep.A(S, 0) = std::sqrt(Fq.eval(eta)) / xi;
  for (int k = 0; k < S; ++k) rep.Adag(k + 1, k) = std::sqrt(Fq.eval(eta + k + 1));
  rep.Adag(0, S) = xi * std::sqrt(Fq.eval(eta));
  // boundary_rows stays empty: the relations are exact on every row.
  return rep;
}

// Verifies the defining relations on all rows except boundary_rows (cyclic
// representations are checked everywhere). Fock-kind representations use the
// integer-number-operator form; cyclic ones use the q-GDO form, whose
// commutation relations run through q^N and hold across the wrap.
inline CheckReport check_gdo_relations(const Representation& rep, double tol = kTolDerived) {
  CheckReport report;
  const bool exclude = !rep.boundary_rows.empty();
  const StructureFunction& F = rep.structure;

  ComplexMatrix diagF(rep.dim, rep.dim), diagF1(rep.dim, rep.dim);
  for (int k = 0; k < rep.dim; ++k) {
    const double n = rep.numdiag[static_cast<std::size_t>(k)];
    diagF(k, k) = F.eval(n);
    diagF1(k, k) = F.eval(n + 1.0);
  }

  const ComplexMatrix AAdag = matmul(rep.A, rep.Adag);
  const ComplexMatrix AdagA = matmul(rep.Adag, rep.A);
  const double scale1 = std::max(max_abs(AAdag), max_abs(diagF1));
  const double scale2 = std::max(max_abs(AdagA), max_abs(diagF));

  report.add("AAdag_minus_F(N+1)",
             detail::scaled(detail::masked_row_max_abs(AAdag - diagF1, rep, exclude), scale1),
             tol, exclude);
  report.add("AdagA_minus_F(N)",
             detail::scaled(detail::masked_row_max_abs(AdagA - diagF, rep, exclude), scale2),
             tol, exclude);

  if (rep.kind == RepKind::cyclic) {
    const ComplexMatrix Q = rep.qN_matrix();
    const cplx q = F.q();
    const ComplexMatrix d3 = matmul(Q, rep.A) - (1.0 / q) * matmul(rep.A, Q);
    const ComplexMatrix d4 = matmul(Q, rep.Adag) - q * matmul(rep.Adag, Q);
    report.add("qN_A_minus_qinv_A_qN", detail::scaled(max_abs(d3), max_abs(rep.A)), tol);
    report.add("qN_Adag_minus_q_Adag_qN", detail::scaled(max_abs(d4), max_abs(rep.Adag)), tol);
  } else {
    const ComplexMatrix N = rep.number_matrix();
    const ComplexMatrix d3 = commutator(N, rep.Adag) - rep.Adag;
    const ComplexMatrix d4 = commutator(N, rep.A) + rep.A;
    report.add("comm_N_Adag_minus_Adag",
               detail::scaled(detail::masked_row_max_abs(d3, rep, exclude), max_abs(rep.Adag)),
               tol, exclude);
    report.add("comm_N_A_plus_A",
               detail::scaled(detail::masked_row_max_abs(d4, rep, exclude), max_abs(rep.A)), tol,
               exclude);
  }

  // Truncation defects at flagged rows are pinned values, not noise: the top
  // row of AAdag - F(N+1) misses exactly F(top+1).
  if (rep.kind != RepKind::cyclic && rep.is_boundary_row(rep.dim - 1)) {
    const double ftop = F.eval(rep.numdiag[static_cast<std::size_t>(rep.dim - 1)] + 1.0);
    const double defect = std::abs((AAdag - diagF1)(rep.dim - 1, rep.dim - 1) + ftop);
    report.add("boundary_defect_AAdag_equals_minus_F(top+1)", detail::scaled(defect, ftop), 1e-9);
  }
  if (rep.kind != RepKind::cyclic && rep.is_boundary_row(0)) {
    const double f0 = std::abs(F.raw_eval(rep.numdiag[0]).first);
    const double defect = std::abs((AdagA - diagF)(0, 0) + f0);
    report.add("boundary_defect_AdagA_equals_minus_F(0)", detail::scaled(defect, f0), 1e-9);
  }
  return report;
}

// For cyclic representations: A^{S+1}, (Adag)^{S+1} and (q^N)^{S+1} must be
// the scalar multiples of the identity fixed by the structure-function
// product over one full cycle.
inline CheckReport check_central_elements(const Representation& rep, double tol = kTolDerived) {
  if (rep.kind != RepKind::cyclic)
    throw Error("check_central_elements: representation is not cyclic");
  CheckReport report;
  const StructureFunction& F = rep.structure;
  const int S = rep.S;

  double prod = 1.0;
  for (int k = 0; k <= S; ++k) prod *= F.eval(rep.eta + k);
  const double root = std::sqrt(prod);

  const ComplexMatrix apow = matpow(rep.A, S + 1);
  const ComplexMatrix adpow = matpow(rep.Adag, S + 1);
  const ComplexMatrix qpow = matpow(rep.qN_matrix(), S + 1);
  const ComplexMatrix I = ComplexMatrix::identity(rep.dim);

  const cplx a_scalar = root / rep.xi;
  const cplx ad_scalar = root * rep.xi;
  const cplx q_scalar = std::pow(F.q(), cplx{rep.eta * (S + 1), 0.0});

  report.add("A_pow_(S+1)_minus_scalar_I",
             detail::scaled(max_abs(apow - a_scalar * I), std::abs(a_scalar)), tol);
  report.add("Adag_pow_(S+1)_minus_scalar_I",
             detail::scaled(max_abs(adpow - ad_scalar * I), std::abs(ad_scalar)), tol);
  report.add("qN_pow_(S+1)_minus_q^(eta(S+1))_I", max_abs(qpow - q_scalar * I), tol);
  report.add("comm_A_pow_(S+1)_with_Adag",
             detail::scaled(max_abs(commutator(apow, rep.Adag)),
                            std::abs(a_scalar) * max_abs(rep.Adag)),
             tol);
  return report;
}

}  // namespace gdo
