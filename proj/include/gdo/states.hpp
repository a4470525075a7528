#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "gdo/common.hpp"
#include "gdo/complex_matrix.hpp"
#include "gdo/report.hpp"
#include "gdo/repspace.hpp"
#include "gdo/structure.hpp"

namespace gdo {

// Complex coefficient vector in the orthonormal basis of a representation,
// with provenance metadata for serialization.
struct StateVector {
  int dim = 0;
  std::vector<cplx> coeffs;
  bool normalized = false;

  std::string kind;  // coherent | squeezed | displaced_squeezed | ...
  cplx alpha{0.0, 0.0};
  cplx z{0.0, 0.0};
  StructureFunction structure;

  double norm() const { return norm2(coeffs); }
};

namespace detail {

inline void require_interior_positive(const StructureFunction& F, int dim, const char* who) {
  for (int n = 1; n < dim; ++n) {
    const double v = F.eval(static_cast<double>(n));
    if (v <= kNonnegTol)
      throw Error(std::string(who) + ": F(" + std::to_string(n) +
                  ") = 0 at an interior level; ladder states degenerate there (the isos module "
                  "handles its own states for exactly this reason)");
  }
}

inline void normalize_in_place(StateVector& st) {
  const double n = st.norm();
  if (n < 1e-300) throw Error("state normalization: zero vector");
  for (auto& c : st.coeffs) c /= n;
  st.normalized = true;
}

// Tail-adequacy gate: the top retained coefficient must be negligible or the
// truncated state is not a faithful stand-in for the infinite series.
inline void require_tail_adequate(const std::vector<cplx>& coeffs, const char* who,
                                  int suggested_dim) {
  const double tail = std::abs(coeffs.back()) / norm2(coeffs);
  if (tail >= 1e-8)
    throw Error(std::string(who) + ": truncation inadequate (top coefficient fraction " +
                std::to_string(tail) + " >= 1e-8); increase dim to roughly " +
                std::to_string(suggested_dim));
}

}  // namespace detail

// Eigenstate of A with eigenvalue alpha: coefficients follow the recursion
// c_{n+1} = alpha c_n / sqrt(F(n+1)), normalized with c_0 real positive.
inline StateVector coherent_state(const StructureFunction& F, cplx alpha, int dim) {
  if (dim < 2) throw Error("coherent_state: dim must be >= 2");
  detail::require_interior_positive(F, dim, "coherent_state");

  StateVector st;
  st.dim = dim;
  st.kind = "coherent";
  st.alpha = alpha;
  st.structure = F;
  st.coeffs.assign(static_cast<std::size_t>(dim), cplx{});
  st.coeffs[0] = 1.0;
  for (int n = 0; n + 1 < dim; ++n)
    st.coeffs[static_cast<std::size_t>(n + 1)] =
        alpha * st.coeffs[static_cast<std::size_t>(n)] / std::sqrt(F.eval(n + 1.0));

  if (std::abs(alpha) > 0.0) {
    // estimate the dim at which the tail drops below threshold
    int need = dim;
    cplx c = st.coeffs.back();
    double nrm = norm2(st.coeffs);
    while (std::abs(c) / nrm >= 1e-9 && need < 16384) {
      c *= alpha / std::sqrt(F.eval(static_cast<double>(need)));
      ++need;
    }
    detail::require_tail_adequate(st.coeffs, "coherent_state", need);
  }
  detail::normalize_in_place(st);
  return st;
}

// Squeezed vacuum: kernel of mu A + nu Adag with z = -nu/mu. Odd coefficients
// vanish; even ones follow c_{2k} = z sqrt(F(2k-1)/F(2k)) c_{2k-2}.
inline StateVector squeezed_vacuum(const StructureFunction& F, cplx z, int dim) {
  if (dim < 2) throw Error("squeezed_vacuum: dim must be >= 2");
  if (std::abs(z) >= 1.0) throw Error("squeezed_vacuum: |z| must be < 1");
  detail::require_interior_positive(F, dim, "squeezed_vacuum");

  StateVector st;
  st.dim = dim;
  st.kind = "squeezed";
  st.z = z;
  st.structure = F;
  st.coeffs.assign(static_cast<std::size_t>(dim), cplx{});
  st.coeffs[0] = 1.0;
  for (int k = 2; k < dim; k += 2)
    st.coeffs[static_cast<std::size_t>(k)] = z *
        std::sqrt(F.eval(k - 1.0) / F.eval(static_cast<double>(k))) *
        st.coeffs[static_cast<std::size_t>(k - 2)];

  if (std::abs(z) > 0.0) {
    const int top = (dim - 1) - (dim - 1) % 2;  // last even index
    int need = dim;
    cplx c = st.coeffs[static_cast<std::size_t>(top)];
    const double nrm = norm2(st.coeffs);
    int k = top;
    while (std::abs(c) / nrm >= 1e-9 && need < 16384) {
      c *= z * std::sqrt(F.eval(k + 1.0) / F.eval(k + 2.0));
      k += 2;
      need = k + 1;
    }
    detail::require_tail_adequate(st.coeffs, "squeezed_vacuum", need);
  }
  detail::normalize_in_place(st);
  return st;
}

namespace detail {

inline void require_fock_kind(const Representation& rep, const char* who) {
  if (rep.kind != RepKind::fock)
    throw Error(std::string(who) + ": requires a fock-kind representation");
}

// diag(N / F(N)). The n = 0 slot is 0/0; in the products (N/F(N)) Adag and
// (N/F(N)) Adag^2 the diagonal always acts after a raise, so that slot is
// never read and 0 is a sentinel that makes any accidental read visible.
inline ComplexMatrix number_over_F_diag(const Representation& rep) {
  ComplexMatrix d(rep.dim, rep.dim);
  for (int k = 0; k < rep.dim; ++k) {
    const double n = rep.numdiag[static_cast<std::size_t>(k)];
    d(k, k) = std::abs(n) < 1e-14 ? cplx{} : cplx{n / rep.structure.eval(n), 0.0};
  }
  return d;
}

}  // namespace detail

// D(alpha) = exp(alpha (N/F(N)) Adag). The argument is strictly raising, so
// the truncated series with dim terms is the exact exponential.
inline ComplexMatrix displacement_operator(const Representation& rep, cplx alpha) {
  detail::require_fock_kind(rep, "displacement_operator");
  detail::require_interior_positive(rep.structure, rep.dim, "displacement_operator");
  ComplexMatrix w = matmul(detail::number_over_F_diag(rep), rep.Adag);
  return matexp_truncated(alpha * w, rep.dim);
}

// S(z) = exp((z/2) (N/F(N)) Adag^2).
inline ComplexMatrix squeeze_operator(const Representation& rep, cplx z) {
  detail::require_fock_kind(rep, "squeeze_operator");
  detail::require_interior_positive(rep.structure, rep.dim, "squeeze_operator");
  ComplexMatrix m2 = matmul(detail::number_over_F_diag(rep), matmul(rep.Adag, rep.Adag));
  return matexp_truncated((0.5 * z) * m2, rep.dim);
}

// Deformed exponential exp_F(alpha Adag) = sum alpha^n Adag^n / [[F(n)]]!.
// Same column 0 as D(alpha), a genuinely different operator elsewhere.
inline ComplexMatrix deformed_displacement_operator(const Representation& rep, cplx alpha) {
  detail::require_fock_kind(rep, "deformed_displacement_operator");
  detail::require_interior_positive(rep.structure, rep.dim, "deformed_displacement_operator");
  ComplexMatrix result = ComplexMatrix::identity(rep.dim);
  ComplexMatrix term = ComplexMatrix::identity(rep.dim);
  for (int n = 1; n < rep.dim; ++n) {
    term = matmul(term, rep.Adag);
    term *= alpha / rep.structure.eval(static_cast<double>(n));
    result += term;
  }
  return result;
}

namespace detail {

// max |m(r,c)| over entries whose column keeps the raised index in range:
// both sides of the identities map |c> to |c + shift>, so only columns with
// c + shift < dim carry meaning in the truncation.
inline double column_masked_max(const ComplexMatrix& m, int max_col) {
  double r = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j <= max_col; ++j) r = std::max(r, std::abs(m(i, j)));
  return r;
}

}  // namespace detail

// Identity ((N/F(N)) Adag^2)^k = Adag^{2k} prod_{j=1..k} (N+2j)/F(N+2j),
// checked per k on the columns that survive truncation.
inline CheckReport verify_identity_tt(const Representation& rep, int kmax, double tol = 1e-11) {
  detail::require_fock_kind(rep, "verify_identity_tt");
  if (2 * kmax >= rep.dim) throw Error("verify_identity_tt: need 2*kmax < dim");
  CheckReport report;
  const ComplexMatrix m2 = matmul(detail::number_over_F_diag(rep), matmul(rep.Adag, rep.Adag));
  for (int k = 0; k <= kmax; ++k) {
    const ComplexMatrix lhs = matpow(m2, k);
    ComplexMatrix diag(rep.dim, rep.dim);
    for (int c = 0; c < rep.dim; ++c) {
      double p = 1.0;
      const double n = rep.numdiag[static_cast<std::size_t>(c)];
      for (int j = 1; j <= k; ++j) p *= (n + 2.0 * j) / rep.structure.eval(n + 2.0 * j);
      diag(c, c) = p;
    }
    const ComplexMatrix rhs = matmul(matpow(rep.Adag, 2 * k), diag);
    const int max_col = rep.dim - 1 - 2 * k;
    const double scale = std::max(detail::column_masked_max(lhs, max_col),
                                  detail::column_masked_max(rhs, max_col));
    report.add("tt[k=" + std::to_string(k) + "]",
               detail::scaled(detail::column_masked_max(lhs - rhs, max_col), scale), tol);
  }
  return report;
}

// Identity ((N/F(N)) Adag)^n = Adag^n prod_{j=1..n} (N+j)/F(N+j).
inline CheckReport verify_identity_tttt(const Representation& rep, int nmax, double tol = 1e-11) {
  detail::require_fock_kind(rep, "verify_identity_tttt");
  if (nmax >= rep.dim) throw Error("verify_identity_tttt: need nmax < dim");
  CheckReport report;
  const ComplexMatrix w = matmul(detail::number_over_F_diag(rep), rep.Adag);
  for (int n = 0; n <= nmax; ++n) {
    const ComplexMatrix lhs = matpow(w, n);
    ComplexMatrix diag(rep.dim, rep.dim);
    for (int c = 0; c < rep.dim; ++c) {
      double p = 1.0;
      const double m = rep.numdiag[static_cast<std::size_t>(c)];
      for (int j = 1; j <= n; ++j) p *= (m + j) / rep.structure.eval(m + static_cast<double>(j));
      diag(c, c) = p;
    }
    const ComplexMatrix rhs = matmul(matpow(rep.Adag, n), diag);
    const int max_col = rep.dim - 1 - n;
    const double scale = std::max(detail::column_masked_max(lhs, max_col),
                                  detail::column_masked_max(rhs, max_col));
    report.add("tttt[n=" + std::to_string(n) + "]",
               detail::scaled(detail::column_masked_max(lhs - rhs, max_col), scale), tol);
  }
  return report;
}

// Residual of (A - alpha) applied to a state, restricted to rows
// [0, dim - dropped_top_rows).
inline double annihilation_eigen_residual(const Representation& rep, const StateVector& st,
                                          cplx alpha, int dropped_top_rows = 2) {
  std::vector<cplx> r = matvec(rep.A, st.coeffs);
  for (int k = 0; k < rep.dim; ++k) r[static_cast<std::size_t>(k)] -= alpha * st.coeffs[static_cast<std::size_t>(k)];
  double s = 0.0;
  for (int k = 0; k < rep.dim - dropped_top_rows; ++k) s += std::norm(r[static_cast<std::size_t>(k)]);
  return std::sqrt(s);
}

// Residual of (A - z Adag) applied to a state (mu = 1, nu = -z).
inline double squeeze_kernel_residual(const Representation& rep, const StateVector& st, cplx z,
                                      int dropped_top_rows = 2) {
  std::vector<cplx> av = matvec(rep.A, st.coeffs);
  std::vector<cplx> adv = matvec(rep.Adag, st.coeffs);
  double s = 0.0;
  for (int k = 0; k < rep.dim - dropped_top_rows; ++k) {
    const auto i = static_cast<std::size_t>(k);
    s += std::norm(av[i] - z * adv[i]);
  }
  return std::sqrt(s);
}

namespace detail {

// Interior row mask for conjugation checks: D and S are not banded, their
// truncation spill grows with |alpha|, |z|; dropping the top quarter of rows
// is conservative at the parameter caps used here.
inline int interior_rows(int dim) { return dim - (dim + 3) / 4; }

inline double row_masked_max(const ComplexMatrix& m, int row_limit) {
  double r = 0.0;
  for (int i = 0; i < row_limit; ++i)
    for (int j = 0; j < m.cols(); ++j) r = std::max(r, std::abs(m(i, j)));
  return r;
}

// Families with F(n) proportional to n generate the classical oscillator
// algebra regardless of the scale, so the Bogoliubov transformation holds
// for them and only for them.
inline bool harmonic_equivalent(const Representation& rep) {
  const double f1 = rep.structure.eval(1.0);
  if (f1 <= kNonnegTol) return false;
  for (int n = 1; n < rep.dim; ++n) {
    const double f = rep.structure.eval(static_cast<double>(n));
    if (std::abs(f - f1 * n) > 1e-10 * std::max(1.0, std::abs(f))) return false;
  }
  return true;
}

}  // namespace detail

struct DisplacedSqueezedResult {
  StateVector state;
  CheckReport report;
};

// D(alpha) S(z) |0>, normalized. For the oscillator this is the squeezed
// coherent state (an eigenstate of mu A + nu Adag); for a genuinely deformed
// F it is not, and the attached diagnostic quantifies the gap.
inline DisplacedSqueezedResult displaced_squeezed_state(const Representation& rep, cplx alpha,
                                                        cplx z) {
  detail::require_fock_kind(rep, "displaced_squeezed_state");
  if (std::abs(z) >= 1.0) throw Error("displaced_squeezed_state: |z| must be < 1");
  const ComplexMatrix op = matmul(displacement_operator(rep, alpha), squeeze_operator(rep, z));

  StateVector st;
  st.dim = rep.dim;
  st.kind = "displaced_squeezed";
  st.alpha = alpha;
  st.z = z;
  st.structure = rep.structure;
  st.coeffs.assign(static_cast<std::size_t>(rep.dim), cplx{});
  for (int r = 0; r < rep.dim; ++r) st.coeffs[static_cast<std::size_t>(r)] = op(r, 0);
  detail::normalize_in_place(st);

  // eigen-residual of (A - z Adag - beta) minimized over beta, interior rows
  const std::vector<cplx> av = matvec(rep.A, st.coeffs);
  const std::vector<cplx> adv = matvec(rep.Adag, st.coeffs);
  std::vector<cplx> bv(static_cast<std::size_t>(rep.dim));
  for (std::size_t k = 0; k < bv.size(); ++k) bv[k] = av[k] - z * adv[k];
  const cplx beta = dot(st.coeffs, bv);  // Rayleigh quotient on the unit state
  const int limit = detail::interior_rows(rep.dim);
  double s = 0.0;
  for (int k = 0; k < limit; ++k) {
    const auto i = static_cast<std::size_t>(k);
    s += std::norm(bv[i] - beta * st.coeffs[i]);
  }
  const double residual = std::sqrt(s);

  CheckReport report;
  if (detail::harmonic_equivalent(rep))
    report.add("displaced_squeezed_eigen_residual(expected_eigenstate)", residual, 1e-9);
  else
    report.add_at_least("displaced_squeezed_eigen_residual(expected_non_eigenstate)", residual,
                        1e-3);
  return {st, report};
}

// D(-alpha) A D(alpha) = A + alpha, checked on interior rows. The identity
// is algebraic: [A, (N/F(N)) Adag] = 1 holds for every admissible F.
inline CheckReport check_displacement_covariance(const Representation& rep, cplx alpha,
                                                 double tol = 1e-8) {
  detail::require_fock_kind(rep, "check_displacement_covariance");
  const ComplexMatrix t =
      matmul(displacement_operator(rep, -alpha),
             matmul(rep.A, displacement_operator(rep, alpha)));
  ComplexMatrix defect = t - rep.A;
  for (int k = 0; k < rep.dim; ++k) defect(k, k) -= alpha;
  const int limit = detail::interior_rows(rep.dim);
  CheckReport report;
  report.add("displacement_covariance_interior",
             detail::scaled(detail::row_masked_max(defect, limit), max_abs(rep.A)), tol, true);
  return report;
}

// S^{-1}(z) A S(z) against the closest mu A + nu Adag (unconstrained
// least squares on the interior rows). For harmonic-equivalent F the distance
// vanishes (Bogoliubov holds); for deformed F it must stay away from zero.
inline CheckReport check_bogoliubov_failure(const Representation& rep, cplx z) {
  detail::require_fock_kind(rep, "check_bogoliubov_failure");
  if (std::abs(z) >= 1.0) throw Error("check_bogoliubov_failure: |z| must be < 1");
  const ComplexMatrix m2 = matmul(detail::number_over_F_diag(rep), matmul(rep.Adag, rep.Adag));
  const ComplexMatrix s = matexp_truncated((0.5 * z) * m2, rep.dim);
  const ComplexMatrix sinv = matexp_truncated((-0.5 * z) * m2, rep.dim);
  const ComplexMatrix t = matmul(sinv, matmul(rep.A, s));

  const int limit = detail::interior_rows(rep.dim);
  auto masked_dot = [&](const ComplexMatrix& x, const ComplexMatrix& y) {
    cplx acc{};
    for (int i = 0; i < limit; ++i)
      for (int j = 0; j < rep.dim; ++j) acc += std::conj(x(i, j)) * y(i, j);
    return acc;
  };

  // least squares min over (mu, nu) of || T - mu A - nu Adag || (Frobenius,
  // interior rows); A and Adag occupy disjoint bands but solve generally
  const cplx g11 = masked_dot(rep.A, rep.A), g12 = masked_dot(rep.A, rep.Adag);
  const cplx g21 = std::conj(g12), g22 = masked_dot(rep.Adag, rep.Adag);
  const cplx b1 = masked_dot(rep.A, t), b2 = masked_dot(rep.Adag, t);
  const cplx det = g11 * g22 - g12 * g21;
  if (std::abs(det) < 1e-300) throw Error("check_bogoliubov_failure: degenerate Gram matrix");
  const cplx mu = (b1 * g22 - g12 * b2) / det;
  const cplx nu = (g11 * b2 - g21 * b1) / det;

  const ComplexMatrix best = t - mu * rep.A - nu * rep.Adag;
  const ComplexMatrix candidate = t - rep.A - z * rep.Adag;  // (mu, nu) = (1, z)
  const double scale = std::max(max_abs(rep.A), max_abs(rep.Adag));
  const double r_best = detail::scaled(detail::row_masked_max(best, limit), scale);
  const double r_cand = detail::scaled(detail::row_masked_max(candidate, limit), scale);

  CheckReport report;
  const bool classical = detail::harmonic_equivalent(rep) || std::abs(z) < 1e-12;
  if (classical) {
    report.add("bogoliubov_min_residual(expected_to_hold)", r_best, 1e-6, true);
    report.add("bogoliubov_residual_at_mu1_nuz(expected_to_hold)", r_cand, 1e-6, true);
  } else {
    report.add_at_least("bogoliubov_min_residual(expected_failure)", r_best, 1e-3);
    report.add_at_least("bogoliubov_residual_at_mu1_nuz(expected_failure)", r_cand, 1e-3);
  }
  return report;
}

}  // namespace gdo
