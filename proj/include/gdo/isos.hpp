#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "gdo/common.hpp"
#include "gdo/complex_matrix.hpp"
#include "gdo/report.hpp"
#include "gdo/repspace.hpp"
#include "gdo/states.hpp"
#include "gdo/structure.hpp"

namespace gdo {

// Isospectral oscillator system: H_lambda = b-dagger b + 1/2 shares the
// oscillator spectrum, and A = b-dagger a b, Adag = b-dagger a-dagger b
// generate the GDO with F(x) = (x-1)^2 x. The psi basis and the oscillator
// basis are two indexings of the same dimension; B and Bdag are the
// intertwiners b (psi -> osc, zero column at psi_0) and b-dagger (osc -> psi).
//
// Both psi_0 and psi_1 are annihilated by A; span{psi_0} carries the trivial
// one-dimensional representation and everything above it the irreducible one.
// The parameter lambda never enters any matrix element.
struct IsosSpace {
  int dim = 0;
  ComplexMatrix A, Adag;
  ComplexMatrix B, Bdag;
  std::vector<double> numdiag;  // N_lambda eigenvalues: 0, 1, ..., dim-1
  std::vector<int> boundary_rows;
};

inline IsosSpace build_isos_rep(int dim) {
  if (dim < 4) throw Error("build_isos_rep: dim must be >= 4");
  IsosSpace sp;
  sp.dim = dim;
  sp.A = ComplexMatrix(dim, dim);
  sp.Adag = ComplexMatrix(dim, dim);
  sp.B = ComplexMatrix(dim, dim);
  sp.Bdag = ComplexMatrix(dim, dim);
  for (int n = 1; n < dim; ++n) {
    sp.A(n - 1, n) = (n - 1.0) * std::sqrt(static_cast<double>(n));  // A|psi_n> = (n-1) sqrt(n) |psi_{n-1}>
    sp.B(n - 1, n) = std::sqrt(static_cast<double>(n));              // b|psi_n> = sqrt(n) |n-1>
  }
  for (int n = 0; n + 1 < dim; ++n) {
    sp.Adag(n + 1, n) = n * std::sqrt(n + 1.0);       // Adag|psi_n> = n sqrt(n+1) |psi_{n+1}>
    sp.Bdag(n + 1, n) = std::sqrt(n + 1.0);           // bdag|n> = sqrt(n+1) |psi_{n+1}>
  }
  sp.numdiag.resize(static_cast<std::size_t>(dim));
  for (int n = 0; n < dim; ++n) sp.numdiag[static_cast<std::size_t>(n)] = n;
  sp.boundary_rows = {dim - 1};
  return sp;
}

// View as a Representation (kind isos) so the generic relation checker and
// serialization apply.
inline Representation isos_as_representation(const IsosSpace& sp) {
  Representation rep;
  rep.kind = RepKind::isos;
  rep.dim = sp.dim;
  rep.A = sp.A;
  rep.Adag = sp.Adag;
  rep.numdiag = sp.numdiag;
  rep.structure = StructureFunction::isos();
  rep.boundary_rows = sp.boundary_rows;
  return rep;
}

// 0F2(x, y; z) by direct series with term recursion
// t_{n+1} = t_n * z / ((x+n)(y+n)(n+1)), summed until |t|/|sum| < tol.
inline double hypergeom_0F2(double x, double y, double z, double tol = 1e-12) {
  for (double p : {x, y})
    if (p <= 0.0 && std::abs(p - std::round(p)) < 1e-12)
      throw Error("hypergeom_0F2: parameter " + std::to_string(p) +
                  " is a nonpositive integer (pole of the series)");
  double sum = 1.0, term = 1.0;
  for (int n = 0; n < 10000; ++n) {
    term *= z / ((x + n) * (y + n) * (n + 1));
    sum += term;
    if (std::abs(term) < tol * std::abs(sum) && std::abs(z) < (x + n) * (y + n) * (n + 1))
      return sum;
  }
  throw Error("hypergeom_0F2: series did not converge within 10000 terms");
}

// Coherent state |alpha> = 0F2(1,2;|alpha|^2)^{-1/2} sum alpha^n /
// (n! sqrt((n+1)!)) |psi_{n+1}>. The psi_0 component is exactly zero.
inline StateVector isos_coherent_state(cplx alpha, int dim) {
  if (dim < 4) throw Error("isos_coherent_state: dim must be >= 4");
  StateVector st;
  st.dim = dim;
  st.kind = "isos_coherent";
  st.alpha = alpha;
  st.structure = StructureFunction::isos();
  st.coeffs.assign(static_cast<std::size_t>(dim), cplx{});
  cplx u{1.0, 0.0};  // alpha^n / (n! sqrt((n+1)!)) at n = 0
  st.coeffs[1] = u;
  for (int n = 1; n + 1 < dim; ++n) {
    u *= alpha / (static_cast<double>(n) * std::sqrt(n + 1.0));
    st.coeffs[static_cast<std::size_t>(n + 1)] = u;
  }
  detail::require_tail_adequate(st.coeffs, "isos_coherent_state", 2 * dim);

  // internal consistency: the squared norm of the raw series is the 0F2 value
  const double raw_norm_sq = st.norm() * st.norm();
  const double f02 = hypergeom_0F2(1.0, 2.0, std::norm(alpha));
  if (std::abs(raw_norm_sq - f02) > 1e-8 * f02)
    throw Error("isos_coherent_state: series norm disagrees with 0F2 normalizer");
  detail::normalize_in_place(st);
  return st;
}

// Squeezed vacuum of the ISOS: C_{2k} = 0 and
// C_{2k+1} = z^k sqrt((2k-1)!!/((2k)!!(2k+1))) C_1.
inline StateVector isos_squeezed_vacuum(cplx z, int dim) {
  if (dim < 4) throw Error("isos_squeezed_vacuum: dim must be >= 4");
  if (std::abs(z) >= 1.0) throw Error("isos_squeezed_vacuum: |z| must be < 1");
  StateVector st;
  st.dim = dim;
  st.kind = "isos_squeezed";
  st.z = z;
  st.structure = StructureFunction::isos();
  st.coeffs.assign(static_cast<std::size_t>(dim), cplx{});
  st.coeffs[1] = 1.0;
  const StructureFunction F = StructureFunction::isos();
  for (int n = 3; n < dim; n += 2)
    st.coeffs[static_cast<std::size_t>(n)] =
        z * std::sqrt(F.eval(n - 1.0) / F.eval(static_cast<double>(n))) *
        st.coeffs[static_cast<std::size_t>(n - 2)];
  detail::require_tail_adequate(st.coeffs, "isos_squeezed_vacuum", 2 * dim);
  detail::normalize_in_place(st);
  return st;
}

namespace detail {

inline double partial_norm(const std::vector<cplx>& v, int rows) {
  double s = 0.0;
  for (int k = 0; k < rows; ++k) s += std::norm(v[static_cast<std::size_t>(k)]);
  return std::sqrt(s);
}

inline void normalize_vec(std::vector<cplx>& v) {
  const double n = norm2(v);
  if (n < 1e-300) throw Error("normalize: zero vector");
  for (auto& c : v) c /= n;
}

}  // namespace detail

// The ISOS coherent states sit between two density-dependent oscillator
// coherent families: b|alpha> is the eigenstate of (N+1)a, and |alpha> is
// recovered by applying b-dagger to the eigenstate of (N+2)a.
inline CheckReport check_coherent_intertwining(cplx alpha, int dim) {
  const IsosSpace sp = build_isos_rep(dim);
  const StateVector st = isos_coherent_state(alpha, dim);
  CheckReport report;

  // (a) || ((N+1) a - alpha) b|alpha> || off-boundary
  std::vector<cplx> w = matvec(sp.B, st.coeffs);
  detail::normalize_vec(w);
  ComplexMatrix na(dim, dim);
  for (int n = 1; n < dim; ++n) na(n - 1, n) = static_cast<double>(n) * std::sqrt(static_cast<double>(n));
  std::vector<cplx> r = matvec(na, w);
  for (int k = 0; k < dim; ++k) r[static_cast<std::size_t>(k)] -= alpha * w[static_cast<std::size_t>(k)];
  report.add("(N+1)a_eigenresidual_of_b_alpha", detail::partial_norm(r, dim - 2), 1e-9, true);

  // (b) || |alpha> - normalize(bdag w) ||, w the series eigenstate of (N+2)a:
  // coefficients alpha^n / ((n+1)! sqrt(n!))
  std::vector<cplx> w2(static_cast<std::size_t>(dim), cplx{});
  cplx u{1.0, 0.0};
  w2[0] = u;
  for (int n = 1; n < dim; ++n) {
    u *= alpha / ((n + 1.0) * std::sqrt(static_cast<double>(n)));
    w2[static_cast<std::size_t>(n)] = u;
  }
  detail::normalize_vec(w2);
  std::vector<cplx> lifted = matvec(sp.Bdag, w2);
  detail::normalize_vec(lifted);
  for (int k = 0; k < dim; ++k) lifted[static_cast<std::size_t>(k)] -= st.coeffs[static_cast<std::size_t>(k)];
  report.add("bdag_of_(N+2)a_eigenstate_matches_alpha", detail::partial_norm(lifted, dim - 2),
             1e-9, true);
  return report;
}

// b maps the ISOS squeezed vacuum onto the oscillator squeezed vacuum
// exp(z adag^2/2)|0>. The ISOS state itself admits no such exponential form:
// the generic squeeze operator needs 1/F(1) and F(1) = 0.
inline CheckReport check_isos_squeezed_maps_to_oscillator(cplx z, int dim) {
  const IsosSpace sp = build_isos_rep(dim);
  const StateVector v = isos_squeezed_vacuum(z, dim);
  CheckReport report;

  std::vector<cplx> mapped = matvec(sp.B, v.coeffs);
  detail::normalize_vec(mapped);

  std::vector<cplx> target(static_cast<std::size_t>(dim), cplx{});
  cplx u{1.0, 0.0};
  target[0] = u;
  for (int k = 1; 2 * k < dim; ++k) {
    u *= 0.5 * z * std::sqrt(2.0 * k * (2.0 * k - 1.0)) / static_cast<double>(k);
    target[static_cast<std::size_t>(2 * k)] = u;
  }
  detail::normalize_vec(target);

  for (int k = 0; k < dim; ++k) mapped[static_cast<std::size_t>(k)] -= target[static_cast<std::size_t>(k)];
  report.add("b_of_squeezed_vacuum_matches_oscillator_squeezed", detail::partial_norm(mapped, dim - 2),
             1e-9, true);

  // the obstruction to an exponential form on the ISOS side
  report.add("exponential_form_obstruction_F(1)", StructureFunction::isos().eval(1.0), kNonnegTol);
  return report;
}

}  // namespace gdo
