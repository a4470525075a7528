#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gdo/common.hpp"
#include "gdo/complex_matrix.hpp"
#include "gdo/report.hpp"
#include "gdo/repspace.hpp"
#include "gdo/structure.hpp"

namespace gdo {

// Pegg-Barnett phase machinery on the (S+1)-dimensional number basis.
// Eigenvalue branch: all phase angles are reported in [theta0, theta0 + 2pi).
struct PhaseDecomposition {
  int S = 0;
  double theta0 = 0.0;
  std::vector<double> thetas;  // theta_m = theta0 + 2 pi m / (S+1)
  ComplexMatrix phase_states;  // unitary, columns |theta_m>
  ComplexMatrix Phi;           // hermitian phase operator
  ComplexMatrix expPhi;        // unitary exponential
};

// |theta_m> = (S+1)^{-1/2} sum_n exp(i n theta_m) |n>, returned column-wise.
inline ComplexMatrix phase_states(int S, double theta0) {
  if (S < 1) throw Error("phase_states: S must be >= 1");
  const int dim = S + 1;
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
  ComplexMatrix u(dim, dim);
  for (int m = 0; m < dim; ++m) {
    const double theta = theta0 + 2.0 * kPi * m / dim;
    for (int n = 0; n < dim; ++n)
      u(n, m) = norm * std::exp(cplx{0.0, n * theta});
  }
  return u;
}

// Phi = sum_m theta_m |theta_m><theta_m| and its unitary exponential.
inline PhaseDecomposition pb_phase_operator(int S, double theta0) {
  PhaseDecomposition pd;
  pd.S = S;
  pd.theta0 = theta0;
  pd.phase_states = phase_states(S, theta0);
  const int dim = S + 1;
  pd.thetas.resize(static_cast<std::size_t>(dim));
  ComplexMatrix dphi(dim, dim), dexp(dim, dim);
  for (int m = 0; m < dim; ++m) {
    const double theta = theta0 + 2.0 * kPi * m / dim;
    pd.thetas[static_cast<std::size_t>(m)] = theta;
    dphi(m, m) = theta;
    dexp(m, m) = std::exp(cplx{0.0, theta});
  }
  const ComplexMatrix udag = adjoint(pd.phase_states);
  pd.Phi = matmul(pd.phase_states, matmul(dphi, udag));
  pd.expPhi = matmul(pd.phase_states, matmul(dexp, udag));
  return pd;
}

// a_PB = e^{i Phi} sqrt(N), a_PB-dagger = sqrt(N) e^{-i Phi}. The sqrt(N)
// zero at n = 0 kills the wrap entry, reproducing the truncated oscillator.
inline std::pair<ComplexMatrix, ComplexMatrix> pb_ladder_ops(int S, double theta0) {
  const PhaseDecomposition pd = pb_phase_operator(S, theta0);
  const int dim = S + 1;
  ComplexMatrix sqrt_n(dim, dim);
  for (int n = 0; n < dim; ++n) sqrt_n(n, n) = std::sqrt(static_cast<double>(n));
  ComplexMatrix a_pb = matmul(pd.expPhi, sqrt_n);
  ComplexMatrix a_pb_dag = matmul(sqrt_n, adjoint(pd.expPhi));
  return {std::move(a_pb), std::move(a_pb_dag)};
}

// [a_PB, a_PB-dagger] = 1 - (S+1)|S><S| exactly, and its expectation on a
// renormalized truncated coherent state tends to 1 for |alpha|^2 << S.
inline CheckReport check_truncated_commutator(int S, double theta0, cplx alpha) {
  auto [a_pb, a_pb_dag] = pb_ladder_ops(S, theta0);
  const int dim = S + 1;
  ComplexMatrix target = ComplexMatrix::identity(dim);
  target(S, S) = cplx{static_cast<double>(-S), 0.0};

  CheckReport report;
  report.add("commutator_minus_(I-(S+1)|S><S|)",
             max_abs(commutator(a_pb, a_pb_dag) - target), 1e-12);

  // truncated coherent state, renormalized
  std::vector<cplx> p(static_cast<std::size_t>(dim));
  p[0] = 1.0;
  for (int n = 1; n < dim; ++n)
    p[static_cast<std::size_t>(n)] = p[static_cast<std::size_t>(n - 1)] * alpha / std::sqrt(static_cast<double>(n));
  const double nrm = norm2(p);
  for (auto& c : p) c /= nrm;

  const cplx expectation = dot(p, matvec(commutator(a_pb, a_pb_dag), p));

  // closed form 1 - (S+1) (|alpha|^{2S}/S!) / sum_{n<=S} |alpha|^{2n}/n!
  const double a2 = std::norm(alpha);
  double term = 1.0, sum = 1.0;
  for (int n = 1; n <= S; ++n) {
    term *= a2 / n;
    sum += term;
  }
  const double closed = 1.0 - (S + 1) * term / sum;
  report.add("coherent_expectation_minus_closed_form", std::abs(expectation - closed), 1e-12);
  report.add("coherent_expectation_deviation_from_1", std::abs(expectation - 1.0), 1e-12);
  return report;
}

// New ladder operators A-dagger = sqrt(F(q^N)) e^{-i Phi}, A = e^{i Phi}
// sqrt(F(q^N)) with q^N = q^{N-hat + eta}. They generate the q-GDO: the
// matrices coincide with the cyclic representation at xi = e^{-i(S+1)theta0}.
inline Representation new_ladder_ops(int S, double theta0, const StructureFunction& Fq,
                                     double eta) {
  CheckReport adm = check_cyclic_admissibility(Fq, S, eta);
  if (!adm.all_pass()) {
    std::string why;
    for (const auto& e : adm.entries)
      if (!e.pass) why += (why.empty() ? "" : "; ") + e.name;
    throw Error("new_ladder_ops: admissibility failure: " + why);
  }
  const PhaseDecomposition pd = pb_phase_operator(S, theta0);
  const int dim = S + 1;
  ComplexMatrix sqrt_f(dim, dim);
  for (int n = 0; n < dim; ++n) sqrt_f(n, n) = std::sqrt(Fq.eval(eta + n));

  Representation rep;
  rep.kind = RepKind::cyclic;
  rep.dim = dim;
  rep.S = S;
  rep.eta = eta;
  rep.theta0 = theta0;
  rep.xi = std::exp(cplx{0.0, -theta0 * (S + 1)});
  rep.structure = Fq;
  rep.A = matmul(pd.expPhi, sqrt_f);
  rep.Adag = matmul(sqrt_f, adjoint(pd.expPhi));
  rep.numdiag.resize(static_cast<std::size_t>(dim));
  for (int n = 0; n < dim; ++n) rep.numdiag[static_cast<std::size_t>(n)] = eta + n;
  return rep;
}

// Polar decomposition of a cyclic representation: e^{i Phi} = F(q^{N+1})^{-1/2} A
// is well defined exactly when the F diagonal is invertible, and its analytic
// eigenpairs are the phase states at theta0 = -arg(xi)/(S+1).
inline PhaseDecomposition exp_phase_from_rep(const Representation& rep) {
  if (rep.kind != RepKind::cyclic)
    throw Error("exp_phase_from_rep: representation is not cyclic");
  if (std::abs(std::abs(rep.xi) - 1.0) > 1e-12)
    throw Error("exp_phase_from_rep: polar decomposition requires |xi| = 1");
  const int dim = rep.dim;
  ComplexMatrix dinv(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const double f = rep.structure.eval(rep.eta + k + 1.0);
    if (f <= kNonnegTol)
      throw Error("exp_phase_from_rep: F(q^(eta+" + std::to_string(k + 1) +
                  ")) = 0, the F diagonal is not invertible");
    dinv(k, k) = 1.0 / std::sqrt(f);
  }

  PhaseDecomposition pd;
  pd.S = rep.S;
  pd.theta0 = rep.theta0;
  pd.expPhi = matmul(dinv, rep.A);
  pd.phase_states = phase_states(rep.S, rep.theta0);
  pd.thetas.resize(static_cast<std::size_t>(dim));
  ComplexMatrix dphi(dim, dim);
  for (int m = 0; m < dim; ++m) {
    pd.thetas[static_cast<std::size_t>(m)] = rep.theta0 + 2.0 * kPi * m / dim;
    dphi(m, m) = pd.thetas[static_cast<std::size_t>(m)];
  }
  pd.Phi = matmul(pd.phase_states, matmul(dphi, adjoint(pd.phase_states)));
  return pd;
}

// e^{2 pi i N/(S+1)} |theta_m> = |theta_{m+1}>, cyclically; applying it S+1
// times is the identity.
inline CheckReport phase_shift_check(int S, double theta0) {
  if (S < 1) throw Error("phase_shift_check: S must be >= 1");
  const int dim = S + 1;
  ComplexMatrix shift(dim, dim);
  for (int n = 0; n < dim; ++n) shift(n, n) = std::exp(cplx{0.0, 2.0 * kPi * n / dim});
  const ComplexMatrix u = phase_states(S, theta0);

  double worst = 0.0;
  const ComplexMatrix shifted = matmul(shift, u);
  for (int m = 0; m < dim; ++m) {
    const int next = (m + 1) % dim;
    for (int n = 0; n < dim; ++n)
      worst = std::max(worst, std::abs(shifted(n, m) - u(n, next)));
  }
  CheckReport report;
  report.add("shift_maps_theta_m_to_theta_m+1", worst, 1e-12);
  report.add("shift_pow_(S+1)_is_identity",
             max_abs(matpow(shift, dim) - ComplexMatrix::identity(dim)), 1e-12);
  return report;
}

// Full consistency report tying the three constructions together: the PB
// operator on the number basis, the polar decomposition of the cyclic
// representation, and the new ladder operators.
inline CheckReport check_phase_triangle(int S, double theta0, const StructureFunction& Fq,
                                        double eta) {
  const cplx xi = std::exp(cplx{0.0, -theta0 * (S + 1)});
  const Representation rep = build_cyclic_rep(Fq, S, eta, xi);
  const Representation rep_new = new_ladder_ops(S, theta0, Fq, eta);
  const PhaseDecomposition pd_rep = exp_phase_from_rep(rep);
  const PhaseDecomposition pd_pb = pb_phase_operator(S, theta0);
  const int dim = S + 1;
  const ComplexMatrix I = ComplexMatrix::identity(dim);

  CheckReport report;
  report.add("phase_states_gram_identity",
             max_abs(matmul(adjoint(pd_pb.phase_states), pd_pb.phase_states) - I), 1e-12);
  report.add("phase_states_completeness",
             max_abs(matmul(pd_pb.phase_states, adjoint(pd_pb.phase_states)) - I), 1e-12);
  report.add("expPhi_unitary_pb", max_abs(matmul(adjoint(pd_pb.expPhi), pd_pb.expPhi) - I), 1e-12);
  report.add("expPhi_unitary_polar", max_abs(matmul(adjoint(pd_rep.expPhi), pd_rep.expPhi) - I),
             1e-12);
  report.add("expPhi_polar_matches_pb", max_abs(pd_rep.expPhi - pd_pb.expPhi), 1e-10);
  report.add("Phi_polar_matches_pb", max_abs(pd_rep.Phi - pd_pb.Phi), 1e-10);
  report.add("new_ladder_A_matches_cyclic", max_abs(rep_new.A - rep.A), 1e-12);
  report.add("new_ladder_Adag_matches_cyclic", max_abs(rep_new.Adag - rep.Adag), 1e-12);

  // analytic eigenpairs of the polar expPhi, applied directly
  double eig_worst = 0.0;
  for (int m = 0; m < dim; ++m) {
    std::vector<cplx> col(static_cast<std::size_t>(dim));
    for (int n = 0; n < dim; ++n) col[static_cast<std::size_t>(n)] = pd_rep.phase_states(n, m);
    std::vector<cplx> ev = matvec(pd_rep.expPhi, col);
    const cplx lambda = std::exp(cplx{0.0, pd_rep.thetas[static_cast<std::size_t>(m)]});
    for (int n = 0; n < dim; ++n) ev[static_cast<std::size_t>(n)] -= lambda * col[static_cast<std::size_t>(n)];
    eig_worst = std::max(eig_worst, norm2(ev));
  }
  report.add("expPhi_eigenpair_residual", eig_worst, 1e-10);

  report.add("Phi_hermitian", max_abs(pd_pb.Phi - adjoint(pd_pb.Phi)), 1e-12);
  // generic cross-check of the analytic construction: Jacobi spectrum of Phi
  EigenResult eig = hermitian_eigen(pd_pb.Phi);
  std::vector<double> expected = pd_pb.thetas;
  std::sort(expected.begin(), expected.end());
  double spec_worst = 0.0;
  for (int m = 0; m < dim; ++m)
    spec_worst = std::max(spec_worst, std::abs(eig.eigenvalues[static_cast<std::size_t>(m)] -
                                               expected[static_cast<std::size_t>(m)]));
  report.add("Phi_spectrum_matches_thetas", spec_worst, 1e-9);
  return report;
}

// Classical-limit sweep over S. For q_abs the schedule drives eta(S); for
// q_abs_shift it drives K(S) with eta = 0. Default schedule 1/(S+1) for both.
struct SweepSchedule {
  std::function<double(int)> eta = [](int S) { return 1.0 / (S + 1.0); };
  std::function<double(int)> K = [](int S) { return 1.0 / (S + 1.0); };
};

struct SweepRow {
  int S = 0;
  double eta = 0.0;
  double K = 0.0;
  int n = 0;
  double band_value = 0.0;
  double oscillator_value = 0.0;
  double abs_deviation = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  CheckReport report;  // admissibility per S; inadmissible points are skipped
};

inline SweepResult classical_limit_sweep(const std::vector<int>& S_list, StructureFamily family,
                                         int nmax, const SweepSchedule& schedule = {}) {
  if (family != StructureFamily::q_abs && family != StructureFamily::q_abs_shift)
    throw Error("classical_limit_sweep: family must be q_abs or q_abs_shift");
  if (S_list.empty()) throw Error("classical_limit_sweep: empty S list");
  if (nmax < 1) throw Error("classical_limit_sweep: nmax must be >= 1");
  int min_s = S_list.front();
  for (int s : S_list) min_s = std::min(min_s, s);
  if (4 * nmax > min_s + 1)
    throw Error("classical_limit_sweep: nmax must be small against min(S) (need 4*nmax <= S+1)");

  SweepResult result;
  for (int S : S_list) {
    const double phi = 2.0 * kPi / (S + 1.0);
    const cplx q{std::cos(phi), std::sin(phi)};
    const double eta = family == StructureFamily::q_abs ? schedule.eta(S) : 0.0;
    const double K = family == StructureFamily::q_abs_shift ? schedule.K(S) : 0.0;
    const StructureFunction Fq = family == StructureFamily::q_abs
                                     ? StructureFunction::q_abs(q)
                                     : StructureFunction::q_abs_shift(q, K);
    const CheckReport adm = check_cyclic_admissibility(Fq, S, eta);
    if (!adm.all_pass()) {
      result.report.add_at_least("admissible[S=" + std::to_string(S) + "] (row skipped)", 0.0,
                                 1e-12);
      continue;
    }
    result.report.add("admissible[S=" + std::to_string(S) + "]", 0.0, 1e-12);
    for (int n = 0; n < nmax; ++n) {
      SweepRow row;
      row.S = S;
      row.eta = eta;
      row.K = K;
      row.n = n;
      row.band_value = std::sqrt(Fq.eval(eta + n + 1.0));
      row.oscillator_value = std::sqrt(n + 1.0);
      row.abs_deviation = std::abs(row.band_value - row.oscillator_value);
      result.rows.push_back(row);
    }
  }
  return result;
}

// Plot-ready table, deterministic %.15e floats.
inline std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "S,eta,K,n,band_value,oscillator_value,abs_deviation\n";
  for (const auto& r : rows) {
    out += std::to_string(r.S) + "," + detail::fmt_float(r.eta) + "," + detail::fmt_float(r.K) +
           "," + std::to_string(r.n) + "," + detail::fmt_float(r.band_value) + "," +
           detail::fmt_float(r.oscillator_value) + "," + detail::fmt_float(r.abs_deviation) +
           "\n";
  }
  return out;
}

}  // namespace gdo
