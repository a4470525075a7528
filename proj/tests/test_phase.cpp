#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gdo/phase.hpp"
#include "oracles.hpp"

using gdo::cplx;
using gdo::ComplexMatrix;
using gdo::StructureFunction;

namespace {
cplx root_of_unity(int period) {
  const double phi = 2.0 * gdo::kPi / static_cast<double>(period);
  return {std::cos(phi), std::sin(phi)};
}
}  // namespace

TEST_CASE("phase states are discrete Fourier columns") {
  auto u1 = gdo::phase_states(1, 0.0);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(u1(0, 0) - cplx{r, 0.0}) < 1e-15);
  CHECK(std::abs(u1(1, 0) - cplx{r, 0.0}) < 1e-15);
  CHECK(std::abs(u1(0, 1) - cplx{r, 0.0}) < 1e-15);
  CHECK(std::abs(u1(1, 1) + cplx{r, 0.0}) < 1e-15);

  auto u3 = gdo::phase_states(3, 0.0);
  CHECK(std::abs(u3(0, 1) - cplx{0.5, 0.0}) < 1e-14);
  CHECK(std::abs(u3(1, 1) - cplx{0.0, 0.5}) < 1e-14);
  CHECK(std::abs(u3(2, 1) - cplx{-0.5, 0.0}) < 1e-14);
  CHECK(std::abs(u3(3, 1) - cplx{0.0, -0.5}) < 1e-14);

  for (int S : {2, 5, 9})
    for (double theta0 : {0.0, 0.3}) {
      auto u = gdo::phase_states(S, theta0);
      CHECK(gdo::max_abs(gdo::matmul(gdo::adjoint(u), u) - ComplexMatrix::identity(S + 1)) <
            1e-12);
    }
  CHECK_THROWS_AS(gdo::phase_states(0, 0.0), gdo::Error);
}

TEST_CASE("PB phase operator at S = 1") {
  auto pd = gdo::pb_phase_operator(1, 0.0);
  CHECK(std::abs(pd.Phi(0, 0) - cplx{gdo::kPi / 2, 0.0}) < 1e-14);
  CHECK(std::abs(pd.Phi(0, 1) + cplx{gdo::kPi / 2, 0.0}) < 1e-14);
  CHECK(std::abs(pd.Phi(1, 0) + cplx{gdo::kPi / 2, 0.0}) < 1e-14);
  CHECK(std::abs(pd.Phi(1, 1) - cplx{gdo::kPi / 2, 0.0}) < 1e-14);
}

TEST_CASE("exponential PB operator lowers with a phased wrap") {
  for (int S : {1, 2, 4}) {
    auto pd = gdo::pb_phase_operator(S, 0.0);
    for (int n = 1; n <= S; ++n)
      for (int r = 0; r <= S; ++r)
        CHECK(std::abs(pd.expPhi(r, n) - (r == n - 1 ? cplx{1.0, 0.0} : cplx{})) < 1e-13);
  }
  auto pd = gdo::pb_phase_operator(2, 0.3);
  const cplx wrap = std::exp(cplx{0.0, 3.0 * 0.3});
  CHECK(std::abs(pd.expPhi(2, 0) - wrap) < 1e-13);
  CHECK(std::abs(pd.expPhi(0, 0)) < 1e-13);
}

TEST_CASE("PB ladder operators") {
  auto [a, adag] = gdo::pb_ladder_ops(2, 0.0);
  CHECK(gdo::max_abs(adag - gdo::adjoint(a)) < 1e-12);
  CHECK(std::abs(adag(1, 0) - cplx{1.0, 0.0}) < 1e-13);
  CHECK(std::abs(adag(2, 1) - cplx{std::sqrt(2.0), 0.0}) < 1e-13);
  for (int r = 0; r < 3; ++r) CHECK(std::abs(a(r, 0)) < 1e-14);  // a_PB |0> = 0

  auto c = gdo::commutator(a, adag);
  CHECK(std::abs(c(0, 0) - cplx{1.0, 0.0}) < 1e-13);
  CHECK(std::abs(c(1, 1) - cplx{1.0, 0.0}) < 1e-13);
  CHECK(std::abs(c(2, 2) + cplx{2.0, 0.0}) < 1e-13);
}

TEST_CASE("truncated commutator identity and coherent expectation") {
  auto r5 = gdo::check_truncated_commutator(5, 0.0, cplx{0.5, 0.0});
  CHECK(r5.residual_of("commutator_minus_(I-(S+1)|S><S|)") < 1e-12);

  // physical-state limit: alpha = 1, S = 20 gives 1 within 1e-12
  auto r20 = gdo::check_truncated_commutator(20, 0.0, cplx{1.0, 0.0});
  CHECK(r20.all_pass());
  CHECK(r20.residual_of("coherent_expectation_deviation_from_1") < 1e-12);

  // small S, large alpha: the deviation is the honest renormalized value
  auto r4 = gdo::check_truncated_commutator(4, 0.0, cplx{2.0, 0.0});
  double sum = 0.0, term = 1.0;
  for (int n = 0; n <= 4; ++n) {
    if (n) term *= 4.0 / n;
    sum += term;
  }
  const double expected_dev = std::abs(1.0 - 5.0 * term / sum - 1.0);
  CHECK(r4.residual_of("coherent_expectation_deviation_from_1") ==
        Catch::Approx(expected_dev).epsilon(1e-12));
  CHECK(r4.residual_of("coherent_expectation_minus_closed_form") < 1e-12);
  CHECK_FALSE(r4.all_pass());  // far from the classical regime, and says so
}

TEST_CASE("new ladder operators reproduce the cyclic representation") {
  auto Fq = StructureFunction::q_abs(root_of_unity(4));
  auto rep_new = gdo::new_ladder_ops(3, 0.0, Fq, 0.25);
  auto rep_cyc = gdo::build_cyclic_rep(Fq, 3, 0.25, cplx{1.0, 0.0});
  CHECK(gdo::max_abs(rep_new.A - rep_cyc.A) < 1e-12);
  CHECK(gdo::max_abs(rep_new.Adag - rep_cyc.Adag) < 1e-12);
  CHECK(gdo::check_gdo_relations(rep_new, 1e-10).all_pass());

  auto Fqs = StructureFunction::q_abs_shift(root_of_unity(5), 0.2);
  auto rep_new2 = gdo::new_ladder_ops(4, 0.1, Fqs, 0.0);
  const cplx xi = std::exp(cplx{0.0, -0.5});
  auto rep_cyc2 = gdo::build_cyclic_rep(Fqs, 4, 0.0, xi);
  CHECK(gdo::max_abs(rep_new2.A - rep_cyc2.A) < 1e-12);
  CHECK(gdo::max_abs(rep_new2.Adag - rep_cyc2.Adag) < 1e-12);

  CHECK_THROWS_WITH(
      gdo::new_ladder_ops(3, 0.0, StructureFunction::q_symmetric(root_of_unity(4)), 0.25),
      Catch::Matchers::ContainsSubstring("admissibility"));
}

TEST_CASE("polar decomposition of the cyclic representation") {
  auto Fq = StructureFunction::q_abs(root_of_unity(4));
  auto rep = gdo::build_cyclic_rep(Fq, 3, 0.25, cplx{1.0, 0.0});
  auto pd = gdo::exp_phase_from_rep(rep);

  // action: e^{i Phi}|k> = |k-1>, e^{i Phi}|0> = |3> at xi = 1
  for (int k = 1; k <= 3; ++k)
    CHECK(std::abs(pd.expPhi(k - 1, k) - cplx{1.0, 0.0}) < 1e-13);
  CHECK(std::abs(pd.expPhi(3, 0) - cplx{1.0, 0.0}) < 1e-13);

  // eigenvalues at theta0 = 0: fourth roots of unity
  for (int m = 0; m < 4; ++m)
    CHECK(std::abs(std::exp(cplx{0.0, pd.thetas[static_cast<std::size_t>(m)]}) -
                   std::pow(cplx{0.0, 1.0}, m)) < 1e-13);

  CHECK_THROWS_AS(gdo::exp_phase_from_rep(gdo::build_fock_rep(StructureFunction::harmonic(), 4)),
                  gdo::Error);
}

TEST_CASE("Phi spectrum shifts uniformly with theta0") {
  auto pd0 = gdo::pb_phase_operator(4, 0.0);
  auto pd1 = gdo::pb_phase_operator(4, 0.7);
  for (std::size_t m = 0; m < pd0.thetas.size(); ++m)
    CHECK(pd1.thetas[m] - pd0.thetas[m] == Catch::Approx(0.7).epsilon(1e-13));
}

TEST_CASE("phase shift operator walks the phase states cyclically") {
  CHECK(gdo::phase_shift_check(1, 0.0).all_pass());
  CHECK(gdo::phase_shift_check(3, 0.0).all_pass());
  CHECK(gdo::phase_shift_check(8, 0.3).all_pass());
}

TEST_CASE("phase triangle: PB, polar decomposition, new ladder operators") {
  for (int S : {3, 5, 8})
    for (double theta0 : {0.0, 0.3}) {
      auto Fq = StructureFunction::q_abs(root_of_unity(S + 1));
      auto report = gdo::check_phase_triangle(S, theta0, Fq, 0.25);
      INFO("S=" << S << " theta0=" << theta0);
      CHECK(report.all_pass());
    }
}

TEST_CASE("classical limit sweep basics") {
  auto res = gdo::classical_limit_sweep({19, 39}, gdo::StructureFamily::q_abs, 4);
  REQUIRE(res.rows.size() == 8);
  CHECK(res.report.all_pass());
  for (const auto& row : res.rows) {
    CHECK(row.band_value > 0.0);
    CHECK(row.abs_deviation < 0.5);
  }

  // max deviation over the n window shrinks as S grows
  auto big = gdo::classical_limit_sweep({99, 199}, gdo::StructureFamily::q_abs, 10);
  double d99 = 0.0, d199 = 0.0;
  for (const auto& row : big.rows)
    (row.S == 99 ? d99 : d199) = std::max(row.S == 99 ? d99 : d199, row.abs_deviation);
  CHECK(d199 < d99);

  CHECK_THROWS_AS(gdo::classical_limit_sweep({19}, gdo::StructureFamily::q_abs, 10), gdo::Error);
  CHECK_THROWS_AS(gdo::classical_limit_sweep({19}, gdo::StructureFamily::harmonic, 2),
                  gdo::Error);

  auto shifted = gdo::classical_limit_sweep({39}, gdo::StructureFamily::q_abs_shift, 6);
  for (const auto& row : shifted.rows) {
    CHECK(row.eta == 0.0);
    CHECK(row.K == Catch::Approx(1.0 / 40.0));
  }

  const std::string csv = gdo::sweep_to_csv(res.rows);
  CHECK(csv.substr(0, 6) == "S,eta,");
  CHECK(csv == gdo::sweep_to_csv(res.rows));  // deterministic
}
