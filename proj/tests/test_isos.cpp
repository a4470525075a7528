#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gdo/isos.hpp"
#include "oracles.hpp"

using gdo::cplx;
using gdo::ComplexMatrix;

TEST_CASE("isos representation matrix elements") {
  auto sp = gdo::build_isos_rep(12);
  // A|psi_2> = 1 * sqrt(2) |psi_1>
  CHECK(sp.A(1, 2).real() == Catch::Approx(std::sqrt(2.0)).epsilon(1e-15));
  // both vacua: columns 0 and 1 of A vanish
  for (int r = 0; r < 12; ++r) {
    CHECK(std::abs(sp.A(r, 0)) == 0.0);
    CHECK(std::abs(sp.A(r, 1)) == 0.0);
  }
  CHECK(gdo::max_abs(sp.Adag - gdo::adjoint(sp.A)) == 0.0);
  CHECK_THROWS_AS(gdo::build_isos_rep(3), gdo::Error);
}

TEST_CASE("isos relations: F(x) = (x-1)^2 x") {
  auto sp = gdo::build_isos_rep(16);
  auto rep = gdo::isos_as_representation(sp);
  CHECK(gdo::check_gdo_relations(rep, 1e-12).all_pass());

  // AdagA = (N-1)^2 N and AAdag = N^2 (N+1) entrywise
  auto ada = gdo::matmul(sp.Adag, sp.A);
  auto aad = gdo::matmul(sp.A, sp.Adag);
  for (int n = 0; n < 15; ++n) {
    CHECK(ada(n, n).real() == Catch::Approx((n - 1.0) * (n - 1.0) * n).margin(1e-12));
    CHECK(aad(n, n).real() == Catch::Approx(static_cast<double>(n) * n * (n + 1.0)).margin(1e-12));
  }
}

TEST_CASE("one-dimensional subspace is invariant") {
  auto sp = gdo::build_isos_rep(10);
  // P0 Adag P0-perp = 0: row 0 and column 0 of Adag vanish
  for (int k = 0; k < 10; ++k) {
    CHECK(std::abs(sp.Adag(0, k)) == 0.0);
    CHECK(std::abs(sp.Adag(k, 0)) == 0.0);
  }
}

TEST_CASE("isospectrality and intertwining") {
  const int dim = 14;
  auto sp = gdo::build_isos_rep(dim);
  // H_lambda = N_lambda + 1/2 has spectrum n + 1/2 by construction
  for (int n = 0; n < dim; ++n)
    CHECK(sp.numdiag[static_cast<std::size_t>(n)] + 0.5 == Catch::Approx(n + 0.5));

  // H_lambda bdag - bdag (H + 1) = 0 exactly
  ComplexMatrix hpsi(dim, dim), hosc(dim, dim);
  for (int n = 0; n < dim; ++n) {
    hpsi(n, n) = n + 0.5;
    hosc(n, n) = n + 0.5;
  }
  auto defect = gdo::matmul(hpsi, sp.Bdag) -
                gdo::matmul(sp.Bdag, hosc + ComplexMatrix::identity(dim));
  CHECK(gdo::max_abs(defect) < 1e-12);

  // bb-dagger = aa-dagger: B Bdag = diag(n+1) off the truncation row
  auto bbd = gdo::matmul(sp.B, sp.Bdag);
  for (int n = 0; n < dim - 1; ++n)
    CHECK(bbd(n, n).real() == Catch::Approx(n + 1.0).margin(1e-13));
}

TEST_CASE("hypergeometric 0F2") {
  CHECK(gdo::hypergeom_0F2(1.0, 2.0, 0.0) == 1.0);
  CHECK(gdo::hypergeom_0F2(1.0, 2.0, 1.0) ==
        Catch::Approx(oracle::hyper_0F2(1.0, 2.0, 1.0)).epsilon(1e-12));
  CHECK(gdo::hypergeom_0F2(1.0, 2.0, 1.0) == Catch::Approx(1.542839).margin(1e-6));
  CHECK(gdo::hypergeom_0F2(1.0, 2.0, 0.25) ==
        Catch::Approx(oracle::hyper_0F2(1.0, 2.0, 0.25)).epsilon(1e-12));
  CHECK_THROWS_WITH(gdo::hypergeom_0F2(-1.0, 2.0, 0.5),
                    Catch::Matchers::ContainsSubstring("pole"));
  CHECK_THROWS_AS(gdo::hypergeom_0F2(0.0, 2.0, 0.5), gdo::Error);
}

TEST_CASE("isos coherent state") {
  // alpha = 0: the state is |psi_1>
  auto st0 = gdo::isos_coherent_state(cplx{}, 8);
  CHECK(std::abs(st0.coeffs[1] - cplx{1.0, 0.0}) < 1e-14);
  CHECK(std::abs(st0.coeffs[0]) == 0.0);

  const cplx alpha{0.5, 0.0};
  auto st = gdo::isos_coherent_state(alpha, 24);
  CHECK(std::abs(st.coeffs[0]) == 0.0);
  // psi_1 coefficient is 0F2(1,2;|alpha|^2)^{-1/2}
  const double f02 = oracle::hyper_0F2(1.0, 2.0, std::norm(alpha));
  CHECK(st.coeffs[1].real() == Catch::Approx(1.0 / std::sqrt(f02)).epsilon(1e-9));

  // eigenstate of A off-boundary
  auto rep = gdo::isos_as_representation(gdo::build_isos_rep(24));
  CHECK(gdo::annihilation_eigen_residual(rep, st, alpha) < 1e-10);
}

TEST_CASE("isos coherent eigen-residual at complex alpha") {
  const cplx alpha{0.4, -0.3};
  auto st = gdo::isos_coherent_state(alpha, 32);
  auto rep = gdo::isos_as_representation(gdo::build_isos_rep(32));
  CHECK(gdo::annihilation_eigen_residual(rep, st, alpha) < 1e-10);
}

TEST_CASE("coherent intertwining maps") {
  auto r0 = gdo::check_coherent_intertwining(cplx{}, 16);
  CHECK(r0.all_pass());
  auto r1 = gdo::check_coherent_intertwining(cplx{0.5, 0.0}, 32);
  CHECK(r1.all_pass());
  CHECK(r1.residual_of("(N+1)a_eigenresidual_of_b_alpha") < 1e-9);
  CHECK(r1.residual_of("bdag_of_(N+2)a_eigenstate_matches_alpha") < 1e-9);
  CHECK(gdo::check_coherent_intertwining(cplx{0.3, 0.4}, 32).all_pass());
}

TEST_CASE("isos squeezed vacuum coefficients") {
  auto v0 = gdo::isos_squeezed_vacuum(cplx{}, 8);
  CHECK(std::abs(v0.coeffs[1] - cplx{1.0, 0.0}) < 1e-14);

  auto v = gdo::isos_squeezed_vacuum(cplx{0.3, 0.0}, 32);
  for (int n = 0; n < 32; n += 2) CHECK(std::abs(v.coeffs[static_cast<std::size_t>(n)]) == 0.0);
  // C3/C1 = z sqrt(1!!/(2!! * 3)) = 0.3 sqrt(1/6)
  CHECK((v.coeffs[3] / v.coeffs[1]).real() == Catch::Approx(0.3 * std::sqrt(1.0 / 6.0)).epsilon(1e-13));
  CHECK((v.coeffs[3] / v.coeffs[1]).real() == Catch::Approx(0.12247).margin(5e-6));

  // closed form against the double-factorial oracle
  for (int k = 1; 2 * k + 1 < 20; ++k) {
    const double expected = std::pow(0.3, k) * std::sqrt(oracle::double_factorial(2 * k - 1) /
                                                         (oracle::double_factorial(2 * k) * (2 * k + 1)));
    CHECK((v.coeffs[static_cast<std::size_t>(2 * k + 1)] / v.coeffs[1]).real() ==
          Catch::Approx(expected).epsilon(1e-12));
  }

  // kernel of mu A + nu Adag off-boundary
  auto rep = gdo::isos_as_representation(gdo::build_isos_rep(32));
  CHECK(gdo::squeeze_kernel_residual(rep, v, cplx{0.3, 0.0}) < 1e-9);
  CHECK_THROWS_AS(gdo::isos_squeezed_vacuum(cplx{1.2, 0.0}, 16), gdo::Error);
}

TEST_CASE("b maps the isos squeezed vacuum to the oscillator squeezed vacuum") {
  auto r0 = gdo::check_isos_squeezed_maps_to_oscillator(cplx{}, 16);
  CHECK(r0.all_pass());
  for (double z : {0.3, 0.45}) {
    const int dim = z > 0.4 ? 64 : 48;
    auto report = gdo::check_isos_squeezed_maps_to_oscillator(cplx{z, 0.0}, dim);
    CHECK(report.all_pass());
    CHECK(report.residual_of("b_of_squeezed_vacuum_matches_oscillator_squeezed") < 1e-9);
  }
}

TEST_CASE("generic state constructors refuse the isos structure function") {
  CHECK_THROWS_AS(gdo::coherent_state(gdo::StructureFunction::isos(), cplx{0.3, 0.0}, 16),
                  gdo::Error);
  CHECK_THROWS_AS(gdo::squeezed_vacuum(gdo::StructureFunction::isos(), cplx{0.3, 0.0}, 16),
                  gdo::Error);
}
