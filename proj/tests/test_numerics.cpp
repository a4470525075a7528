#include <catch2/catch_amalgamated.hpp>

#include "gdo/complex_matrix.hpp"
#include "oracles.hpp"

using gdo::cplx;
using gdo::ComplexMatrix;

TEST_CASE("matmul basics") {
  ComplexMatrix x = oracle::Rng(7).matrix(3, 3);
  CHECK(gdo::max_abs(gdo::matmul(ComplexMatrix::identity(3), x) - x) == 0.0);

  // shift-up times shift-down is diag(1, 0)
  ComplexMatrix up(2, 2), down(2, 2);
  up(0, 1) = 1.0;
  down(1, 0) = 1.0;
  ComplexMatrix p = gdo::matmul(up, down);
  CHECK(p(0, 0) == cplx{1.0, 0.0});
  CHECK(gdo::max_abs(p) == 1.0);
  CHECK(std::abs(p(1, 1)) == 0.0);

  ComplexMatrix bad(2, 3);
  CHECK_THROWS_AS(gdo::matmul(bad, bad), gdo::Error);
}

TEST_CASE("matmul matches naive triple-loop oracle") {
  oracle::Rng rng(11);
  ComplexMatrix a = rng.matrix(8, 8), b = rng.matrix(8, 8);
  CHECK(gdo::max_abs(gdo::matmul(a, b) - oracle::naive_matmul(a, b)) < 1e-13);
}

TEST_CASE("matmul associativity on random triples") {
  oracle::Rng rng(13);
  for (int t = 0; t < 5; ++t) {
    ComplexMatrix a = rng.matrix(6, 6), b = rng.matrix(6, 6), c = rng.matrix(6, 6);
    ComplexMatrix l = gdo::matmul(gdo::matmul(a, b), c);
    ComplexMatrix r = gdo::matmul(a, gdo::matmul(b, c));
    CHECK(gdo::max_abs(l - r) / std::max(1.0, gdo::max_abs(l)) < 1e-12);
  }
}

TEST_CASE("adjoint") {
  ComplexMatrix s(2, 2);
  s(0, 0) = 1.0; s(0, 1) = 2.0; s(1, 0) = 2.0; s(1, 1) = -3.0;
  CHECK(gdo::max_abs(gdo::adjoint(s) - s) == 0.0);

  ComplexMatrix m(2, 2);
  m(0, 1) = cplx{0.0, 1.0};
  ComplexMatrix a = gdo::adjoint(m);
  CHECK(a(1, 0) == cplx{0.0, -1.0});
  CHECK(a(0, 1) == cplx{0.0, 0.0});

  ComplexMatrix x = oracle::Rng(3).matrix(6, 6);
  CHECK(gdo::max_abs(gdo::adjoint(gdo::adjoint(x)) - x) == 0.0);
}

TEST_CASE("matexp_truncated") {
  CHECK(gdo::max_abs(gdo::matexp_truncated(ComplexMatrix(4, 4), 10) -
                     ComplexMatrix::identity(4)) == 0.0);

  // nilpotent 2x2: series terminates after the linear term
  ComplexMatrix n(2, 2);
  n(1, 0) = cplx{0.7, -0.2};
  ComplexMatrix e = gdo::matexp_truncated(n, 2);
  CHECK(e(0, 0) == cplx{1.0, 0.0});
  CHECK(e(1, 1) == cplx{1.0, 0.0});
  CHECK(std::abs(e(1, 0) - cplx{0.7, -0.2}) < 1e-15);

  ComplexMatrix d(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  ComplexMatrix ed = gdo::matexp_truncated(d, 30);
  CHECK(std::abs(ed(0, 0) - std::exp(1.0)) < 1e-12);
  CHECK(std::abs(ed(1, 1) - std::exp(2.0)) < 1e-12);

  CHECK_THROWS_AS(gdo::matexp_truncated(ComplexMatrix(2, 3), 5), gdo::Error);
}

TEST_CASE("matexp exact for strictly triangular input at terms = dim") {
  oracle::Rng rng(17);
  ComplexMatrix low(10, 10);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < i; ++j) low(i, j) = rng.complex_in_disk(1.0);
  ComplexMatrix exact = gdo::matexp_truncated(low, 10);
  ComplexMatrix longer = gdo::matexp_truncated(low, 15);
  CHECK(gdo::max_abs(exact - longer) < 1e-13);
}

TEST_CASE("hermitian_eigen on fixed small cases") {
  ComplexMatrix d(3, 3);
  d(0, 0) = 3.0; d(1, 1) = 1.0; d(2, 2) = 2.0;
  auto r = gdo::hermitian_eigen(d);
  REQUIRE(r.eigenvalues.size() == 3);
  CHECK(r.eigenvalues[0] == Catch::Approx(1.0).margin(1e-12));
  CHECK(r.eigenvalues[1] == Catch::Approx(2.0).margin(1e-12));
  CHECK(r.eigenvalues[2] == Catch::Approx(3.0).margin(1e-12));

  ComplexMatrix pauli(2, 2);
  pauli(0, 1) = 1.0;
  pauli(1, 0) = 1.0;
  auto p = gdo::hermitian_eigen(pauli);
  CHECK(p.eigenvalues[0] == Catch::Approx(-1.0).margin(1e-12));
  CHECK(p.eigenvalues[1] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("hermitian_eigen reconstruction and orthonormality on random input") {
  oracle::Rng rng(23);
  ComplexMatrix h = rng.hermitian(10, 2.0);
  auto r = gdo::hermitian_eigen(h);

  ComplexMatrix v = r.eigenvectors;
  ComplexMatrix lam(10, 10);
  for (int k = 0; k < 10; ++k) lam(k, k) = r.eigenvalues[static_cast<std::size_t>(k)];
  ComplexMatrix recon = gdo::matmul(gdo::matmul(v, lam), gdo::adjoint(v));
  CHECK(gdo::max_abs(recon - h) < 1e-9);
  CHECK(gdo::max_abs(gdo::matmul(gdo::adjoint(v), v) - ComplexMatrix::identity(10)) < 1e-10);

  // columns are eigenvectors with small residual
  for (int k = 0; k < 10; ++k) {
    std::vector<cplx> col(10);
    for (int i = 0; i < 10; ++i) col[static_cast<std::size_t>(i)] = v(i, k);
    auto hv = gdo::matvec(h, col);
    for (int i = 0; i < 10; ++i)
      hv[static_cast<std::size_t>(i)] -= r.eigenvalues[static_cast<std::size_t>(k)] * col[static_cast<std::size_t>(i)];
    CHECK(gdo::norm2(hv) < 1e-9 * std::max(1.0, gdo::max_abs(h)));
  }
}

TEST_CASE("hermitian_eigen rejects non-hermitian input") {
  ComplexMatrix m(2, 2);
  m(0, 1) = 1.0;  // m(1,0) = 0: not hermitian
  CHECK_THROWS_AS(gdo::hermitian_eigen(m), gdo::Error);
}
