#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gdo/structure.hpp"
#include "oracles.hpp"

using gdo::cplx;
using gdo::StructureFunction;

namespace {
cplx root_of_unity(int period) {
  const double phi = 2.0 * gdo::kPi / static_cast<double>(period);
  return {std::cos(phi), std::sin(phi)};
}
}  // namespace

TEST_CASE("expression parser grammar") {
  auto val = [](const std::string& s, double x, std::map<std::string, double> params = {}) {
    auto f = gdo::parse_structure(s, params);
    return f.eval(x);
  };
  CHECK(val("2+3*4^2", 0.0) == Catch::Approx(50.0));
  CHECK(val("2^3^2", 0.0) == Catch::Approx(512.0));  // right-associative
  CHECK(val("(2+3)*4", 0.0) == Catch::Approx(20.0));
  CHECK(val("x/4", 2.0) == Catch::Approx(0.5));
  CHECK(val("sqrt(x)*sqrt(x)", 9.0) == Catch::Approx(9.0));
  CHECK(val("abs(cos(x))", gdo::kPi) == Catch::Approx(1.0));
  CHECK(val("exp(x)-1", 0.0) == Catch::Approx(0.0));
  CHECK(val("c*x", 3.0, {{"c", 2.5}}) == Catch::Approx(7.5));
  CHECK(val("1.5e2", 1.0) == Catch::Approx(150.0));
}

TEST_CASE("parser error reporting") {
  CHECK_THROWS_WITH(gdo::parse_structure("x*(x-1"), Catch::Matchers::ContainsSubstring("position"));
  CHECK_THROWS_WITH(gdo::parse_structure("x+foo"),
                    Catch::Matchers::ContainsSubstring("unknown identifier 'foo'"));
  CHECK_THROWS_WITH(gdo::parse_structure("x+*2"), Catch::Matchers::ContainsSubstring("position"));
}

TEST_CASE("parse_structure accepts the paper families and rejects negativity") {
  auto isos_like = gdo::parse_structure("x*(x-1)^2");
  CHECK(isos_like.eval(2.0) == Catch::Approx(2.0));

  auto harm = gdo::parse_structure("x");
  CHECK(harm.eval(0.0) == 0.0);

  CHECK_THROWS_WITH(gdo::parse_structure("x-2"),
                    Catch::Matchers::ContainsSubstring("negative at x = 0"));
}

TEST_CASE("bracket function in the expression DSL") {
  auto f = gdo::parse_structure("abs(bracket(x))", {{"q", 2.0}});
  CHECK(f.eval(3.0) == Catch::Approx(oracle::bracket(2.0, 3.0)).epsilon(1e-14));
  CHECK(f.eval(0.0) == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("eval_structure on built-in families") {
  CHECK(gdo::eval_structure(StructureFunction::isos(), 3.0) == Catch::Approx(12.0));
  CHECK(gdo::eval_structure(StructureFunction::harmonic(), 0.0) == 0.0);

  // q_abs at the 4th root of unity: |sin(pi x / 2)| / sin(pi / 2)
  auto qa = StructureFunction::q_abs(root_of_unity(4));
  CHECK(qa.eval(0.5) ==
        Catch::Approx(std::abs(oracle::bracket_root_of_unity(4, 0.5))).epsilon(1e-13));
  CHECK(qa.eval(0.5) == Catch::Approx(0.70711).margin(5e-6));
}

TEST_CASE("q_symmetric with root-of-unity q evaluates signed") {
  auto qs = StructureFunction::q_symmetric(root_of_unity(4));
  CHECK(qs.raw_eval(3.0).first == Catch::Approx(-1.0).margin(1e-12));
  CHECK_THROWS_AS(qs.eval(3.0), gdo::Error);  // checked eval refuses negatives
}

TEST_CASE("structure function constructor rejections") {
  CHECK_THROWS_AS(StructureFunction::q_symmetric(cplx{2.0, 1.5}), gdo::Error);
  CHECK_THROWS_AS(StructureFunction::self_similar(-1.0, {1.0}), gdo::Error);
  CHECK_THROWS_AS(StructureFunction::self_similar(1.2, {}), gdo::Error);
  CHECK_THROWS_AS(StructureFunction::self_similar(1.2, {1.0, -2.0}), gdo::Error);
}

TEST_CASE("structure_factorial") {
  CHECK(gdo::structure_factorial(StructureFunction::harmonic(), 4) == Catch::Approx(24.0));
  CHECK(gdo::structure_factorial(StructureFunction::q_abs(root_of_unity(6)), 0) == 1.0);
  // isos has F(1) = 0, so the triple product 12 * 2 * 0 collapses
  CHECK(gdo::structure_factorial(StructureFunction::isos(), 3) == 0.0);
  CHECK_THROWS_AS(gdo::structure_factorial(StructureFunction::harmonic(), -1), gdo::Error);
}

TEST_CASE("structure_double_factorial") {
  CHECK(gdo::structure_double_factorial(StructureFunction::harmonic(), 4) == Catch::Approx(8.0));
  CHECK(gdo::structure_double_factorial(StructureFunction::harmonic(), 3) == Catch::Approx(3.0));
  CHECK(gdo::structure_double_factorial(StructureFunction::isos(), -1) == 1.0);
  CHECK(gdo::structure_double_factorial(StructureFunction::isos(), 0) == 1.0);
}

TEST_CASE("every family yields finite nonnegative reals on 1000 random probes") {
  std::vector<StructureFunction> families = {
      StructureFunction::harmonic(),
      StructureFunction::q_symmetric(cplx{2.0, 0.0}),
      StructureFunction::q_abs(root_of_unity(6)),
      StructureFunction::q_abs_shift(root_of_unity(6), 0.25),
      StructureFunction::isos(),
      StructureFunction::self_similar(1.2, {1.0, 2.0}),
      gdo::parse_structure("x*(x-1)^2"),
  };
  oracle::Rng rng(101);
  for (const auto& f : families) {
    for (int t = 0; t < 1000; ++t) {
      const double x = rng.uniform(0.0, 64.0);
      const double v = f.eval(x);
      REQUIRE(std::isfinite(v));
      REQUIRE(v >= 0.0);
    }
  }
}

TEST_CASE("q_symmetric tends to harmonic as q -> 1") {
  auto f = StructureFunction::q_symmetric(cplx{1.0 + 1e-8, 0.0});
  for (int x = 0; x <= 20; ++x)
    CHECK(std::abs(f.eval(x) - static_cast<double>(x)) < 1e-6);
}

TEST_CASE("q_abs periodicity at roots of unity") {
  oracle::Rng rng(55);
  for (int S : {3, 5, 8}) {
    auto f = StructureFunction::q_abs(root_of_unity(S + 1));
    for (int t = 0; t < 100; ++t) {
      const double x = rng.uniform(0.0, 40.0);
      CHECK(std::abs(f.eval(x) - f.eval(x + S + 1)) < 1e-12);
    }
  }
}

TEST_CASE("parsed isos expression agrees with the built-in family") {
  auto parsed = gdo::parse_structure("x*(x-1)^2");
  auto builtin = StructureFunction::isos();
  for (int i = 0; i <= 64; ++i) {
    const double x = 0.5 * i;
    CHECK(std::abs(parsed.eval(x) - builtin.eval(x)) < 1e-14 * std::max(1.0, builtin.eval(x)));
  }
}

TEST_CASE("expression substitution and serialization round-trip") {
  auto ast = gdo::parse_expression("N*(N+1)", {"N"});
  auto sub = gdo::expr_subst(ast, "N", gdo::parse_expression("2*x", {"x"}));
  gdo::ExprEnv env;
  env.values["x"] = cplx{3.0, 0.0};
  CHECK(gdo::expr_eval(sub, env).real() == Catch::Approx(42.0));

  const std::string text = gdo::expr_to_string(sub);
  auto reparsed = gdo::parse_expression(text, {"x"});
  CHECK(gdo::expr_eval(reparsed, env).real() == Catch::Approx(42.0));
}
